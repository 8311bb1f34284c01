//! Randomized cross-checks of the bound machinery against independent
//! numerical oracles.

use rand::Rng;
use serde::Serialize;

use crate::bounds::{
    alpha_star, corollary_sum_check, f_derivative, f_eval, lambert_bounds, lambert_w_minus1,
    lemma_opt_solve, BRANCH_POINT,
};
use crate::error::Result;
use crate::sim_rng;

/// Default instance counts of the four suites.
pub const DEFAULT_TRIALS: [usize; 4] = [500, 100, 100, 50];

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest error observed, in the suite's own metric.
    pub worst: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Minimum of a convex function on `[lo, hi]`: coarse grid, then golden
/// section on the bracketing cell.
fn minimize_convex(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n: usize = 200;
    let step = (hi - lo) / n as f64;
    let best = (0..=n)
        .min_by(|&a, &b| f(lo + a as f64 * step).total_cmp(&f(lo + b as f64 * step)))
        .unwrap();
    let mut a = lo + best.saturating_sub(1) as f64 * step;
    let mut b = (lo + (best + 1) as f64 * step).min(hi);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = b - ratio * (b - a);
        let x2 = a + ratio * (b - a);
        if f(x1) <= f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let candidates = [lo, hi, 0.5 * (a + b)];
    candidates.into_iter().map(&f).fold(f64::INFINITY, f64::min)
}

/// Budgeted quadratic program: closed form against the minimum of the
/// Lagrange dual `v M + sum_i (b - v)^2 / (4 c_i)` over `v in [0, b]`,
/// plus a feasibility and value check of the returned maximizer.
pub fn quadratic_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let tolerance = 1e-6;
    let mut rng = sim_rng(seed, 0);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let n = rng.random_range(1..=8);
        let b = rng.random_range(0.0..5.0);
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..5.0)).collect();
        let free_total: f64 = c.iter().map(|ci| b / (2.0 * ci)).sum();
        let budget = rng.random_range(0.0..=2.0 * free_total.max(1e-3));
        let solution = lemma_opt_solve(b, &c, budget)?;
        let dual = |v: f64| v * budget + c.iter().map(|ci| (b - v).powi(2) / (4.0 * ci)).sum::<f64>();
        let oracle = if b > 0.0 { minimize_convex(dual, 0.0, b) } else { dual(0.0) };
        let scale = oracle.abs().max(1e-12);
        let primal: f64 = solution
            .maximizer
            .iter()
            .zip(&c)
            .map(|(x, ci)| b * x - ci * x * x)
            .sum();
        let spent: f64 = solution.maximizer.iter().sum();
        let err = ((solution.value - oracle).abs() / scale).max((primal - solution.value).abs() / scale);
        worst = worst.max(err);
        if err > tolerance || spent > budget * (1.0 + 1e-12) + 1e-15 {
            failures += 1;
        }
    }
    Ok(SuiteReport { name: "budgeted quadratic vs dual oracle", trials, failures, worst, tolerance })
}

/// Tail sum `sum_{t > T0} 1/(b t^{3/2} - c t) <= 2/c` on random valid inputs.
pub fn tail_sum_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = sim_rng(seed, 1);
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let b: f64 = rng.random_range(0.1..10.0);
        let c: f64 = rng.random_range(0.1..10.0);
        let min_t0 = ((2.0 * c / b).powi(2)).ceil().max(1.0) as u64;
        let t0 = min_t0 + rng.random_range(0..100);
        let horizon = t0 + rng.random_range(1..50_000);
        let check = corollary_sum_check(b, c, t0, horizon)?;
        worst = worst.max(check.sum / check.bound);
        if !check.holds {
            failures += 1;
        }
    }
    Ok(SuiteReport { name: "tail sum corollary", trials, failures, worst, tolerance: 1.0 })
}

/// Two-sided bracket of `-W_{-1}(-x/e)` on random `x`, and the branch point.
pub fn lambert_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = sim_rng(seed, 2);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        // Log-uniform over (1e-12, 1].
        let x = 10f64.powf(-12.0 * rng.random::<f64>());
        let w = -lambert_w_minus1(-x / std::f64::consts::E)?;
        let (lower, upper) = lambert_bounds(x)?;
        let slack = 1e-12 * upper;
        let violation = (lower - w).max(w - upper).max(0.0);
        worst = worst.max(violation);
        if violation > slack {
            failures += 1;
        }
    }
    let branch_error = (lambert_w_minus1(BRANCH_POINT)? + 1.0).abs();
    worst = worst.max(branch_error);
    if branch_error > 1e-10 {
        failures += 1;
    }
    Ok(SuiteReport { name: "Lambert W bracket", trials, failures, worst, tolerance: 1e-10 })
}

/// Stationarity of `alpha*` and its minimality over a 10^4-point grid.
pub fn alpha_star_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = sim_rng(seed, 3);
    let tolerance = 1e-8;
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < trials {
        let k = rng.random_range(2..=64usize);
        let horizon = 10f64.powf(rng.random_range(3.0..7.0)).round() as u64;
        let km1 = (k - 1) as f64;
        let tk = horizon as f64 * km1;
        let s = rng.random_range(km1..(tk / 100.0).sqrt().max(km1 * 1.01));
        let b = rng.random_range(1.0..1.5);
        let lower = b * b * s * ((tk / (b * b * s * s)).ln() + 1.0);
        let upper = tk / s;
        if !(lower > 0.0 && lower < upper) {
            continue;
        }
        done += 1;
        let c = lower * (upper / lower).powf(rng.random::<f64>());
        let (alpha, _) = alpha_star(s, c, k, horizon, b)?;
        let stationarity = ((tk * alpha * alpha / (s * s)).ln() - (c / s * alpha * alpha - 1.0)).abs();
        let lo = s / tk.sqrt();
        let hi = 1.0 / b;
        let n = 10_000;
        let mut grid_min = f64::INFINITY;
        for i in 0..n {
            let a = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            grid_min = grid_min.min(f_eval(a, s, c, k, horizon)?);
        }
        let at_star = f_eval(alpha, s, c, k, horizon)?;
        let excess = (at_star - grid_min).max(0.0) / grid_min.abs().max(1.0);
        let slope = f_derivative(alpha, s, c, k, horizon)?.abs() * alpha * alpha / s;
        let err = stationarity.max(slope);
        worst = worst.max(err);
        if err > tolerance || excess > 1e-9 {
            failures += 1;
        }
    }
    Ok(SuiteReport { name: "alpha* stationarity and grid minimality", trials, failures, worst, tolerance })
}

/// All four suites; `trials` overrides every default count.
pub fn verify_lemmas(trials: Option<usize>, seed: u64) -> Result<Vec<SuiteReport>> {
    let n = |i: usize| trials.unwrap_or(DEFAULT_TRIALS[i]);
    Ok(vec![
        quadratic_suite(n(0), seed)?,
        tail_sum_suite(n(1), seed)?,
        lambert_suite(n(2), seed)?,
        alpha_star_suite(n(3), seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for report in verify_lemmas(Some(20), 5).unwrap() {
            assert!(report.passed(), "{report:?}");
            assert_eq!(report.trials, 20);
        }
    }

    #[test]
    fn convex_minimizer_finds_interior_minimum() {
        let m = minimize_convex(|x| (x - 0.3).powi(2) + 2.0, 0.0, 1.0);
        assert!((m - 2.0).abs() < 1e-14);
        let m = minimize_convex(|x| x, 0.5, 1.0);
        assert_eq!(m, 0.5);
    }
}
