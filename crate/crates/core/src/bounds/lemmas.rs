//! Two auxiliary results used by the bound derivations: a concave
//! quadratic program with one budget constraint, and a tail-sum estimate.

use crate::error::{Error, Result};

/// Solution of `max_x sum_i (b x_i - c_i x_i^2)` subject to `sum_i x_i <= M`.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetedQuadratic {
    pub value: f64,
    pub maximizer: Vec<f64>,
    /// Whether the budget constraint is active at the optimum.
    pub constrained: bool,
}

impl BudgetedQuadratic {
    /// Unconstrained optimum `(b^2 / 4) sum_i 1/c_i`, an upper bound on
    /// `value` in every case.
    pub fn unconstrained_value(b: f64, c: &[f64]) -> f64 {
        b * b / 4.0 * c.iter().map(|ci| 1.0 / ci).sum::<f64>()
    }
}

/// Closed-form solution of the budgeted quadratic program.
///
/// If `sum_i b / (2 c_i) > M` the budget binds: `x_i = M / (c_i sum_j 1/c_j)`
/// and the value is `b M - M^2 / sum_j 1/c_j`. Otherwise `x_i = b / (2 c_i)`
/// with value `(b^2/4) sum_j 1/c_j`.
///
/// Zero coefficients are rejected: the objective is then unbounded for
/// `b > 0`.
pub fn lemma_opt_solve(b: f64, c: &[f64], budget: f64) -> Result<BudgetedQuadratic> {
    if c.is_empty() {
        return Err(Error::domain("need at least one coefficient"));
    }
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::domain(format!("b must be a nonnegative number, got {b}")));
    }
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::domain(format!("M must be a nonnegative number, got {budget}")));
    }
    if let Some(ci) = c.iter().find(|ci| !(**ci > 0.0 && ci.is_finite())) {
        return Err(Error::domain(format!(
            "coefficients must be positive, got {ci} (zero makes the maximum infinite)"
        )));
    }
    let inverse_sum: f64 = c.iter().map(|ci| 1.0 / ci).sum();
    if b / 2.0 * inverse_sum > budget {
        Ok(BudgetedQuadratic {
            value: b * budget - budget * budget / inverse_sum,
            maximizer: c.iter().map(|ci| budget / (ci * inverse_sum)).collect(),
            constrained: true,
        })
    } else {
        Ok(BudgetedQuadratic {
            value: b * b / 4.0 * inverse_sum,
            maximizer: c.iter().map(|ci| b / (2.0 * ci)).collect(),
            constrained: false,
        })
    }
}

/// Outcome of [`corollary_sum_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSumCheck {
    pub sum: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `sum_{t=T0+1}^{T} 1 / (b t^{3/2} - c t)` against the bound `2/c`, valid
/// whenever `b sqrt(T0) >= 2c`.
pub fn corollary_sum_check(b: f64, c: f64, t0: u64, horizon: u64) -> Result<TailSumCheck> {
    if !(b > 0.0 && c > 0.0) {
        return Err(Error::domain(format!("need b > 0 and c > 0, got b={b}, c={c}")));
    }
    if t0 >= horizon {
        return Err(Error::domain(format!("need T0 < T, got T0={t0}, T={horizon}")));
    }
    if b * (t0 as f64).sqrt() < 2.0 * c {
        return Err(Error::domain(format!(
            "need b sqrt(T0) >= 2c, got {} < {}",
            b * (t0 as f64).sqrt(),
            2.0 * c
        )));
    }
    // Smallest terms first.
    let sum: f64 = (t0 + 1..=horizon)
        .rev()
        .map(|t| {
            let t = t as f64;
            1.0 / (b * t * t.sqrt() - c * t)
        })
        .sum();
    let bound = 2.0 / c;
    Ok(TailSumCheck {
        sum,
        bound,
        holds: sum <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force grid search over `x` for a single coefficient.
    fn grid_max(b: f64, c: f64, budget: f64) -> (f64, f64) {
        let mut best = (f64::NEG_INFINITY, 0.0);
        let steps = 60_000;
        for k in 0..=steps {
            let x = -3.0 + 6.0 * k as f64 / steps as f64;
            if x > budget + 1e-12 {
                continue;
            }
            let v = b * x - c * x * x;
            if v > best.0 {
                best = (v, x);
            }
        }
        best
    }

    #[test]
    fn zero_b() {
        let s = lemma_opt_solve(0.0, &[1.0, 2.0], 3.0).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.maximizer, vec![0.0, 0.0]);
    }

    #[test]
    fn unconstrained_case_matches_grid() {
        let s = lemma_opt_solve(2.0, &[1.0], 2.0).unwrap();
        assert!(!s.constrained);
        assert_eq!(s.value, 1.0);
        assert_eq!(s.maximizer, vec![1.0]);
        let (v, x) = grid_max(2.0, 1.0, 2.0);
        assert!((v - 1.0).abs() < 1e-8 && (x - 1.0).abs() < 1e-4);
    }

    #[test]
    fn constrained_case_matches_grid() {
        let s = lemma_opt_solve(2.0, &[1.0], 0.5).unwrap();
        assert!(s.constrained);
        assert_eq!(s.value, 0.75);
        assert_eq!(s.maximizer, vec![0.5]);
        let (v, x) = grid_max(2.0, 1.0, 0.5);
        assert!((v - 0.75).abs() < 1e-8 && (x - 0.5).abs() < 1e-4);
    }

    #[test]
    fn value_never_exceeds_unconstrained() {
        for budget in [0.0, 0.1, 1.0, 10.0] {
            let c = [0.5, 2.0, 3.0];
            let s = lemma_opt_solve(1.7, &c, budget).unwrap();
            assert!(s.value <= BudgetedQuadratic::unconstrained_value(1.7, &c) + 1e-12);
            assert!(s.maximizer.iter().sum::<f64>() <= budget + 1e-12);
        }
    }

    #[test]
    fn rejects_degenerate_coefficients() {
        assert!(lemma_opt_solve(1.0, &[1.0, 0.0], 1.0).is_err());
        assert!(lemma_opt_solve(1.0, &[], 1.0).is_err());
        assert!(lemma_opt_solve(-1.0, &[1.0], 1.0).is_err());
        assert!(lemma_opt_solve(1.0, &[1.0], -1.0).is_err());
    }

    #[test]
    fn tail_sum_examples() {
        let r = corollary_sum_check(2.0, 1.0, 1, 10_000).unwrap();
        assert!(r.holds && r.sum <= 2.0);
        let r = corollary_sum_check(4.0, 1.0, 1, 2).unwrap();
        let expected = 1.0 / (4.0 * 2.0f64.powf(1.5) - 2.0);
        assert!((r.sum - expected).abs() < 1e-15);
        assert!(r.holds);
    }

    #[test]
    fn tail_sum_preconditions() {
        assert!(corollary_sum_check(1.0, 1.0, 1, 10).is_err());
        assert!(corollary_sum_check(4.0, 1.0, 10, 10).is_err());
        assert!(corollary_sum_check(0.0, 1.0, 1, 10).is_err());
    }
}
