//! Weights of the Tsallis-INF learner.
//!
//! The maximizer of `<-L, w> - Psi(w)/eta` over the simplex, with
//! `Psi(w) = 4 * sum(sqrt(w_i) - w_i / 2)`, has the stationarity form
//! `w_i = 4 / (eta * (L_i - x))^2` for a scalar `x < min_i L_i` chosen so
//! that the weights sum to one. Finding `x` is a one-dimensional monotone
//! root problem.

use crate::error::{Error, Result};

use super::ArmDistribution;

/// Iteration cap of the normalization root finder.
pub const MAX_ITERATIONS: usize = 100;
/// Convergence threshold on `|sum(w) - 1|`.
pub const TOLERANCE: f64 = 1e-12;
/// Lower clamp on `L_i - x` while iterating.
const GAP_FLOOR: f64 = 1e-14;

/// Output of the normalization solve.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSolution {
    pub distribution: ArmDistribution,
    /// Root relative to `min_i L_i` (always negative).
    pub shifted_root: f64,
    pub iterations: usize,
}

/// `Phi(x) = sum_i 4 / (eta (l_i - x))^2 - 1` and its derivative in `x`.
fn normalization_residual(shifted: &[f64], eta: f64, x: f64) -> (f64, f64) {
    let mut value = -1.0;
    let mut slope = 0.0;
    for &l in shifted {
        let gap = (l - x).max(GAP_FLOOR);
        let scaled = eta * gap;
        let w = 4.0 / (scaled * scaled);
        value += w;
        slope += 2.0 * w / gap;
    }
    (value, slope)
}

/// Tsallis-INF weights for cumulative loss estimates `estimates` and
/// learning rate `eta`.
pub fn tsallis_weights(estimates: &[f64], eta: f64) -> Result<ArmDistribution> {
    solve_weights(estimates, eta, None).map(|s| s.distribution)
}

/// Same as [`tsallis_weights`], warm-started from a previous shifted root.
///
/// Newton's method on `Phi` with a bisection fallback. `Phi` is increasing
/// and convex on `(-inf, 0)` (after shifting by the minimum), and the root
/// always lies in `[-2 sqrt(K) / eta, -2 / eta]`: at the right end the
/// leading arm alone carries weight one, at the left end every arm carries
/// at most `1/K`.
pub fn solve_weights(
    estimates: &[f64],
    eta: f64,
    warm_start: Option<f64>,
) -> Result<WeightSolution> {
    let k = estimates.len();
    if k == 0 {
        return Err(Error::domain("at least one arm is required"));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::domain(format!("learning rate must be positive, got {eta}")));
    }
    if estimates.iter().any(|l| !l.is_finite()) {
        return Err(Error::domain("loss estimates must be finite"));
    }

    let min = estimates.iter().copied().fold(f64::INFINITY, f64::min);
    let shifted: Vec<f64> = estimates.iter().map(|l| l - min).collect();

    let mut lo = -2.0 * (k as f64).sqrt() / eta;
    let mut hi = -2.0 / eta;
    let mut x = match warm_start {
        Some(w) if w.is_finite() && w > lo && w < hi => w,
        _ => hi,
    };

    let mut residual = f64::INFINITY;
    for iteration in 1..=MAX_ITERATIONS {
        let (phi, slope) = normalization_residual(&shifted, eta, x);
        residual = phi;
        if phi.abs() <= TOLERANCE {
            return Ok(WeightSolution {
                distribution: weights_at(&shifted, eta, x),
                shifted_root: x,
                iterations: iteration,
            });
        }
        if phi > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - phi / slope;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x {
            // Bracket collapsed onto a single float.
            break;
        }
        x = next;
    }
    Err(Error::Solver {
        iterations: MAX_ITERATIONS,
        residual: residual.abs(),
    })
}

fn weights_at(shifted: &[f64], eta: f64, x: f64) -> ArmDistribution {
    let mut weights: Vec<f64> = shifted
        .iter()
        .map(|&l| {
            let scaled = eta * (l - x).max(GAP_FLOOR);
            4.0 / (scaled * scaled)
        })
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    ArmDistribution::from_normalized(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain bisection on the same stationarity equation, run until the
    /// bracket collapses.
    fn bisection_oracle(estimates: &[f64], eta: f64) -> Vec<f64> {
        let min = estimates.iter().copied().fold(f64::INFINITY, f64::min);
        let total = |x: f64| -> f64 {
            estimates
                .iter()
                .map(|l| 4.0 / (eta * (l - min - x)).powi(2))
                .sum()
        };
        let (mut lo, mut hi) = (-1e6_f64, -1e-300_f64);
        for _ in 0..5000 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if total(mid) > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        estimates
            .iter()
            .map(|l| 4.0 / (eta * (l - min - x)).powi(2))
            .collect()
    }

    #[test]
    fn equal_estimates_give_uniform() {
        for eta in [0.01, 0.5, 4.0, 100.0] {
            let w = tsallis_weights(&[3.0; 4], eta).unwrap();
            for &wi in w.weights() {
                assert!((wi - 0.25).abs() < 1e-12, "eta={eta} w={wi}");
            }
        }
    }

    #[test]
    fn two_arm_instance_matches_bisection() {
        let est = [0.0, 10.0];
        let w = tsallis_weights(&est, 4.0).unwrap();
        let oracle = bisection_oracle(&est, 4.0);
        for (a, b) in w.weights().iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
        }
        assert!(w.weights()[0] > 0.99);
    }

    #[test]
    fn constant_shift_is_invisible() {
        let est = [1.5, 0.25, 7.0, 3.0];
        let shifted: Vec<f64> = est.iter().map(|l| l + 1000.0).collect();
        let a = tsallis_weights(&est, 0.7).unwrap();
        let b = tsallis_weights(&shifted, 0.7).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn warm_start_agrees_with_cold_start() {
        let est = [0.0, 2.0, 5.0];
        let cold = solve_weights(&est, 0.3, None).unwrap();
        let warm = solve_weights(&est, 0.3, Some(cold.shifted_root * 1.01)).unwrap();
        for (x, y) in cold.distribution.weights().iter().zip(warm.distribution.weights()) {
            assert!((x - y).abs() <= 1e-12);
        }
        // A warm start outside the bracket is ignored rather than trusted.
        assert!(solve_weights(&est, 0.3, Some(5.0)).is_ok());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(tsallis_weights(&[0.0, 1.0], 0.0), Err(Error::Domain(_))));
        assert!(matches!(tsallis_weights(&[0.0, f64::NAN], 1.0), Err(Error::Domain(_))));
        assert!(matches!(tsallis_weights(&[], 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn single_arm_gets_everything() {
        let w = tsallis_weights(&[42.0], 1.0).unwrap();
        assert_eq!(w.weights(), &[1.0]);
    }

    #[test]
    fn residual_meets_tolerance_at_root() {
        let est = [0.0, 0.5, 80.0, 99.0, 3.0];
        let sol = solve_weights(&est, 4.0 / 1000.0_f64.sqrt(), None).unwrap();
        let min = 0.0;
        let shifted: Vec<f64> = est.iter().map(|l| l - min).collect();
        let (phi, _) = normalization_residual(&shifted, 4.0 / 1000.0_f64.sqrt(), sol.shifted_root);
        assert!(phi.abs() <= TOLERANCE);
        assert!(sol.iterations <= MAX_ITERATIONS);
    }
}
