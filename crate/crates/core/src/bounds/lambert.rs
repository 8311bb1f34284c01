//! The lower real branch of the Lambert W function.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// Branch point `-1/e`.
pub const BRANCH_POINT: f64 = -1.0 / E;
/// Acceptance threshold on `|w e^w - y|`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;

/// Two-sided bounds on `-W_{-1}(-x/e)` for `0 < x <= 1`:
///
/// `1 + sqrt(2 ln(1/x)) + (2/3) ln(1/x) <= -W_{-1}(-x/e) <= 1 + sqrt(2 ln(1/x)) + ln(1/x)`.
pub fn lambert_bounds(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(format!("Lambert bounds need 0 < x <= 1, got {x}")));
    }
    let l = (1.0 / x).ln();
    let common = 1.0 + (2.0 * l).sqrt();
    Ok((common + 2.0 * l / 3.0, common + l))
}

/// `W_{-1}(y)` for `-1/e <= y < 0`: the solution `w <= -1` of `w e^w = y`.
///
/// Solves `w + ln(-w) = ln(-y)` by Newton's method inside the bracket given
/// by [`lambert_bounds`], falling back to bisection whenever a Newton step
/// leaves the bracket. The starting point is the bracket midpoint.
pub fn lambert_w_minus1(y: f64) -> Result<f64> {
    if !(y < 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("W_-1 needs -1/e <= y < 0, got {y}")));
    }
    if y <= BRANCH_POINT {
        // Allow for the rounding of -1/e itself.
        if y < BRANCH_POINT * (1.0 + 4.0 * f64::EPSILON) {
            return Err(Error::domain(format!("W_-1 needs -1/e <= y < 0, got {y}")));
        }
        return Ok(-1.0);
    }

    let x = (-E * y).min(1.0);
    let (lower, upper) = lambert_bounds(x)?;
    let slack = 1e-9;
    let mut a = -upper * (1.0 + slack) - slack;
    let mut b = (-lower * (1.0 - slack) + slack).min(-1.0);
    let target = (-y).ln();
    let equation = |w: f64| w + (-w).ln() - target;

    let mut w = 0.5 * (a + b);
    for _ in 0..MAX_ITERATIONS {
        let value = equation(w);
        if value == 0.0 {
            break;
        }
        if value < 0.0 {
            a = w;
        } else {
            b = w;
        }
        let slope = 1.0 + 1.0 / w;
        let newton = w - value / slope;
        let next = if slope > 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = (next - w).abs();
        w = next;
        if step <= 4.0 * f64::EPSILON * w.abs() {
            break;
        }
    }

    let residual = (w * w.exp() - y).abs();
    if residual > RESIDUAL_TOLERANCE {
        return Err(Error::Solver {
            iterations: MAX_ITERATIONS,
            residual,
        });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bisection on `w e^w = y` over `[-800, -1]`.
    fn bisection(y: f64) -> f64 {
        let (mut lo, mut hi) = (-800.0_f64, -1.0_f64);
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            // On (-inf, -1] the map w -> w e^w is decreasing.
            if mid * mid.exp() > y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn branch_point() {
        assert_eq!(lambert_w_minus1(BRANCH_POINT).unwrap(), -1.0);
    }

    #[test]
    fn matches_bisection() {
        let w = lambert_w_minus1(-0.1).unwrap();
        assert!((w * w.exp() + 0.1).abs() <= 1e-12);
        assert!((w - bisection(-0.1)).abs() <= 1e-9);
        assert!((w - (-3.577_152_063_957_297)).abs() < 1e-12);
    }

    #[test]
    fn across_the_domain() {
        for y in [-0.367, -0.3, -0.2, -1e-3, -1e-10, -1e-100, -1e-300] {
            let w = lambert_w_minus1(y).unwrap();
            assert!(w <= -1.0);
            assert!((w * w.exp() - y).abs() <= RESIDUAL_TOLERANCE, "y={y}");
            let (lo, hi) = lambert_bounds(-E * y).unwrap();
            assert!(lo <= -w + 1e-12 && -w <= hi + 1e-12, "y={y}: {lo} {w} {hi}");
        }
    }

    #[test]
    fn near_branch_point_is_accurate() {
        let y = BRANCH_POINT + 1e-10;
        let w = lambert_w_minus1(y).unwrap();
        assert!((w - bisection(y)).abs() < 1e-6);
        assert!(w < -1.0);
    }

    #[test]
    fn domain_errors() {
        for y in [0.0, 0.1, -0.5, f64::NAN] {
            assert!(matches!(lambert_w_minus1(y), Err(Error::Domain(_))), "y={y}");
        }
        for x in [0.0, -1.0, 1.5] {
            assert!(lambert_bounds(x).is_err());
        }
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(lambert_bounds(1.0).unwrap(), (1.0, 1.0));
        let (lo, hi) = lambert_bounds((-2.0f64).exp()).unwrap();
        assert!((lo - (3.0 + 4.0 / 3.0)).abs() < 1e-12);
        assert!((hi - 5.0).abs() < 1e-12);
    }
}
