//! The trade-off parameter behind the large-corruption bound: the convex
//! objective `f`, its minimizer via the lower Lambert branch, and the
//! chain of upper bounds on `h(B, alpha*)`.

use serde::Serialize;

use super::lambert::lambert_w_minus1;
use crate::error::{Error, Result};

const RANGE_SLACK: f64 = 1e-12;

fn check_common(s: f64, c: f64, k: usize, t: u64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("S must be positive and finite, got {s}")));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("C must be nonnegative, got {c}")));
    }
    if k < 2 {
        return Err(Error::domain("K must be at least 2"));
    }
    if t == 0 {
        return Err(Error::domain("T must be at least 1"));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// `ln(T (K-1) / S^2)`.
fn log_ratio(s: f64, k: usize, t: u64) -> f64 {
    (t as f64 * (k - 1) as f64 / (s * s)).ln()
}

/// `f(alpha) = (S/alpha)(3 + ln(T(K-1)/S^2)) + (2S/alpha) ln(alpha) + alpha C`.
pub fn f_eval(alpha: f64, s: f64, c: f64, k: usize, t: u64) -> Result<f64> {
    check_common(s, c, k, t)?;
    check_alpha(alpha)?;
    Ok(s / alpha * (3.0 + log_ratio(s, k, t)) + 2.0 * s / alpha * alpha.ln() + alpha * c)
}

/// `f'(alpha) = -(1/alpha^2) [2S ln(alpha) - C alpha^2 + S ln((K-1)T/S^2) + S]`.
pub fn f_derivative(alpha: f64, s: f64, c: f64, k: usize, t: u64) -> Result<f64> {
    check_common(s, c, k, t)?;
    check_alpha(alpha)?;
    let bracket = 2.0 * s * alpha.ln() - c * alpha * alpha + s * log_ratio(s, k, t) + s;
    Ok(-bracket / (alpha * alpha))
}

/// `f''(alpha) = (2S/alpha^3)(2 ln(alpha) + ln(T(K-1)/S^2))`.
pub fn f_second_derivative(alpha: f64, s: f64, c: f64, k: usize, t: u64) -> Result<f64> {
    check_common(s, c, k, t)?;
    check_alpha(alpha)?;
    Ok(2.0 * s / alpha.powi(3) * (2.0 * alpha.ln() + log_ratio(s, k, t)))
}

/// `g(beta) = CS beta / ((K-1)T) - ln(beta) - 1`.
pub fn g_eval(beta: f64, s: f64, c: f64, k: usize, t: u64) -> Result<f64> {
    check_common(s, c, k, t)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain(format!("beta must be positive, got {beta}")));
    }
    Ok(c * s * beta / ((k - 1) as f64 * t as f64) - beta.ln() - 1.0)
}

/// `h(B, alpha) = B / (2 - B alpha) * f(alpha)` on `alpha in (0, 2/B)`.
pub fn h_eval(b: f64, alpha: f64, s: f64, c: f64, k: usize, t: u64) -> Result<f64> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!("B must be positive, got {b}")));
    }
    let denominator = 2.0 - b * alpha;
    if !(denominator > 0.0) {
        return Err(Error::domain(format!(
            "h has a pole at alpha = 2/B; need alpha < {}, got {alpha}",
            2.0 / b
        )));
    }
    Ok(b / denominator * f_eval(alpha, s, c, k, t)?)
}

/// Quantities of the self-bounding analysis for one choice of the
/// trade-off parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfBoundingDiagnostics {
    pub s: f64,
    /// Weight on the self-bounding term, in `[0, 1]`.
    pub lambda: f64,
    /// `2 lambda / (B (lambda + 1))`.
    pub alpha: f64,
    /// Minimizer of `f`, when this diagnostic came from [`alpha_star`].
    pub alpha_star: Option<f64>,
    /// `-W_{-1}(-CS / (e (K-1) T))`, at least 1.
    pub w: f64,
    /// Round after which the per-round bound switches to the `1/t` case.
    pub t0: f64,
    /// Round after which all quadratic coefficients are positive; needs
    /// the smallest gap.
    pub t1: Option<f64>,
    /// `S^2 / ((K-1) alpha^2)`.
    pub t2: f64,
}

impl SelfBoundingDiagnostics {
    /// Diagnostics for a fixed `lambda in (0, 1]`.
    pub fn for_lambda(lambda: f64, s: f64, c: f64, k: usize, t: u64, b: f64) -> Result<Self> {
        check_common(s, c, k, t)?;
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::domain(format!("lambda must lie in (0, 1], got {lambda}")));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::domain(format!("B must be positive, got {b}")));
        }
        let alpha = 2.0 * lambda / (b * (lambda + 1.0));
        let km1 = (k - 1) as f64;
        let x = c * s / (km1 * t as f64);
        let w = if x > 0.0 && x <= 1.0 {
            -lambert_w_minus1(-x / std::f64::consts::E)?
        } else {
            f64::NAN
        };
        Ok(Self {
            s,
            lambda,
            alpha,
            alpha_star: None,
            w,
            t0: b * b * (lambda + 1.0).powi(2) * s * s / (4.0 * lambda * lambda * km1),
            t1: None,
            t2: s * s / (km1 * alpha * alpha),
        })
    }

    /// Fills in `T1 = (1 / (alpha Delta_min))^2`.
    pub fn with_delta_min(mut self, delta_min: f64) -> Self {
        self.t1 = Some((1.0 / (self.alpha * delta_min)).powi(2));
        self
    }
}

/// Minimizer of `f` over `[S / sqrt(T(K-1)), 1/B]`,
/// `sqrt((S/C) w)` with `w = -W_{-1}(-CS / (e (K-1) T))`.
///
/// `C` must satisfy `B^2 S (ln((K-1)T / (B^2 S^2)) + 1) <= C <= T(K-1)/S`,
/// which places the root of `g` inside the interval.
pub fn alpha_star(
    s: f64,
    c: f64,
    k: usize,
    t: u64,
    b: f64,
) -> Result<(f64, SelfBoundingDiagnostics)> {
    check_common(s, c, k, t)?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!("B must be positive, got {b}")));
    }
    if !(c > 0.0) {
        return Err(Error::domain("C must be positive"));
    }
    let km1 = (k - 1) as f64;
    let tk = t as f64 * km1;
    let upper = tk / s;
    let lower = b * b * s * ((tk / (b * b * s * s)).ln() + 1.0);
    if c > upper * (1.0 + RANGE_SLACK) {
        return Err(Error::domain(format!(
            "C = {c} violates C <= T(K-1)/S = {upper}"
        )));
    }
    if c < lower * (1.0 - RANGE_SLACK) {
        return Err(Error::domain(format!(
            "C = {c} violates C >= B^2 S (ln((K-1)T/(B^2 S^2)) + 1) = {lower}"
        )));
    }
    let x = (c * s / tk).min(1.0);
    let w = -lambert_w_minus1(-x / std::f64::consts::E)?;
    let alpha = (s / c * w).sqrt().clamp(s / tk.sqrt(), 1.0 / b);
    let lambda = alpha * b / (2.0 - alpha * b);
    let mut diagnostics = SelfBoundingDiagnostics::for_lambda(lambda.min(1.0), s, c, k, t, b)?;
    diagnostics.alpha = alpha;
    diagnostics.alpha_star = Some(alpha);
    diagnostics.w = w;
    diagnostics.t2 = s * s / (km1 * alpha * alpha);
    Ok((alpha, diagnostics))
}

/// The three stages of the closed-form bound on `h(B, alpha*)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HBoundChain {
    pub alpha_star: f64,
    pub w: f64,
    /// `h(B, alpha*)` evaluated directly.
    pub h: f64,
    /// `B/(2 - B alpha*) (2S/alpha* + 2C alpha*)`, equal to `h` at the optimum.
    pub h_substituted: f64,
    /// `B (sqrt(CS/w) + sqrt(CSw) + BS + BSw)`.
    pub lambert_form: f64,
    /// `B sqrt(CS)(sqrt(L) + 2) + B^2 S (L + sqrt(2L) + 2)`, `L = ln(T(K-1)/(CS))`.
    pub closed_form: f64,
}

impl HBoundChain {
    /// Whether each stage is at most the next, up to relative rounding `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        let le = |a: f64, b: f64| a <= b + tol * b.abs().max(1.0);
        (self.h - self.h_substituted).abs() <= tol * self.h.abs().max(1.0)
            && le(self.h_substituted, self.lambert_form)
            && le(self.lambert_form, self.closed_form)
    }
}

/// Evaluates every stage of the bound on `h(B, alpha*)`.
pub fn h_bound_chain(s: f64, c: f64, k: usize, t: u64, b: f64) -> Result<HBoundChain> {
    let (alpha, diagnostics) = alpha_star(s, c, k, t, b)?;
    let w = diagnostics.w;
    let h = h_eval(b, alpha, s, c, k, t)?;
    let h_substituted = b / (2.0 - b * alpha) * (2.0 * s / alpha + 2.0 * c * alpha);
    let cs = c * s;
    let lambert_form = b * ((cs / w).sqrt() + (cs * w).sqrt() + b * s + b * s * w);
    let l = ((k - 1) as f64 * t as f64 / cs).ln().max(0.0);
    let closed_form =
        b * cs.sqrt() * (l.sqrt() + 2.0) + b * b * s * (l + (2.0 * l).sqrt() + 2.0);
    Ok(HBoundChain {
        alpha_star: alpha,
        w,
        h,
        h_substituted,
        lambert_form,
        closed_form,
    })
}
