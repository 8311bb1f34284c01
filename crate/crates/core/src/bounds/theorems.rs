//! Regret bounds of Tsallis-INF (original and refined analysis) and of
//! any algorithm satisfying the square-root condition.

use super::{BoundInputs, BoundSet, BoundValue};

/// Relative slack when testing whether `C` lies in a closed range.
const RANGE_SLACK: f64 = 1e-12;

/// Gap-derived quantities, or the reason they are unavailable.
struct GapTerms {
    s: f64,
    delta_min: f64,
    suboptimal: Vec<f64>,
}

fn gap_terms(inputs: &BoundInputs) -> Result<GapTerms, &'static str> {
    let gaps = inputs.gaps.as_ref().ok_or("gaps unknown")?;
    if !gaps.unique_best() {
        return Err("non-unique best arm");
    }
    let best = gaps.best_arm();
    let suboptimal = gaps
        .gaps()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best)
        .map(|(_, &g)| g)
        .collect();
    Ok(GapTerms {
        s: gaps.inverse_gap_sum(),
        delta_min: gaps.delta_min(),
        suboptimal,
    })
}

fn in_range(c: f64, lower: f64, upper: f64) -> Result<(), String> {
    // ln(T (K-1) / (C S)) is undefined at C = 0.
    if c <= 0.0 {
        Err("requires C > 0".to_string())
    } else if c < lower - RANGE_SLACK * lower.abs() {
        Err(format!("C = {c} below lower limit {lower}"))
    } else if c > upper + RANGE_SLACK * upper.abs() {
        Err(format!("C = {c} above upper limit {upper}"))
    } else {
        Ok(())
    }
}

fn unavailable(reason: &str) -> BoundValue {
    BoundValue::invalid(f64::NAN, reason)
}

/// Bounds of the original Tsallis-INF analysis: `2 sqrt(KT) + 10 K ln T + 16`
/// for any adversary, a `sum_i (ln T + 3) / gap_i` bound under the
/// self-bounding constraint, and a `2 sqrt(.. C)` bound for large `C`.
pub fn theorem1_bounds(inputs: &BoundInputs) -> BoundSet {
    let k = inputs.arms as f64;
    let t = inputs.horizon as f64;
    let lt = t.ln();
    let c = inputs.corruption;

    let adv = 2.0 * (k * t).sqrt() + 10.0 * k * lt + 16.0;
    let adversarial = if inputs.horizon >= 2 {
        BoundValue::valid(adv)
    } else {
        BoundValue::invalid(adv, "requires T >= 2")
    };

    let (self_bounding, large_corruption) = match gap_terms(inputs) {
        Err(reason) => (unavailable(reason), unavailable(reason)),
        Ok(g) => {
            let log_sum: f64 = g.suboptimal.iter().map(|d| (lt + 3.0) / d).sum();
            let tail = 28.0 * k * lt + 1.5 * k.sqrt() + 32.0;
            let sto = log_sum + tail + 1.0 / g.delta_min + c;
            let threshold = log_sum + 1.0 / g.delta_min;
            let sto_c = 2.0 * (threshold * c).sqrt() + tail;
            let sto = if inputs.horizon >= 2 {
                BoundValue::valid(sto)
            } else {
                BoundValue::invalid(sto, "requires T >= 2")
            };
            let sto_c = if inputs.horizon < 2 {
                BoundValue::invalid(sto_c, "requires T >= 2")
            } else if c < threshold {
                BoundValue::invalid(sto_c, format!("C = {c} below lower limit {threshold}"))
            } else {
                BoundValue::valid(sto_c)
            };
            (sto, sto_c)
        }
    };

    BoundSet {
        adversarial,
        self_bounding,
        large_corruption,
    }
}

/// Refined Tsallis-INF bounds: adversarial, general self-bounding, and the
/// large-corruption bound with its subdominant term `Q`.
pub fn theorem2_bounds(inputs: &BoundInputs) -> BoundSet {
    let k = inputs.arms as f64;
    let t = inputs.horizon as f64;
    let lt = t.ln();
    let c = inputs.corruption;

    let adversarial = BoundValue::valid(
        2.0 * ((k - 1.0) * t).sqrt() + 0.5 * t.sqrt() + 14.0 * k * lt + 0.75 * k.sqrt() + 15.0,
    );

    let (self_bounding, large_corruption) = match gap_terms(inputs) {
        Err(reason) => (unavailable(reason), unavailable(reason)),
        Ok(g) => {
            let s = g.s;
            let tail = 28.0 * k * lt + 1.5 * k.sqrt() + 30.0;
            let log_ratio = (t * (k - 1.0) / (s * s)).ln();
            let sto = s * (log_ratio + 6.0) + tail + c;
            // The threshold split at lambda = 1 needs T >= S^2 / (K - 1).
            let sto = if log_ratio >= 0.0 {
                BoundValue::valid(sto)
            } else {
                BoundValue::invalid(sto, "requires T (K-1) >= S^2")
            };

            let lower = s * (log_ratio + 1.0);
            let upper = t * (k - 1.0) / s;
            let sto_c = match in_range(c, lower, upper) {
                Ok(()) => {
                    let lc = (t * (k - 1.0) / (c * s)).ln().max(0.0);
                    BoundValue::valid(large_corruption_t2(c, s, lc, tail))
                }
                Err(reason) => {
                    let lc = (t * (k - 1.0) / (c * s)).ln();
                    BoundValue::invalid(large_corruption_t2(c, s, lc, tail), reason)
                }
            };
            (sto, sto_c)
        }
    };

    BoundSet {
        adversarial,
        self_bounding,
        large_corruption,
    }
}

fn large_corruption_t2(c: f64, s: f64, lc: f64, tail: f64) -> f64 {
    let q = s * (lc + (2.0 * lc).sqrt() + 2.0) + tail;
    (c * s).sqrt() * (lc.sqrt() + 5.0) + q
}

/// Bounds implied by the square-root condition
/// `Reg_T <= B sum_t sum_{i != i*} sqrt(E[w_ti] / t) + D`.
pub fn theorem3_bounds(inputs: &BoundInputs) -> BoundSet {
    let k = inputs.arms as f64;
    let t = inputs.horizon as f64;
    let c = inputs.corruption;
    let b = inputs.b;
    let d = inputs.d();

    let adversarial = BoundValue::valid(2.0 * b * ((k - 1.0) * t).sqrt() + d);

    let (self_bounding, large_corruption) = match gap_terms(inputs) {
        Err(reason) => (unavailable(reason), unavailable(reason)),
        Ok(g) => {
            let s = g.s;
            let b2 = b * b;
            // B^2 (3 - 2 ln B) vanishes as B -> 0.
            let constant = if b > 0.0 { b2 * (3.0 - 2.0 * b.ln()) } else { 0.0 };
            let sto = b2 * s * (t * (k - 1.0) / (s * s)).ln() + constant * s + c + 2.0 * d;
            // The threshold split at lambda = 1 needs T >= B^2 S^2 / (K - 1).
            let sto = if t * (k - 1.0) >= b2 * s * s {
                BoundValue::valid(sto)
            } else {
                BoundValue::invalid(sto, "requires T (K-1) >= B^2 S^2")
            };

            let upper = t * (k - 1.0) / s;
            let large = |lc: f64| {
                let m = b2 * s * (lc + (2.0 * lc).sqrt() + 2.0) + 2.0 * d;
                b * (c * s).sqrt() * (lc.sqrt() + 2.0) + m
            };
            let sto_c = if b > 0.0 {
                let lower = b2 * s * ((t * (k - 1.0) / (b2 * s * s)).ln() + 1.0);
                match in_range(c, lower, upper) {
                    Ok(()) => BoundValue::valid(large((t * (k - 1.0) / (c * s)).ln().max(0.0))),
                    Err(reason) => {
                        BoundValue::invalid(large((t * (k - 1.0) / (c * s)).ln()), reason)
                    }
                }
            } else {
                BoundValue::invalid(large((t * (k - 1.0) / (c * s)).ln()), "requires B > 0")
            };
            (sto, sto_c)
        }
    };

    BoundSet {
        adversarial,
        self_bounding,
        large_corruption,
    }
}
