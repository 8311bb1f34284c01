//! Closed-form regret bounds and the numerical pieces behind them.
//!
//! Logarithms are natural throughout. Every bound is returned as a
//! [`BoundValue`] carrying a validity flag: a bound evaluated outside the
//! range of corruption levels it was derived for, or for a gap profile
//! without a unique best arm, is still reported but flagged.

mod lambert;
mod lemmas;
mod theorems;
mod tradeoff;

pub use lambert::{lambert_bounds, lambert_w_minus1, BRANCH_POINT};
pub use lemmas::{corollary_sum_check, lemma_opt_solve, BudgetedQuadratic, TailSumCheck};
pub use theorems::{theorem1_bounds, theorem2_bounds, theorem3_bounds};
pub use tradeoff::{
    alpha_star, f_derivative, f_eval, f_second_derivative, g_eval, h_bound_chain, h_eval,
    HBoundChain, SelfBoundingDiagnostics,
};

use serde::{Deserialize, Serialize};

use crate::env::GapProfile;
use crate::error::{Error, Result};

/// `max(1, ln x)` for `x > 0`.
pub fn log_plus(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("log_+ needs x > 0, got {x}")));
    }
    Ok(x.ln().max(1.0))
}

/// The additive constant `D` of the square-root regret condition.
///
/// Serialized as a number, or as the string `"tsallis_inf"` for the
/// horizon-dependent Tsallis-INF value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdditiveTerm {
    Fixed(f64),
    /// `(3/4) sqrt(K) + 14 K ln T + 15`.
    TsallisInf,
}

const TSALLIS_TAG: &str = "tsallis_inf";

impl Serialize for AdditiveTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AdditiveTerm::Fixed(d) => s.serialize_f64(*d),
            AdditiveTerm::TsallisInf => s.serialize_str(TSALLIS_TAG),
        }
    }
}

impl<'de> Deserialize<'de> for AdditiveTerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(AdditiveTerm::Fixed(v)),
            Raw::Tag(t) if t == TSALLIS_TAG => Ok(AdditiveTerm::TsallisInf),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!(
                "unknown additive term {t:?}, expected a number or {TSALLIS_TAG:?}"
            ))),
        }
    }
}

/// Parameters of a regret bound evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub arms: usize,
    pub horizon: u64,
    /// Gaps of the self-bounding constraint; `None` in purely adversarial
    /// settings.
    pub gaps: Option<GapProfile>,
    pub corruption: f64,
    /// Multiplier `B` of the square-root condition.
    pub b: f64,
    pub d: AdditiveTerm,
}

impl BoundInputs {
    /// `B` for Tsallis-INF.
    pub const TSALLIS_B: f64 = 1.25;

    /// `D` for Tsallis-INF at `k` arms and horizon `t`.
    pub fn tsallis_d(k: usize, t: u64) -> f64 {
        let k = k as f64;
        0.75 * k.sqrt() + 14.0 * k * (t as f64).ln() + 15.0
    }

    /// Tsallis-INF constants for a gap profile.
    pub fn tsallis(gaps: GapProfile, horizon: u64, corruption: f64) -> Self {
        Self {
            arms: gaps.num_arms(),
            horizon,
            gaps: Some(gaps),
            corruption,
            b: Self::TSALLIS_B,
            d: AdditiveTerm::TsallisInf,
        }
    }

    /// Tsallis-INF constants without gap information.
    pub fn tsallis_adversarial(arms: usize, horizon: u64) -> Self {
        Self {
            arms,
            horizon,
            gaps: None,
            corruption: 0.0,
            b: Self::TSALLIS_B,
            d: AdditiveTerm::TsallisInf,
        }
    }

    pub fn with_sqrt_condition(mut self, b: f64, d: f64) -> Self {
        self.b = b;
        self.d = AdditiveTerm::Fixed(d);
        self
    }

    /// Same inputs with a different horizon.
    pub fn at_horizon(&self, horizon: u64) -> Self {
        Self {
            horizon,
            ..self.clone()
        }
    }

    pub fn d(&self) -> f64 {
        match self.d {
            AdditiveTerm::Fixed(d) => d,
            AdditiveTerm::TsallisInf => Self::tsallis_d(self.arms, self.horizon),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.arms < 2 {
            return Err(Error::domain("bounds need at least two arms"));
        }
        if self.horizon == 0 {
            return Err(Error::domain("horizon must be at least 1"));
        }
        if let Some(g) = &self.gaps {
            if g.num_arms() != self.arms {
                return Err(Error::domain(format!(
                    "gap profile has {} arms, inputs say {}",
                    g.num_arms(),
                    self.arms
                )));
            }
        }
        if !(self.corruption >= 0.0 && self.corruption.is_finite()) {
            return Err(Error::domain("corruption level must be a nonnegative number"));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) || !(self.d() >= 0.0) {
            return Err(Error::domain("B and D must be nonnegative"));
        }
        Ok(())
    }
}

/// An evaluated regret bound.
///
/// Equality treats two NaN values as equal, so unavailable bounds compare
/// equal to each other.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub valid: bool,
    /// Why the bound does not apply, when `valid` is false.
    pub validity_reason: Option<String>,
}

impl BoundValue {
    pub fn valid(value: f64) -> Self {
        Self {
            value,
            valid: true,
            validity_reason: None,
        }
    }

    pub fn invalid(value: f64, reason: impl Into<String>) -> Self {
        Self {
            value,
            valid: false,
            validity_reason: Some(reason.into()),
        }
    }

    /// The value when the bound applies.
    pub fn get(&self) -> Option<f64> {
        self.valid.then_some(self.value)
    }
}

impl PartialEq for BoundValue {
    fn eq(&self, other: &Self) -> bool {
        let same_value =
            self.value == other.value || (self.value.is_nan() && other.value.is_nan());
        same_value && self.valid == other.valid && self.validity_reason == other.validity_reason
    }
}

/// The three bounds of one theorem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSet {
    /// Bound for arbitrary adversaries.
    pub adversarial: BoundValue,
    /// Bound under the self-bounding constraint.
    pub self_bounding: BoundValue,
    /// Refined bound for large corruption levels.
    pub large_corruption: BoundValue,
}

impl BoundSet {
    pub fn values(&self) -> [&BoundValue; 3] {
        [&self.adversarial, &self.self_bounding, &self.large_corruption]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_plus_examples() {
        assert!((log_plus(std::f64::consts::E.powi(2)).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(log_plus(1.0).unwrap(), 1.0);
        assert_eq!(log_plus(0.5).unwrap(), 1.0);
        assert!(log_plus(0.0).is_err());
        assert!(log_plus(-1.0).is_err());
    }

    #[test]
    fn tsallis_defaults() {
        let inputs = BoundInputs::tsallis(GapProfile::new(vec![0.0, 0.5]).unwrap(), 100, 0.0);
        assert_eq!(inputs.b, 1.25);
        let d = 0.75 * 2f64.sqrt() + 28.0 * 100f64.ln() + 15.0;
        assert!((inputs.d() - d).abs() < 1e-12);
        let later = inputs.at_horizon(1000);
        assert!(later.d() > inputs.d());
    }

    #[test]
    fn additive_term_serde() {
        let fixed: AdditiveTerm = serde_json::from_str("3.5").unwrap();
        assert_eq!(fixed, AdditiveTerm::Fixed(3.5));
        let tagged: AdditiveTerm = serde_json::from_str("\"tsallis_inf\"").unwrap();
        assert_eq!(tagged, AdditiveTerm::TsallisInf);
        assert_eq!(serde_json::to_string(&tagged).unwrap(), "\"tsallis_inf\"");
        assert!(serde_json::from_str::<AdditiveTerm>("\"other\"").is_err());
    }
}
