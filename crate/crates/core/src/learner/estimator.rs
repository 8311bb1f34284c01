//! Loss estimators built from a single bandit observation.

use serde::{Deserialize, Serialize};

use super::ArmDistribution;

/// Which loss estimator the learner feeds into its cumulative estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Importance weighting recentered by a baseline of one half on arms
    /// whose probability is at least `eta^2`.
    #[default]
    ReducedVariance,
    /// Plain importance weighting.
    ImportanceWeighted,
}

/// Estimated loss vector for one round.
#[derive(Debug, Clone, PartialEq)]
pub struct LossEstimate {
    pub values: Vec<f64>,
    pub played_arm: usize,
    /// Per-arm baseline, each entry `0` or `1/2`.
    pub baseline: Vec<f64>,
}

impl Estimator {
    pub fn estimate(
        self,
        w: &ArmDistribution,
        played: usize,
        observed_loss: f64,
        eta: f64,
    ) -> LossEstimate {
        match self {
            Estimator::ReducedVariance => reduced_variance_estimate(w, played, observed_loss, eta),
            Estimator::ImportanceWeighted => importance_weighted_estimate(w, played, observed_loss),
        }
    }
}

/// `l_i = 1[i = played] (loss - B_i) / w_i + B_i` with
/// `B_i = 1/2 * 1[w_i >= eta^2]`.
///
/// # Panics
/// If `played` is not an arm of `w`.
pub fn reduced_variance_estimate(
    w: &ArmDistribution,
    played: usize,
    observed_loss: f64,
    eta: f64,
) -> LossEstimate {
    assert!(played < w.len(), "played arm {played} out of range");
    let threshold = eta * eta;
    let baseline: Vec<f64> = w
        .weights()
        .iter()
        .map(|&wi| if wi >= threshold { 0.5 } else { 0.0 })
        .collect();
    let mut values = baseline.clone();
    values[played] += (observed_loss - baseline[played]) / w.weights()[played];
    LossEstimate {
        values,
        played_arm: played,
        baseline,
    }
}

/// `l_i = 1[i = played] loss / w_i`.
///
/// # Panics
/// If `played` is not an arm of `w`.
pub fn importance_weighted_estimate(
    w: &ArmDistribution,
    played: usize,
    observed_loss: f64,
) -> LossEstimate {
    assert!(played < w.len(), "played arm {played} out of range");
    let mut values = vec![0.0; w.len()];
    values[played] = observed_loss / w.weights()[played];
    LossEstimate {
        values,
        played_arm: played,
        baseline: vec![0.0; w.len()],
    }
}
