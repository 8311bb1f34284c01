//! The Tsallis-INF learner.

mod estimator;
mod solver;
mod trace;

pub use estimator::{importance_weighted_estimate, reduced_variance_estimate, Estimator, LossEstimate};
pub use trace::{play_episode, RegretTrace};
pub use solver::{solve_weights, tsallis_weights, WeightSolution, MAX_ITERATIONS, TOLERANCE};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Learning rate `4 / sqrt(t)` for round `t >= 1`.
pub fn learning_rate(t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::domain("learning rate is defined for rounds t >= 1"));
    }
    Ok(4.0 / (t as f64).sqrt())
}

/// A probability vector over arms with strictly positive entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArmDistribution {
    weights: Vec<f64>,
}

impl ArmDistribution {
    /// Tolerance on `|sum(w) - 1|` accepted by [`ArmDistribution::new`].
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("distribution over zero arms"));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::domain(format!("weights must be positive, found {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::domain(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(k: usize) -> Self {
        Self {
            weights: vec![1.0 / k as f64; k],
        }
    }

    pub(crate) fn from_normalized(weights: Vec<f64>) -> Self {
        debug_assert!(weights.iter().all(|w| *w > 0.0));
        debug_assert!((weights.iter().sum::<f64>() - 1.0).abs() <= Self::SUM_TOLERANCE);
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Inverse-CDF sampling with a single uniform draw `u` in `[0, 1)`.
    ///
    /// Returns the first arm whose cumulative weight exceeds `u`, so ties
    /// go to the lower index. Rounding slack past the last cumulative
    /// weight falls on the last arm.
    pub fn sample_with(&self, u: f64) -> usize {
        let mut cumulative = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            cumulative += w;
            if u < cumulative {
                return i;
            }
        }
        self.weights.len() - 1
    }
}

/// Mutable round state of one learner.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState {
    pub cumulative_estimates: Vec<f64>,
    /// The round about to be played, starting at 1.
    pub round: u64,
    /// Normalization root of the previous solve, relative to the minimum
    /// estimate. Used as a warm start.
    pub last_solver_root: Option<f64>,
}

impl LearnerState {
    pub fn new(k: usize) -> Self {
        Self {
            cumulative_estimates: vec![0.0; k],
            round: 1,
            last_solver_root: None,
        }
    }
}

/// Result of one round of play.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub arm: usize,
    pub loss: f64,
    /// The distribution the arm was drawn from.
    pub weights: ArmDistribution,
}

/// Tsallis-INF with learning rate `4 / sqrt(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TsallisInf {
    state: LearnerState,
    estimator: Estimator,
}

impl TsallisInf {
    pub fn new(k: usize, estimator: Estimator) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("a learner needs at least one arm"));
        }
        Ok(Self {
            state: LearnerState::new(k),
            estimator,
        })
    }

    pub fn num_arms(&self) -> usize {
        self.state.cumulative_estimates.len()
    }

    pub fn state(&self) -> &LearnerState {
        &self.state
    }

    pub fn estimator(&self) -> Estimator {
        self.estimator
    }

    /// Distribution the learner would play this round.
    pub fn current_weights(&self) -> Result<ArmDistribution> {
        let eta = learning_rate(self.state.round)?;
        solve_weights(&self.state.cumulative_estimates, eta, self.state.last_solver_root)
            .map(|s| s.distribution)
    }

    /// Plays one round against a full loss vector. Only the entry of the
    /// chosen arm is read.
    pub fn step<R: Rng + ?Sized>(&mut self, losses: &[f64], rng: &mut R) -> Result<Step> {
        if losses.len() != self.num_arms() {
            return Err(Error::domain(format!(
                "loss vector has {} entries for {} arms",
                losses.len(),
                self.num_arms()
            )));
        }
        self.step_with(rng, |arm| losses[arm])
    }

    /// Plays one round, asking `observe` for the loss of the chosen arm only.
    pub fn step_with<R, F>(&mut self, rng: &mut R, observe: F) -> Result<Step>
    where
        R: Rng + ?Sized,
        F: FnOnce(usize) -> f64,
    {
        let eta = learning_rate(self.state.round)?;
        let solution = solve_weights(
            &self.state.cumulative_estimates,
            eta,
            self.state.last_solver_root,
        )?;
        let weights = solution.distribution;
        let arm = weights.sample_with(rng.random::<f64>());
        let loss = observe(arm);
        let estimate = self.estimator.estimate(&weights, arm, loss, eta);
        for (total, add) in self.state.cumulative_estimates.iter_mut().zip(&estimate.values) {
            *total += add;
        }
        self.state.round += 1;
        self.state.last_solver_root = Some(solution.shifted_root);
        Ok(Step { arm, loss, weights })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim_rng;

    #[test]
    fn learning_rate_values() {
        assert_eq!(learning_rate(1).unwrap(), 4.0);
        assert_eq!(learning_rate(16).unwrap(), 1.0);
        assert_eq!(learning_rate(64).unwrap(), 0.5);
        assert!(matches!(learning_rate(0), Err(Error::Domain(_))));
    }

    #[test]
    fn first_round_is_uniform() {
        let mut learner = TsallisInf::new(5, Estimator::ReducedVariance).unwrap();
        let mut rng = sim_rng(3, 0);
        let step = learner.step(&[0.3, 0.1, 0.9, 0.0, 1.0], &mut rng).unwrap();
        for &w in step.weights.weights() {
            assert!((w - 0.2).abs() < 1e-12);
        }
        assert_eq!(learner.state().round, 2);
    }

    #[test]
    fn only_the_played_loss_is_read() {
        let mut learner = TsallisInf::new(3, Estimator::ReducedVariance).unwrap();
        let mut rng = sim_rng(9, 0);
        for _ in 0..200 {
            let mut reads = Vec::new();
            let step = learner
                .step_with(&mut rng, |arm| {
                    reads.push(arm);
                    0.5
                })
                .unwrap();
            assert_eq!(reads, vec![step.arm]);
        }
    }

    #[test]
    fn sampling_is_inverse_cdf_with_low_index_ties() {
        let w = ArmDistribution::new(vec![0.25, 0.25, 0.5]).unwrap();
        assert_eq!(w.sample_with(0.0), 0);
        assert_eq!(w.sample_with(0.2499), 0);
        assert_eq!(w.sample_with(0.25), 1);
        assert_eq!(w.sample_with(0.5), 2);
        assert_eq!(w.sample_with(0.999_999), 2);
    }

    #[test]
    fn same_seed_same_actions() {
        let script = |t: usize| if (t / 7).is_multiple_of(2) { [0.0, 1.0] } else { [1.0, 0.0] };
        let run = || {
            let mut learner = TsallisInf::new(2, Estimator::ReducedVariance).unwrap();
            let mut rng = sim_rng(42, 0);
            let arms: Vec<usize> = (0..500)
                .map(|t| learner.step(&script(t), &mut rng).unwrap().arm)
                .collect();
            (arms, learner.state().cumulative_estimates.clone())
        };
        let (a1, l1) = run();
        let (a2, l2) = run();
        assert_eq!(a1, a2);
        assert_eq!(l1, l2);
    }

    #[test]
    fn distribution_validation() {
        assert!(ArmDistribution::new(vec![0.5, 0.5]).is_ok());
        assert!(ArmDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(ArmDistribution::new(vec![1.0, 0.0]).is_err());
        assert!(ArmDistribution::new(vec![]).is_err());
    }
}
