//! One full episode of play and its record.

use rand::Rng;
use serde::Serialize;

use super::TsallisInf;
use crate::env::{pseudo_regret, Environment};
use crate::error::{Error, Result};

/// Record of one episode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretTrace {
    pub horizon: u64,
    pub num_arms: usize,
    pub actions: Vec<usize>,
    pub incurred_losses: Vec<f64>,
    /// Running pseudo-regret; `None` when the environment has neither known
    /// gaps nor a fixed loss matrix.
    pub cumulative_pseudo_regret: Option<Vec<f64>>,
    /// Row-major `horizon x num_arms` weights played each round. Summed
    /// across episodes these give Monte-Carlo estimates of `E[w_t]`.
    pub weight_sums: Vec<f64>,
    /// Row-major `horizon x num_arms` loss vectors the learner faced.
    pub observed_losses: Vec<f64>,
}

impl RegretTrace {
    /// Weights played in round `t` (1-based).
    pub fn weights_at(&self, t: u64) -> &[f64] {
        let start = (t as usize - 1) * self.num_arms;
        &self.weight_sums[start..start + self.num_arms]
    }

    /// Loss vector of round `t` (1-based).
    pub fn losses_at(&self, t: u64) -> &[f64] {
        let start = (t as usize - 1) * self.num_arms;
        &self.observed_losses[start..start + self.num_arms]
    }

    pub fn final_regret(&self) -> Option<f64> {
        self.cumulative_pseudo_regret.as_ref().and_then(|r| r.last().copied())
    }
}

/// Plays `learner` against `env` for the environment's full horizon.
///
/// The two generators are kept separate so the environment's draws do not
/// depend on the learner's. Failures are reported with the round they
/// occurred in; the seed is left at 0 for the caller to fill in.
pub fn play_episode<R1, R2>(
    learner: &mut TsallisInf,
    env: &mut Environment,
    learner_rng: &mut R1,
    env_rng: &mut R2,
) -> Result<RegretTrace>
where
    R1: Rng + ?Sized,
    R2: Rng + ?Sized,
{
    let k = env.num_arms();
    if learner.num_arms() != k {
        return Err(Error::config(format!(
            "learner has {} arms, environment has {k}",
            learner.num_arms()
        )));
    }
    let horizon = env.horizon();
    let n = horizon as usize;
    let mut actions = Vec::with_capacity(n);
    let mut incurred = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n * k);
    let mut observed = Vec::with_capacity(n * k);
    for t in 1..=horizon {
        let at_round = |e: Error| Error::Episode {
            seed: 0,
            round: t,
            source: Box::new(e),
        };
        let round = env.sample_losses(t, &actions, env_rng).map_err(at_round)?;
        let step = learner.step(&round.losses, learner_rng).map_err(at_round)?;
        weights.extend_from_slice(step.weights.weights());
        observed.extend_from_slice(&round.losses);
        actions.push(step.arm);
        incurred.push(step.loss);
    }
    let cumulative_pseudo_regret = match pseudo_regret(&actions, env) {
        Ok(r) => Some(r),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(RegretTrace {
        horizon,
        num_arms: k,
        actions,
        incurred_losses: incurred,
        cumulative_pseudo_regret,
        weight_sums: weights,
        observed_losses: observed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{EnvironmentSpec, Regime};
    use crate::learner::Estimator;
    use crate::sim_rng;

    fn stochastic(means: Vec<f64>, horizon: u64) -> Environment {
        Environment::new(&EnvironmentSpec::new(Regime::Stochastic { means }, horizon).unwrap())
            .unwrap()
    }

    #[test]
    fn trace_lengths_and_monotone_regret() {
        let mut env = stochastic(vec![0.2, 0.7], 10);
        let mut learner = TsallisInf::new(2, Estimator::ReducedVariance).unwrap();
        let trace =
            play_episode(&mut learner, &mut env, &mut sim_rng(1, 0), &mut sim_rng(1, 1)).unwrap();
        assert_eq!(trace.actions.len(), 10);
        assert_eq!(trace.incurred_losses.len(), 10);
        assert_eq!(trace.weight_sums.len(), 20);
        assert_eq!(trace.observed_losses.len(), 20);
        for t in 1..=10 {
            assert_eq!(trace.losses_at(t)[trace.actions[t as usize - 1]], trace.incurred_losses[t as usize - 1]);
        }
        let regret = trace.cumulative_pseudo_regret.unwrap();
        assert_eq!(regret.len(), 10);
        assert!(regret.windows(2).all(|w| w[1] >= w[0]));
        assert!(trace.incurred_losses.iter().all(|l| *l == 0.0 || *l == 1.0));
    }

    #[test]
    fn weights_rows_are_distributions() {
        let mut env = stochastic(vec![0.5, 0.2, 0.9], 50);
        let mut learner = TsallisInf::new(3, Estimator::ReducedVariance).unwrap();
        let trace =
            play_episode(&mut learner, &mut env, &mut sim_rng(2, 0), &mut sim_rng(2, 1)).unwrap();
        for t in 1..=50 {
            let s: f64 = trace.weights_at(t).iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
        assert_eq!(trace.weights_at(1), &[1.0 / 3.0; 3]);
    }

    #[test]
    fn arm_mismatch_is_a_config_error() {
        let mut env = stochastic(vec![0.5, 0.2], 5);
        let mut learner = TsallisInf::new(3, Estimator::ReducedVariance).unwrap();
        let err = play_episode(&mut learner, &mut env, &mut sim_rng(0, 0), &mut sim_rng(0, 1));
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn adaptive_environment_has_no_regret_trace() {
        let mut env = Environment::adaptive(2, 5, Box::new(|_, _| vec![0.0, 1.0]));
        let mut learner = TsallisInf::new(2, Estimator::ReducedVariance).unwrap();
        let trace =
            play_episode(&mut learner, &mut env, &mut sim_rng(0, 0), &mut sim_rng(0, 1)).unwrap();
        assert!(trace.cumulative_pseudo_regret.is_none());
        assert_eq!(trace.final_regret(), None);
    }
}
