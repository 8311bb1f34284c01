//! Multi-seed experiment runner.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::overlay::{bound_overlay, overlay_inputs, BoundOverlay};
use crate::env::{load_script, script_best_arm, Environment, EnvironmentSpec, Regime};
use crate::error::{Error, Result};
use crate::learner::{play_episode, RegretTrace, TsallisInf};
use crate::sim_rng;

/// Seeds run concurrently per batch; bounds the number of live traces.
const BATCH: usize = 8;

/// Learner and environment generators of one seed.
///
/// Both are ChaCha8 keyed by the master seed; seed `s` owns streams `2s`
/// (learner) and `2s + 1` (environment). Streams never overlap, so results
/// do not depend on how seeds are scheduled.
pub fn seed_streams(master_seed: u64, seed: u64) -> (crate::SimRng, crate::SimRng) {
    (sim_rng(master_seed, 2 * seed), sim_rng(master_seed, 2 * seed + 1))
}

/// Seed-averaged outcome of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateResult {
    pub regime: String,
    /// Whether the learner faced corrupted losses; the pseudo-regret is
    /// then measured on the clean means.
    pub corrupted: bool,
    pub horizon: u64,
    pub num_arms: usize,
    pub seeds: Vec<u64>,
    pub checkpoints: Vec<u64>,
    /// Mean pseudo-regret at each checkpoint.
    pub mean_regret: Vec<f64>,
    /// Standard error of the mean at each checkpoint.
    pub stderr: Vec<f64>,
    /// Pseudo-regret at the horizon, one entry per seed in seed-list order.
    pub final_regrets: Vec<f64>,
    pub mean_final_regret: f64,
    pub stderr_final_regret: f64,
    /// Reference arm of the pseudo-regret.
    pub best_arm: usize,
    /// Regret on the losses actually faced, against the arm with the
    /// smallest mean cumulative loss, at each checkpoint. The learner's loss
    /// is taken in expectation over its own draw, `sum_i w_ti l_ti`.
    /// Coincides in expectation with the pseudo-regret unless losses are
    /// corrupted.
    pub observed_regret: Vec<f64>,
    pub observed_stderr: Vec<f64>,
    pub mean_final_observed_regret: f64,
    pub stderr_final_observed_regret: f64,
    /// Row-major `horizon x num_arms` mean of the played weights.
    #[serde(skip)]
    pub mean_weights: Vec<f64>,
    pub overlay: BoundOverlay,
}

impl AggregateResult {
    /// Monte-Carlo estimate of `E[w_t]` for round `t` (1-based).
    pub fn mean_weights_at(&self, t: u64) -> &[f64] {
        let start = (t as usize - 1) * self.num_arms;
        &self.mean_weights[start..start + self.num_arms]
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

struct SeedSummary {
    at_checkpoints: Vec<f64>,
    final_regret: f64,
    weights: Vec<f64>,
    /// Per checkpoint (then the horizon): cumulative `sum_t w_t . l_t`
    /// followed by the cumulative loss of every arm.
    observed: Vec<Vec<f64>>,
}

/// Cumulative expected learner loss and per-arm losses at the given rounds.
fn observed_cumulatives(trace: &RegretTrace, rounds: &[u64]) -> Vec<Vec<f64>> {
    let k = trace.num_arms;
    let mut acc = vec![0.0; k + 1];
    let mut out = Vec::with_capacity(rounds.len());
    let mut next = rounds.iter().peekable();
    for t in 1..=trace.horizon {
        let w = trace.weights_at(t);
        let l = trace.losses_at(t);
        acc[0] += w.iter().zip(l).map(|(a, b)| a * b).sum::<f64>();
        for (a, x) in acc[1..].iter_mut().zip(l) {
            *a += x;
        }
        while next.peek() == Some(&&t) {
            out.push(acc.clone());
            next.next();
        }
    }
    out
}

/// Mean and standard error of the observed regret from per-seed cumulatives.
fn observed_regret(per_seed: &[&[f64]]) -> (f64, f64) {
    let k = per_seed[0].len() - 1;
    let n = per_seed.len() as f64;
    let best = (0..k)
        .map(|j| (j, per_seed.iter().map(|c| c[j + 1]).sum::<f64>() / n))
        .fold((0, f64::INFINITY), |b, (j, m)| if m < b.1 { (j, m) } else { b })
        .0;
    let diffs: Vec<f64> = per_seed.iter().map(|c| c[0] - c[best + 1]).collect();
    mean_and_stderr(&diffs)
}

fn run_seed(
    config: &ExperimentConfig,
    spec: &EnvironmentSpec,
    script: Option<&Arc<crate::env::LossScript>>,
    seed: u64,
) -> Result<SeedSummary> {
    let tag = |e: Error| match e {
        Error::Episode { round, source, .. } => Error::Episode { seed, round, source },
        other => Error::Episode {
            seed,
            round: 0,
            source: Box::new(other),
        },
    };
    let mut env = match script {
        Some(s) => Environment::with_script(spec, Arc::clone(s)),
        None => Environment::new(spec),
    }
    .map_err(tag)?;
    let mut learner = TsallisInf::new(env.num_arms(), config.learner.estimator).map_err(tag)?;
    let (mut learner_rng, mut env_rng) = seed_streams(config.master_seed, seed);
    let mut trace: RegretTrace =
        play_episode(&mut learner, &mut env, &mut learner_rng, &mut env_rng).map_err(tag)?;
    let regret = trace.cumulative_pseudo_regret.take().ok_or_else(|| {
        Error::Unsupported("environment has no pseudo-regret reference".into())
    })?;
    let mut rounds = config.checkpoints.clone();
    rounds.push(config.horizon);
    Ok(SeedSummary {
        at_checkpoints: config.checkpoints.iter().map(|&c| regret[c as usize - 1]).collect(),
        final_regret: *regret.last().expect("horizon is at least 1"),
        observed: observed_cumulatives(&trace, &rounds),
        weights: trace.weight_sums,
    })
}

/// Runs every seed of `config` and aggregates in seed-list order.
///
/// Seeds run on the current rayon pool. The reduction order is fixed, so
/// the result is identical for any number of threads.
pub fn run_experiment(config: &ExperimentConfig) -> Result<AggregateResult> {
    config.validate()?;
    let spec = config.environment_spec()?;
    let script = match &spec.regime {
        Regime::AdversarialScript { script } => Some(Arc::new(load_script(script, spec.horizon)?)),
        _ => None,
    };
    let seeds = config.seeds.seeds();
    let k = match (&script, spec.gap_profile()) {
        (Some(s), _) => s.num_arms(),
        (None, Some(g)) => g.num_arms(),
        (None, None) => return Err(Error::Unsupported("cannot determine the number of arms".into())),
    };
    let horizon = spec.horizon;

    let mut weight_sum = vec![0.0; horizon as usize * k];
    let mut per_checkpoint: Vec<Vec<f64>> = vec![Vec::with_capacity(seeds.len()); config.checkpoints.len()];
    let mut final_regrets = Vec::with_capacity(seeds.len());
    let mut observed: Vec<Vec<f64>> = Vec::with_capacity(seeds.len());
    for batch in seeds.chunks(BATCH) {
        let summaries: Vec<Result<SeedSummary>> = batch
            .par_iter()
            .map(|&seed| run_seed(config, &spec, script.as_ref(), seed))
            .collect();
        for summary in summaries {
            let summary = summary?;
            for (column, value) in per_checkpoint.iter_mut().zip(&summary.at_checkpoints) {
                column.push(*value);
            }
            final_regrets.push(summary.final_regret);
            observed.push(summary.observed.into_iter().flatten().collect());
            for (acc, w) in weight_sum.iter_mut().zip(&summary.weights) {
                *acc += w;
            }
        }
    }

    let n = seeds.len() as f64;
    let (mean_regret, stderr) = per_checkpoint.iter().map(|c| mean_and_stderr(c)).unzip();
    let (mean_final_regret, stderr_final_regret) = mean_and_stderr(&final_regrets);
    let width = k + 1;
    let observed_at = |i: usize| {
        let rows: Vec<&[f64]> = observed.iter().map(|o| &o[i * width..(i + 1) * width]).collect();
        observed_regret(&rows)
    };
    let (observed_regret, observed_stderr): (Vec<f64>, Vec<f64>) =
        (0..config.checkpoints.len()).map(observed_at).unzip();
    let (mean_final_observed_regret, stderr_final_observed_regret) =
        observed_at(config.checkpoints.len());
    let best_arm = match (&script, spec.gap_profile()) {
        (Some(s), _) => script_best_arm(s, horizon),
        (None, Some(g)) => g.best_arm(),
        (None, None) => return Err(Error::Unsupported("no reference arm".into())),
    };
    let overlay = bound_overlay(&overlay_inputs(&spec, k), &config.checkpoints);
    Ok(AggregateResult {
        regime: spec.regime.name().to_string(),
        corrupted: matches!(spec.regime, Regime::CorruptedStochastic { .. }),
        horizon,
        num_arms: k,
        seeds,
        checkpoints: config.checkpoints.clone(),
        mean_regret,
        stderr,
        final_regrets,
        mean_final_regret,
        stderr_final_regret,
        best_arm,
        observed_regret,
        observed_stderr,
        mean_final_observed_regret,
        stderr_final_observed_regret,
        mean_weights: weight_sum.into_iter().map(|w| w / n).collect(),
        overlay,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{LearnerConfig, OutputPaths, SeedList};
    use crate::learner::Estimator;

    pub(crate) fn config(regime: Regime, horizon: u64, seeds: u64) -> ExperimentConfig {
        ExperimentConfig {
            environment: regime,
            horizon,
            learner: LearnerConfig {
                estimator: Estimator::ReducedVariance,
            },
            master_seed: 11,
            seeds: SeedList::Range {
                first: 0,
                count: seeds,
            },
            checkpoints: (1..=horizon).collect(),
            weights_stride: 1,
            output: OutputPaths {
                regret_csv: "regret.csv".into(),
                weights_csv: "weights.csv".into(),
            },
        }
    }

    fn two_arm() -> Regime {
        Regime::Stochastic {
            means: vec![0.2, 0.7],
        }
    }

    #[test]
    fn single_seed_trace() {
        let r = run_experiment(&config(two_arm(), 10, 1)).unwrap();
        assert_eq!(r.mean_regret.len(), 10);
        assert!(r.mean_regret.windows(2).all(|w| w[1] >= w[0]));
        assert!(r.stderr.iter().all(|&s| s == 0.0));
        assert_eq!(r.best_arm, 0);
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let c = config(two_arm(), 200, 11);
        let a = run_experiment(&c).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_experiment(&c).unwrap());
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn aggregation_matches_final_regrets() {
        let r = run_experiment(&config(two_arm(), 300, 9)).unwrap();
        let direct = r.final_regrets.iter().sum::<f64>() / 9.0;
        assert!((r.mean_regret.last().unwrap() - direct).abs() <= 1e-12);
        assert!((r.mean_final_regret - direct).abs() <= 1e-12);
        assert!(r.stderr.iter().all(|&s| s >= 0.0));
        for t in 1..=300 {
            let s: f64 = r.mean_weights_at(t).iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn observed_regret_oracle() {
        // Two seeds, two arms; cumulative learner loss then arm losses.
        let a = [5.0, 4.0, 9.0];
        let b = [7.0, 6.0, 3.0];
        // Arm 1 has mean 6 < 5, so arm 0 (mean 5) is the reference.
        let (m, se) = observed_regret(&[&a, &b]);
        assert_eq!(m, 1.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn observed_regret_tracks_pseudo_regret_without_corruption() {
        let r = run_experiment(&config(two_arm(), 2000, 16)).unwrap();
        let diff = r.mean_final_observed_regret - r.mean_final_regret;
        let tol = 4.0 * (r.stderr_final_observed_regret.powi(2) + r.stderr_final_regret.powi(2)).sqrt();
        assert!(diff.abs() <= tol + 1.0, "{diff} vs {tol}");
        assert_eq!(r.observed_regret.len(), r.checkpoints.len());
    }

    #[test]
    fn seeds_are_independent_of_batching() {
        let mut c = config(two_arm(), 50, 20);
        let all = run_experiment(&c).unwrap();
        c.seeds = SeedList::List(vec![13]);
        let one = run_experiment(&c).unwrap();
        assert_eq!(one.final_regrets[0], all.final_regrets[13]);
    }
}
