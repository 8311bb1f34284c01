//! Loss generators for the simulated regimes and pseudo-regret accounting.
//!
//! Four regimes are supported: i.i.d. Bernoulli losses, stochastically
//! constrained losses (common drifting baseline plus fixed gaps), scripted
//! adversarial loss matrices, and Bernoulli losses with an adversary that
//! injects bounded corruption.

mod corruption;
mod gaps;
mod script;

pub use corruption::{corruption_attack, AttackPolicy, CorruptionLedger};
pub use gaps::GapProfile;
pub use script::LossScript;

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Drift of the common baseline in the stochastically constrained regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Baseline {
    /// Independent uniform draw on `[0, 1 - max gap]` each round.
    Uniform,
    /// `(1 - max gap) (1 + sin(2 pi t / period)) / 2`.
    Sinusoidal { period: f64 },
}

/// Where a scripted adversary gets its loss matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScriptSource {
    AlternatingLeader { arms: usize },
    /// Plain-text file, one round per line, whitespace-separated losses.
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    Stochastic {
        means: Vec<f64>,
    },
    StochasticallyConstrained {
        gaps: GapProfile,
        baseline: Baseline,
    },
    AdversarialScript {
        script: ScriptSource,
    },
    CorruptedStochastic {
        means: Vec<f64>,
        budget: f64,
        attack: AttackPolicy,
    },
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Stochastic { .. } => "stochastic",
            Regime::StochasticallyConstrained { .. } => "stochastically_constrained",
            Regime::AdversarialScript { .. } => "adversarial_script",
            Regime::CorruptedStochastic { .. } => "corrupted_stochastic",
        }
    }
}

/// A regime together with its horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentSpec {
    pub regime: Regime,
    pub horizon: u64,
}

impl EnvironmentSpec {
    pub fn new(regime: Regime, horizon: u64) -> Result<Self> {
        let spec = Self { regime, horizon };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("horizon must be at least 1"));
        }
        let check_means = |means: &[f64]| -> Result<()> {
            if means.len() < 2 {
                return Err(Error::config("need at least two arms"));
            }
            if let Some(m) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
                return Err(Error::config(format!("Bernoulli mean {m} outside [0, 1]")));
            }
            Ok(())
        };
        match &self.regime {
            Regime::Stochastic { means } => check_means(means),
            Regime::StochasticallyConstrained { baseline, .. } => match baseline {
                Baseline::Sinusoidal { period } if !(*period > 0.0) => {
                    Err(Error::config("sinusoidal baseline period must be positive"))
                }
                _ => Ok(()),
            },
            Regime::AdversarialScript { script } => match script {
                ScriptSource::AlternatingLeader { arms } if *arms < 2 => {
                    Err(Error::config("alternating leader needs at least two arms"))
                }
                _ => Ok(()),
            },
            Regime::CorruptedStochastic {
                means,
                budget,
                attack,
            } => {
                check_means(means)?;
                if !(*budget >= 0.0 && budget.is_finite()) {
                    return Err(Error::config("corruption budget must be a nonnegative number"));
                }
                if let AttackPolicy::TargetedSwap { target } = attack {
                    if *target >= means.len() {
                        return Err(Error::config(format!("attack target {target} is not an arm")));
                    }
                }
                Ok(())
            }
        }
    }

    /// Gaps the pseudo-regret is measured with, when the regime has them.
    /// For corrupted streams these are the gaps of the clean means.
    pub fn gap_profile(&self) -> Option<GapProfile> {
        match &self.regime {
            Regime::Stochastic { means } | Regime::CorruptedStochastic { means, .. } => {
                GapProfile::from_means(means).ok()
            }
            Regime::StochasticallyConstrained { gaps, .. } => Some(gaps.clone()),
            Regime::AdversarialScript { .. } => None,
        }
    }

    /// Corruption level of the self-bounding constraint the regime
    /// satisfies: zero for the uncorrupted regimes and twice the attack
    /// budget for corrupted ones.
    pub fn self_bounding_corruption(&self) -> f64 {
        match &self.regime {
            Regime::CorruptedStochastic { budget, .. } => 2.0 * budget,
            _ => 0.0,
        }
    }
}

/// Losses handed out in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundLosses {
    /// What the learner faces.
    pub losses: Vec<f64>,
    /// Pre-corruption losses, for corrupted regimes.
    pub clean: Option<Vec<f64>>,
}

/// Loss function of an adaptive adversary: `(t, previous actions) -> losses`.
pub type AdaptiveFn = Box<dyn FnMut(u64, &[usize]) -> Vec<f64> + Send>;

enum Source {
    Bernoulli {
        means: Vec<f64>,
    },
    Constrained {
        gaps: GapProfile,
        baseline: Baseline,
    },
    Script(Arc<LossScript>),
    Adaptive {
        arms: usize,
        losses: AdaptiveFn,
    },
    Corrupted {
        means: Vec<f64>,
        attack: AttackPolicy,
        best_arm: usize,
        ledger: CorruptionLedger,
    },
}

/// A running loss generator.
pub struct Environment {
    source: Source,
    horizon: u64,
    gaps: Option<GapProfile>,
}

impl fmt::Debug for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            Source::Bernoulli { .. } => "stochastic",
            Source::Constrained { .. } => "stochastically_constrained",
            Source::Script(_) => "adversarial_script",
            Source::Adaptive { .. } => "adaptive",
            Source::Corrupted { .. } => "corrupted_stochastic",
        };
        f.debug_struct("Environment")
            .field("kind", &kind)
            .field("horizon", &self.horizon)
            .field("arms", &self.num_arms())
            .finish()
    }
}

impl Environment {
    /// Builds the generator, loading script files as needed.
    pub fn new(spec: &EnvironmentSpec) -> Result<Self> {
        let script = match &spec.regime {
            Regime::AdversarialScript { script } => Some(Arc::new(load_script(script, spec.horizon)?)),
            _ => None,
        };
        Self::build(spec, script)
    }

    /// Builds the generator reusing an already loaded script.
    pub fn with_script(spec: &EnvironmentSpec, script: Arc<LossScript>) -> Result<Self> {
        if (script.len() as u64) < spec.horizon {
            return Err(Error::config(format!(
                "loss script has {} rows, horizon is {}",
                script.len(),
                spec.horizon
            )));
        }
        Self::build(spec, Some(script))
    }

    fn build(spec: &EnvironmentSpec, script: Option<Arc<LossScript>>) -> Result<Self> {
        spec.validate()?;
        let source = match &spec.regime {
            Regime::Stochastic { means } => Source::Bernoulli {
                means: means.clone(),
            },
            Regime::StochasticallyConstrained { gaps, baseline } => Source::Constrained {
                gaps: gaps.clone(),
                baseline: *baseline,
            },
            Regime::AdversarialScript { .. } => Source::Script(
                script.ok_or_else(|| Error::config("scripted regime without a script"))?,
            ),
            Regime::CorruptedStochastic {
                means,
                budget,
                attack,
            } => Source::Corrupted {
                means: means.clone(),
                attack: *attack,
                best_arm: GapProfile::from_means(means)?.best_arm(),
                ledger: CorruptionLedger::new(*budget),
            },
        };
        Ok(Self {
            source,
            horizon: spec.horizon,
            gaps: spec.gap_profile(),
        })
    }

    /// An adaptive adversary. Its pseudo-regret is not computable.
    pub fn adaptive(arms: usize, horizon: u64, losses: AdaptiveFn) -> Self {
        Self {
            source: Source::Adaptive { arms, losses },
            horizon,
            gaps: None,
        }
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn num_arms(&self) -> usize {
        match &self.source {
            Source::Bernoulli { means } | Source::Corrupted { means, .. } => means.len(),
            Source::Constrained { gaps, .. } => gaps.num_arms(),
            Source::Script(s) => s.num_arms(),
            Source::Adaptive { arms, .. } => *arms,
        }
    }

    pub fn gap_profile(&self) -> Option<&GapProfile> {
        self.gaps.as_ref()
    }

    pub fn ledger(&self) -> Option<&CorruptionLedger> {
        match &self.source {
            Source::Corrupted { ledger, .. } => Some(ledger),
            _ => None,
        }
    }

    /// The fixed loss matrix of scripted regimes.
    pub fn script(&self) -> Option<&LossScript> {
        match &self.source {
            Source::Script(s) => Some(s),
            _ => None,
        }
    }

    /// Losses of round `t` (1-based). `history` holds the learner's
    /// previous actions; only adaptive adversaries look at it.
    pub fn sample_losses<R: Rng + ?Sized>(
        &mut self,
        t: u64,
        history: &[usize],
        rng: &mut R,
    ) -> Result<RoundLosses> {
        if t == 0 || t > self.horizon {
            return Err(Error::domain(format!(
                "round {t} outside 1..={}",
                self.horizon
            )));
        }
        let k = self.num_arms();
        let round = match &mut self.source {
            Source::Bernoulli { means } => RoundLosses {
                losses: bernoulli_row(means, rng),
                clean: None,
            },
            Source::Constrained { gaps, baseline } => {
                let span = 1.0 - gaps.gaps().iter().copied().fold(0.0, f64::max);
                let b = match baseline {
                    Baseline::Uniform => span * rng.random::<f64>(),
                    Baseline::Sinusoidal { period } => {
                        span * (1.0 + (2.0 * PI * t as f64 / *period).sin()) / 2.0
                    }
                };
                RoundLosses {
                    losses: gaps.gaps().iter().map(|g| (b + g).clamp(0.0, 1.0)).collect(),
                    clean: None,
                }
            }
            Source::Script(script) => {
                let row = script.row(t).ok_or_else(|| {
                    Error::config(format!("loss script exhausted at round {t}"))
                })?;
                RoundLosses {
                    losses: row.to_vec(),
                    clean: None,
                }
            }
            Source::Adaptive { losses, .. } => {
                let row = losses(t, history);
                if row.len() != k || row.iter().any(|l| !(0.0..=1.0).contains(l)) {
                    return Err(Error::config(format!(
                        "adaptive adversary produced an invalid loss vector at round {t}"
                    )));
                }
                RoundLosses {
                    losses: row,
                    clean: None,
                }
            }
            Source::Corrupted {
                means,
                attack,
                best_arm,
                ledger,
            } => {
                let clean = bernoulli_row(means, rng);
                let losses = corruption_attack(*attack, &clean, *best_arm, ledger);
                RoundLosses {
                    losses,
                    clean: Some(clean),
                }
            }
        };
        Ok(round)
    }
}

fn bernoulli_row<R: Rng + ?Sized>(means: &[f64], rng: &mut R) -> Vec<f64> {
    means
        .iter()
        .map(|&m| if rng.random::<f64>() < m { 1.0 } else { 0.0 })
        .collect()
}

pub(crate) fn load_script(source: &ScriptSource, horizon: u64) -> Result<LossScript> {
    let script = match source {
        ScriptSource::AlternatingLeader { arms } => LossScript::alternating_leader(*arms, horizon)?,
        ScriptSource::File { path } => LossScript::load(path)?,
    };
    if (script.len() as u64) < horizon {
        return Err(Error::config(format!(
            "loss script has {} rows, horizon is {horizon}",
            script.len()
        )));
    }
    Ok(script)
}

/// Running pseudo-regret of an action sequence.
///
/// With known gaps this is `sum_{s <= t} gap[a_s]`. For scripted regimes it
/// is measured against the best fixed arm of the script over the horizon.
pub fn pseudo_regret(actions: &[usize], env: &Environment) -> Result<Vec<f64>> {
    if actions.len() as u64 > env.horizon() {
        return Err(Error::domain("more actions than rounds"));
    }
    let k = env.num_arms();
    if let Some(a) = actions.iter().find(|&&a| a >= k) {
        return Err(Error::domain(format!("action {a} is not an arm")));
    }
    if let Some(gaps) = env.gap_profile() {
        return Ok(running_sum(actions.iter().map(|&a| gaps.gaps()[a])));
    }
    if let Some(script) = env.script() {
        let best = script_best_arm(script, env.horizon());
        return Ok(running_sum(actions.iter().enumerate().map(|(s, &a)| {
            let row = script.row(s as u64 + 1).expect("script covers the horizon");
            row[a] - row[best]
        })));
    }
    Err(Error::Unsupported(
        "pseudo-regret needs known gaps or a fixed loss script".into(),
    ))
}

/// Arm with the smallest total loss over the first `horizon` rounds.
pub fn script_best_arm(script: &LossScript, horizon: u64) -> usize {
    let mut totals = vec![0.0; script.num_arms()];
    for t in 1..=horizon {
        if let Some(row) = script.row(t) {
            totals.iter_mut().zip(row).for_each(|(s, l)| *s += l);
        }
    }
    totals
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) })
        .0
}

fn running_sum(increments: impl Iterator<Item = f64>) -> Vec<f64> {
    increments
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}
