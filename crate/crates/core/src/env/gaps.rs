use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Suboptimality gaps with a designated best arm.
///
/// `S = sum_{i != i*} 1/gap_i` and the minimum gap are derived on demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct GapProfile {
    gaps: Vec<f64>,
    best_arm: usize,
}

impl GapProfile {
    /// Gaps must lie in `[0, 1]` with at least one zero entry; the first
    /// zero is the best arm.
    pub fn new(gaps: Vec<f64>) -> Result<Self> {
        if gaps.len() < 2 {
            return Err(Error::domain("a gap profile needs at least two arms"));
        }
        if let Some(g) = gaps.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(Error::domain(format!("gap {g} outside [0, 1]")));
        }
        let best_arm = gaps
            .iter()
            .position(|&g| g == 0.0)
            .ok_or_else(|| Error::domain("gap profile has no zero entry"))?;
        Ok(Self { gaps, best_arm })
    }

    /// Gaps of per-arm mean losses relative to the smallest mean.
    pub fn from_means(means: &[f64]) -> Result<Self> {
        let min = means.iter().copied().fold(f64::INFINITY, f64::min);
        Self::new(means.iter().map(|m| m - min).collect())
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn num_arms(&self) -> usize {
        self.gaps.len()
    }

    pub fn best_arm(&self) -> usize {
        self.best_arm
    }

    /// Exactly one zero entry.
    pub fn unique_best(&self) -> bool {
        self.gaps.iter().filter(|&&g| g == 0.0).count() == 1
    }

    /// `sum_{i != i*} 1/gap_i`; infinite when the best arm is not unique.
    pub fn inverse_gap_sum(&self) -> f64 {
        self.suboptimal().map(|g| 1.0 / g).sum()
    }

    /// `min_{i != i*} gap_i`.
    pub fn delta_min(&self) -> f64 {
        self.suboptimal().fold(f64::INFINITY, f64::min)
    }

    fn suboptimal(&self) -> impl Iterator<Item = f64> + '_ {
        self.gaps
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != self.best_arm)
            .map(|(_, &g)| g)
    }
}

impl TryFrom<Vec<f64>> for GapProfile {
    type Error = Error;

    fn try_from(gaps: Vec<f64>) -> Result<Self> {
        Self::new(gaps)
    }
}

impl From<GapProfile> for Vec<f64> {
    fn from(p: GapProfile) -> Self {
        p.gaps
    }
}
