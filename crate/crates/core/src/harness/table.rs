//! Side-by-side comparison of the original and refined Tsallis-INF bounds
//! over a grid of problems.

use serde::{Deserialize, Serialize};

use crate::bounds::{log_plus, theorem1_bounds, theorem2_bounds, BoundInputs, BoundValue};
use crate::env::GapProfile;
use crate::error::{Error, Result};

/// A corruption level: a fixed number, or `factor * T K / (ln(T) S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorruptionLevel {
    Fixed(f64),
    LogScaled { log_scaled: f64 },
}

impl CorruptionLevel {
    pub fn resolve(self, k: usize, horizon: u64, s: f64) -> f64 {
        match self {
            CorruptionLevel::Fixed(c) => c,
            CorruptionLevel::LogScaled { log_scaled } => {
                let t = horizon as f64;
                log_scaled * t * k as f64 / (t.ln() * s)
            }
        }
    }
}

/// Cartesian grid of problems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableGrid {
    pub gap_profiles: Vec<GapProfile>,
    pub horizons: Vec<u64>,
    pub corruptions: Vec<CorruptionLevel>,
}

impl TableGrid {
    pub fn from_json(text: &str) -> Result<Self> {
        let grid: Self = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("invalid table grid: {e}")))?;
        if grid.gap_profiles.is_empty() || grid.horizons.is_empty() || grid.corruptions.is_empty() {
            return Err(Error::config("every grid axis needs at least one entry"));
        }
        if grid.horizons.iter().any(|&t| t < 3) {
            return Err(Error::config("horizons must be at least 3 (ln ln T > 0)"));
        }
        if let Some(g) = grid.gap_profiles.iter().find(|g| !g.unique_best()) {
            return Err(Error::config(format!(
                "gap profile {:?} has no unique best arm",
                g.gaps()
            )));
        }
        Ok(grid)
    }
}

/// Which regime of the comparison a cell falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorruptionRow {
    /// `C <= S (ln(T(K-1)/S^2) + 1)`.
    SmallC,
    LargeC,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub arms: usize,
    pub horizon: u64,
    pub s: f64,
    pub corruption: f64,
    pub row: CorruptionRow,
    pub original_self_bounding: BoundValue,
    pub original_large_corruption: BoundValue,
    pub refined_self_bounding: BoundValue,
    pub refined_large_corruption: BoundValue,
    /// Leading term of the original analysis for this row.
    pub original_leading: f64,
    /// Leading term of the refined analysis for this row.
    pub refined_leading: f64,
    pub leading_ratio: f64,
    /// Best valid original bound over best valid refined bound.
    pub full_ratio: Option<f64>,
    /// `sqrt(ln T / ln ln T)`.
    pub reference_ratio: f64,
}

fn best_valid(a: &BoundValue, b: &BoundValue) -> Option<f64> {
    match (a.get(), b.get()) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// Evaluates every cell of the grid.
pub fn regime_table(grid: &TableGrid) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for gaps in &grid.gap_profiles {
        let k = gaps.num_arms();
        let km1 = (k - 1) as f64;
        let s = gaps.inverse_gap_sum();
        for &horizon in &grid.horizons {
            let t = horizon as f64;
            let lt = t.ln();
            for &level in &grid.corruptions {
                let c = level.resolve(k, horizon, s);
                if !(c >= 0.0 && c.is_finite()) {
                    return Err(Error::config(format!("corruption level {c} is not usable")));
                }
                let inputs = BoundInputs::tsallis(gaps.clone(), horizon, c);
                let original = theorem1_bounds(&inputs);
                let refined = theorem2_bounds(&inputs);
                let small_limit = s * ((t * km1 / (s * s)).ln() + 1.0);
                let row = if c <= small_limit.max(0.0) {
                    CorruptionRow::SmallC
                } else {
                    CorruptionRow::LargeC
                };
                let (original_leading, refined_leading) = match row {
                    CorruptionRow::SmallC => (s * lt, s * log_plus(t * km1 / (s * s))?),
                    CorruptionRow::LargeC => (
                        (c * s * lt).sqrt(),
                        (c * s * log_plus(t * km1 / (c * s))?).sqrt(),
                    ),
                };
                let full_ratio = best_valid(&original.self_bounding, &original.large_corruption)
                    .zip(best_valid(&refined.self_bounding, &refined.large_corruption))
                    .map(|(o, r)| o / r);
                rows.push(TableRow {
                    arms: k,
                    horizon,
                    s,
                    corruption: c,
                    row,
                    original_self_bounding: original.self_bounding,
                    original_large_corruption: original.large_corruption,
                    refined_self_bounding: refined.self_bounding,
                    refined_large_corruption: refined.large_corruption,
                    original_leading,
                    refined_leading,
                    leading_ratio: original_leading / refined_leading,
                    full_ratio,
                    reference_ratio: (lt / lt.ln()).sqrt(),
                });
            }
        }
    }
    Ok(rows)
}
