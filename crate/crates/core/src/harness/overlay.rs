//! Bound curves over a sequence of horizons.

use serde::Serialize;

use crate::bounds::{theorem1_bounds, theorem2_bounds, theorem3_bounds, BoundInputs, BoundSet};
use crate::env::EnvironmentSpec;

/// Bounds of all three theorems at one horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlayRow {
    pub checkpoint: u64,
    pub original: BoundSet,
    pub refined: BoundSet,
    pub sqrt_condition: BoundSet,
}

impl OverlayRow {
    /// The nine bounds in CSV column order, `None` where invalid.
    pub fn columns(&self) -> [Option<f64>; 9] {
        let mut out = [None; 9];
        let sets = [&self.original, &self.refined, &self.sqrt_condition];
        for (i, v) in sets.iter().flat_map(|s| s.values()).enumerate() {
            out[i] = v.get();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundOverlay {
    pub rows: Vec<OverlayRow>,
}

/// Tsallis-INF bound inputs matching an environment: gaps when the regime
/// has them, and the corruption level of the self-bounding constraint it
/// satisfies.
pub fn overlay_inputs(spec: &EnvironmentSpec, arms: usize) -> BoundInputs {
    match spec.gap_profile() {
        Some(gaps) => BoundInputs::tsallis(gaps, spec.horizon, spec.self_bounding_corruption()),
        None => BoundInputs::tsallis_adversarial(arms, spec.horizon),
    }
}

/// Each checkpoint is treated as the horizon of its own problem.
pub fn bound_overlay(inputs: &BoundInputs, checkpoints: &[u64]) -> BoundOverlay {
    let rows = checkpoints
        .iter()
        .map(|&t| {
            let at = inputs.at_horizon(t);
            OverlayRow {
                checkpoint: t,
                original: theorem1_bounds(&at),
                refined: theorem2_bounds(&at),
                sqrt_condition: theorem3_bounds(&at),
            }
        })
        .collect();
    BoundOverlay { rows }
}
