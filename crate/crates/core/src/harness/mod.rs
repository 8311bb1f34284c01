//! Experiment runner: multi-seed episodes, seed-averaged regret, bound
//! overlays, the empirical square-root condition and CSV output.

mod config;
mod lemmas;
mod output;
mod overlay;
mod run;
mod sqrt_condition;
mod table;

pub use config::{
    geometric_checkpoints, ExperimentConfig, LearnerConfig, OutputPaths, SeedList, MAX_SEED,
};
pub use lemmas::{
    alpha_star_suite, lambert_suite, quadratic_suite, tail_sum_suite, verify_lemmas, SuiteReport,
    DEFAULT_TRIALS,
};
pub use output::{
    write_regret_csv, write_table_csv, write_weights_csv, REGRET_HEADER, TABLE_HEADER,
};
pub use overlay::{bound_overlay, overlay_inputs, BoundOverlay, OverlayRow};
pub use run::{mean_and_stderr, run_experiment, seed_streams, AggregateResult};
pub use sqrt_condition::{verify_sqrt_condition, SqrtConditionReport};
pub use table::{regime_table, CorruptionLevel, CorruptionRow, TableGrid, TableRow};
