//! Tsallis-INF bandit simulation and regret-bound verification.
//!
//! The crate is split into four layers:
//!
//! - [`learner`]: the Tsallis-INF learner (weights by convex-conjugate
//!   maximization over the simplex, loss estimators, the play loop).
//! - [`env`]: loss generators for the stochastic, stochastically
//!   constrained, scripted adversarial and corrupted-stochastic regimes,
//!   with pseudo-regret accounting.
//! - [`bounds`]: closed-form regret bounds, the Lambert-W based trade-off
//!   optimizer and the supporting optimization lemmas.
//! - [`harness`]: multi-seed experiment runner, bound overlays, the
//!   square-root condition check and CSV output.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod env;
pub mod error;
pub mod harness;
pub mod learner;

pub use error::{Error, Result};

use rand::SeedableRng;

/// Random generator used for every simulated stream.
///
/// ChaCha8 is portable across platforms and versions, so seeded runs are
/// reproducible bit for bit.
pub type SimRng = rand_chacha::ChaCha8Rng;

/// Builds a generator from a 64-bit key on a given stream.
pub fn sim_rng(key: u64, stream: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(key);
    rng.set_stream(stream);
    rng
}
