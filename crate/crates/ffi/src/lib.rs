//! C ABI for the Tsallis-INF engine.
//!
//! Every fallible function returns a [`TinfStatus`]; on failure a message
//! is available from [`tinf_last_error_message`] on the same thread until
//! the next failing call. Learners are opaque handles created by
//! [`tinf_learner_new`] and released by [`tinf_learner_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use tinf_core::bounds::{
    alpha_star, lambert_w_minus1, theorem1_bounds, theorem2_bounds, theorem3_bounds, BoundInputs,
    BoundSet, BoundValue,
};
use tinf_core::env::GapProfile;
use tinf_core::learner::{tsallis_weights, Estimator, TsallisInf};
use tinf_core::{sim_rng, Error, SimRng};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TinfStatus {
    Ok = 0,
    NullPointer = 1,
    /// An argument is outside the operation's domain.
    Domain = 2,
    /// A root finder failed to converge.
    Solver = 3,
    Config = 4,
    Unsupported = 5,
    /// A caller-provided buffer has the wrong length.
    BufferSize = 6,
    /// Internal error; the message has details.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TinfEstimator {
    ReducedVariance = 0,
    ImportanceWeighted = 1,
}

/// Which analysis a bound comes from.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TinfTheorem {
    /// The original Tsallis-INF analysis.
    Original = 1,
    /// The refined Tsallis-INF analysis.
    Refined = 2,
    /// Any algorithm satisfying the square-root condition with constants `b`, `d`.
    SqrtCondition = 3,
}

/// Inputs of a bound evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TinfBoundParams {
    pub arms: usize,
    pub horizon: u64,
    /// `arms` gaps with a zero for the best arm, or NULL when unknown.
    pub gaps: *const f64,
    pub corruption: f64,
    /// When true, `b` and `d` are ignored and the Tsallis-INF constants are used.
    pub tsallis_constants: bool,
    pub b: f64,
    pub d: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TinfBound {
    /// NaN when the bound cannot be evaluated at all.
    pub value: f64,
    pub valid: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TinfBoundSet {
    pub adversarial: TinfBound,
    pub self_bounding: TinfBound,
    pub large_corruption: TinfBound,
}

/// Opaque learner handle.
pub struct TinfLearner {
    learner: TsallisInf,
    rng: SimRng,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: TinfStatus, msg: impl Into<String>) -> TinfStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> TinfStatus {
    let status = match &e {
        _ if e.is_solver_failure() => TinfStatus::Solver,
        Error::Domain(_) => TinfStatus::Domain,
        Error::Unsupported(_) => TinfStatus::Unsupported,
        _ => TinfStatus::Config,
    };
    fail(status, e.to_string())
}

/// Runs `body`, turning panics into [`TinfStatus::Panic`].
fn guard(body: impl FnOnce() -> TinfStatus) -> TinfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(TinfStatus::Panic, "internal panic"),
    }
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tinf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a learner over `arms` arms whose draws are keyed by `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tinf_learner_new(
    arms: usize,
    estimator: TinfEstimator,
    seed: u64,
    out: *mut *mut TinfLearner,
) -> TinfStatus {
    guard(|| {
        if out.is_null() {
            return fail(TinfStatus::NullPointer, "out is NULL");
        }
        let estimator = match estimator {
            TinfEstimator::ReducedVariance => Estimator::ReducedVariance,
            TinfEstimator::ImportanceWeighted => Estimator::ImportanceWeighted,
        };
        match TsallisInf::new(arms, estimator) {
            Ok(learner) => {
                let handle = Box::new(TinfLearner {
                    learner,
                    rng: sim_rng(seed, 0),
                });
                *out = Box::into_raw(handle);
                TinfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a learner. NULL is ignored.
///
/// # Safety
/// `learner` must come from [`tinf_learner_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tinf_learner_free(learner: *mut TinfLearner) {
    if !learner.is_null() {
        drop(Box::from_raw(learner));
    }
}

/// Plays one round against `losses` (length `arms`, entries in [0, 1]) and
/// writes the chosen arm to `out_arm`.
///
/// # Safety
/// `learner` must be a live handle, `losses` must point to `len` doubles
/// and `out_arm` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn tinf_learner_step(
    learner: *mut TinfLearner,
    losses: *const f64,
    len: usize,
    out_arm: *mut usize,
) -> TinfStatus {
    guard(|| {
        if learner.is_null() || losses.is_null() || out_arm.is_null() {
            return fail(TinfStatus::NullPointer, "learner, losses and out_arm must be non-NULL");
        }
        let handle = &mut *learner;
        if len != handle.learner.num_arms() {
            return fail(
                TinfStatus::BufferSize,
                format!("expected {} losses, got {len}", handle.learner.num_arms()),
            );
        }
        let losses = slice::from_raw_parts(losses, len);
        if let Some(l) = losses.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return fail(TinfStatus::Domain, format!("loss {l} outside [0, 1]"));
        }
        match handle.learner.step(losses, &mut handle.rng) {
            Ok(step) => {
                *out_arm = step.arm;
                TinfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Writes the distribution the learner will play next into `out` (length `arms`).
///
/// # Safety
/// `learner` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tinf_learner_weights(
    learner: *const TinfLearner,
    out: *mut f64,
    len: usize,
) -> TinfStatus {
    guard(|| {
        if learner.is_null() || out.is_null() {
            return fail(TinfStatus::NullPointer, "learner and out must be non-NULL");
        }
        let handle = &*learner;
        if len != handle.learner.num_arms() {
            return fail(
                TinfStatus::BufferSize,
                format!("expected room for {} weights, got {len}", handle.learner.num_arms()),
            );
        }
        match handle.learner.current_weights() {
            Ok(w) => {
                slice::from_raw_parts_mut(out, len).copy_from_slice(w.weights());
                TinfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Current round (1 before the first step), or 0 for NULL.
///
/// # Safety
/// `learner` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tinf_learner_round(learner: *const TinfLearner) -> u64 {
    if learner.is_null() {
        0
    } else {
        (*learner).learner.state().round
    }
}

/// Tsallis-INF weights for cumulative loss estimates at learning rate `eta`.
///
/// # Safety
/// `estimates` must point to `len` doubles and `out` to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tinf_tsallis_weights(
    estimates: *const f64,
    len: usize,
    eta: f64,
    out: *mut f64,
) -> TinfStatus {
    guard(|| {
        if estimates.is_null() || out.is_null() {
            return fail(TinfStatus::NullPointer, "estimates and out must be non-NULL");
        }
        match tsallis_weights(slice::from_raw_parts(estimates, len), eta) {
            Ok(w) => {
                slice::from_raw_parts_mut(out, len).copy_from_slice(w.weights());
                TinfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

fn to_c(v: &BoundValue) -> TinfBound {
    TinfBound {
        value: v.value,
        valid: v.valid,
    }
}

fn set_to_c(s: &BoundSet) -> TinfBoundSet {
    TinfBoundSet {
        adversarial: to_c(&s.adversarial),
        self_bounding: to_c(&s.self_bounding),
        large_corruption: to_c(&s.large_corruption),
    }
}

unsafe fn bound_inputs(params: &TinfBoundParams) -> Result<BoundInputs, TinfStatus> {
    let gaps = if params.gaps.is_null() {
        None
    } else {
        let raw = slice::from_raw_parts(params.gaps, params.arms).to_vec();
        Some(GapProfile::new(raw).map_err(from_error)?)
    };
    let mut inputs = match gaps {
        Some(g) => BoundInputs::tsallis(g, params.horizon, params.corruption),
        None => {
            let mut i = BoundInputs::tsallis_adversarial(params.arms, params.horizon);
            i.corruption = params.corruption;
            i
        }
    };
    if !params.tsallis_constants {
        inputs = inputs.with_sqrt_condition(params.b, params.d);
    }
    inputs.validate().map_err(from_error)?;
    Ok(inputs)
}

/// Evaluates the three bounds of `theorem`. Bounds outside their
/// preconditions are reported with `valid = false`.
///
/// # Safety
/// `params` must be valid, its `gaps` NULL or pointing to `arms` doubles,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tinf_bounds(
    theorem: TinfTheorem,
    params: *const TinfBoundParams,
    out: *mut TinfBoundSet,
) -> TinfStatus {
    guard(|| {
        if params.is_null() || out.is_null() {
            return fail(TinfStatus::NullPointer, "params and out must be non-NULL");
        }
        let inputs = match bound_inputs(&*params) {
            Ok(i) => i,
            Err(status) => return status,
        };
        let set = match theorem {
            TinfTheorem::Original => theorem1_bounds(&inputs),
            TinfTheorem::Refined => theorem2_bounds(&inputs),
            TinfTheorem::SqrtCondition => theorem3_bounds(&inputs),
        };
        *out = set_to_c(&set);
        TinfStatus::Ok
    })
}

/// Lower real branch of the Lambert W function for `y` in `[-1/e, 0)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tinf_lambert_w_minus1(y: f64, out: *mut f64) -> TinfStatus {
    guard(|| {
        if out.is_null() {
            return fail(TinfStatus::NullPointer, "out is NULL");
        }
        match lambert_w_minus1(y) {
            Ok(w) => {
                *out = w;
                TinfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Optimal trade-off parameter of the large-corruption analysis and the
/// Lambert term `w`; `c` must lie in the bound's validity range.
///
/// # Safety
/// `out_alpha` and `out_w` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tinf_alpha_star(
    s: f64,
    c: f64,
    arms: usize,
    horizon: u64,
    b: f64,
    out_alpha: *mut f64,
    out_w: *mut f64,
) -> TinfStatus {
    guard(|| {
        if out_alpha.is_null() || out_w.is_null() {
            return fail(TinfStatus::NullPointer, "out_alpha and out_w must be non-NULL");
        }
        match alpha_star(s, c, arms, horizon, b) {
            Ok((alpha, d)) => {
                *out_alpha = alpha;
                *out_w = d.w;
                TinfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
