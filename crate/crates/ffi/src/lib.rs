//! C ABI over the gap-probability library.
//!
//! Conventions:
//! * every fallible call returns an [`RmtGapsStatus`]; outputs go through
//!   pointers and are written only on `RMT_GAPS_STATUS_OK`,
//! * the evaluator is an opaque handle created/destroyed by this library,
//! * the most recent error message is kept per thread and can be copied out
//!   with [`rmt_gaps_last_error`].
//!
//! The committed header `include/rmt_gaps.h` mirrors this surface
//! (cbindgen configuration included for regeneration).

use rmt_gaps::closedform;
use rmt_gaps::gap::gap_probability;
use rmt_gaps::geometry::GapGeometry;
use rmt_gaps::mc::{empirical_gap, Ensemble};
use rmt_gaps::ode::gauss::integrate_gauss;
use rmt_gaps::ode::jacobi::{integrate_jacobi, JacobiFamily};
use rmt_gaps::ode::SolverConfig;
use rmt_gaps::orthopoly::{OrthonormalBasis, WeightSpec};
use rmt_gaps::quadrature::QuadratureRule;
use rmt_gaps::Error;
use std::cell::RefCell;
use std::os::raw::{c_char, c_double, c_int};

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmtGapsStatus {
    RmtGapsStatusOk = 0,
    RmtGapsStatusInvalidArgument = 1,
    RmtGapsStatusDomainError = 2,
    RmtGapsStatusNumericalError = 3,
}

use RmtGapsStatus::*;

/// Weight selector: 0 = Hermite, 1 = Jacobi(alpha, beta).
pub const RMT_GAPS_ENSEMBLE_HERMITE: c_int = 0;
pub const RMT_GAPS_ENSEMBLE_JACOBI: c_int = 1;

/// Geometry selector: 0 = symmetric exterior (Hermite),
/// 1 = symmetric Jacobi exterior, 2 = symmetric interior.
pub const RMT_GAPS_GEOMETRY_EXTERIOR: c_int = 0;
pub const RMT_GAPS_GEOMETRY_JACOBI_EXTERIOR: c_int = 1;
pub const RMT_GAPS_GEOMETRY_INTERIOR: c_int = 2;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.into());
}

fn status_of(err: &Error) -> RmtGapsStatus {
    match err {
        Error::StepUnderflow { .. }
        | Error::PoleTruncation { .. }
        | Error::BranchViolation { .. }
        | Error::NonConvergence { .. } => RmtGapsStatusNumericalError,
        _ => RmtGapsStatusDomainError,
    }
}

fn weight_from(ensemble: c_int, alpha: c_double, beta: c_double) -> Result<WeightSpec, RmtGapsStatus> {
    match ensemble {
        RMT_GAPS_ENSEMBLE_HERMITE => Ok(WeightSpec::Hermite),
        RMT_GAPS_ENSEMBLE_JACOBI => Ok(WeightSpec::Jacobi { alpha, beta }),
        _ => {
            set_error(format!("unknown ensemble selector {ensemble}"));
            Err(RmtGapsStatusInvalidArgument)
        }
    }
}

fn geometry_from(selector: c_int, s: c_double) -> Result<GapGeometry, RmtGapsStatus> {
    match selector {
        RMT_GAPS_GEOMETRY_EXTERIOR => Ok(GapGeometry::ExteriorSym { s }),
        RMT_GAPS_GEOMETRY_JACOBI_EXTERIOR => Ok(GapGeometry::JacobiExteriorSym { s }),
        RMT_GAPS_GEOMETRY_INTERIOR => Ok(GapGeometry::InteriorSym { s }),
        _ => {
            set_error(format!("unknown geometry selector {selector}"));
            Err(RmtGapsStatusInvalidArgument)
        }
    }
}

/// Opaque evaluator: a validated basis plus a reusable quadrature rule.
pub struct RmtGapsEvaluator {
    basis: OrthonormalBasis,
    quad: QuadratureRule,
    weight: WeightSpec,
    n: usize,
}

/// Create an evaluator; returns NULL on invalid input (see
/// [`rmt_gaps_last_error`]). Destroy with [`rmt_gaps_evaluator_free`].
#[no_mangle]
pub extern "C" fn rmt_gaps_evaluator_new(
    ensemble: c_int,
    alpha: c_double,
    beta: c_double,
    n: u32,
    quad_order: u32,
) -> *mut RmtGapsEvaluator {
    let weight = match weight_from(ensemble, alpha, beta) {
        Ok(w) => w,
        Err(_) => return std::ptr::null_mut(),
    };
    let basis = match OrthonormalBasis::new(weight, n as usize) {
        Ok(b) => b,
        Err(e) => {
            set_error(e.to_string());
            return std::ptr::null_mut();
        }
    };
    let order = (quad_order as usize).max(2 * n as usize).max(40);
    let quad = match QuadratureRule::legendre(order) {
        Ok(q) => q,
        Err(e) => {
            set_error(e.to_string());
            return std::ptr::null_mut();
        }
    };
    Box::into_raw(Box::new(RmtGapsEvaluator { basis, quad, weight, n: n as usize }))
}

/// # Safety
/// `handle` must come from [`rmt_gaps_evaluator_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rmt_gaps_evaluator_free(handle: *mut RmtGapsEvaluator) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Gap probability by the Gram-determinant route.
///
/// # Safety
/// `handle` must be a live evaluator; `out_value` and `out_est_error` must
/// be valid writable pointers (est_error may be NULL).
#[no_mangle]
pub unsafe extern "C" fn rmt_gaps_gap_probability(
    handle: *const RmtGapsEvaluator,
    geometry: c_int,
    s: c_double,
    out_value: *mut c_double,
    out_est_error: *mut c_double,
) -> RmtGapsStatus {
    if handle.is_null() || out_value.is_null() {
        set_error("null pointer argument");
        return RmtGapsStatusInvalidArgument;
    }
    let eval = &*handle;
    let geometry = match geometry_from(geometry, s) {
        Ok(g) => g,
        Err(status) => return status,
    };
    match gap_probability(&eval.basis, &geometry, &eval.quad) {
        Ok(r) => {
            *out_value = r.value;
            if !out_est_error.is_null() {
                *out_est_error = r.est_error;
            }
            RmtGapsStatusOk
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Gap probability on a grid by the coupled ODE route. `s_grid` must be
/// strictly increasing with `len` entries; `out_e2` receives `len` values.
///
/// # Safety
/// `handle` live; `s_grid` and `out_e2` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rmt_gaps_ode_e2_grid(
    handle: *const RmtGapsEvaluator,
    geometry: c_int,
    s_grid: *const c_double,
    len: usize,
    out_e2: *mut c_double,
) -> RmtGapsStatus {
    if handle.is_null() || s_grid.is_null() || out_e2.is_null() {
        set_error("null pointer argument");
        return RmtGapsStatusInvalidArgument;
    }
    let eval = &*handle;
    let grid = std::slice::from_raw_parts(s_grid, len);
    let out = std::slice::from_raw_parts_mut(out_e2, len);
    let cfg = SolverConfig::default();
    let result = match (eval.weight, geometry) {
        (WeightSpec::Hermite, RMT_GAPS_GEOMETRY_EXTERIOR) => {
            integrate_gauss(eval.n, grid, &cfg).map(|t| t.iter().map(|v| v.e2()).collect::<Vec<_>>())
        }
        (WeightSpec::Jacobi { .. }, RMT_GAPS_GEOMETRY_JACOBI_EXTERIOR) => {
            integrate_jacobi(eval.n, &eval.weight, JacobiFamily::End, grid, &cfg)
                .map(|t| t.iter().map(|v| v.e2()).collect())
        }
        (WeightSpec::Jacobi { .. }, RMT_GAPS_GEOMETRY_INTERIOR) => {
            integrate_jacobi(eval.n, &eval.weight, JacobiFamily::Interior, grid, &cfg)
                .map(|t| t.iter().map(|v| v.e2()).collect())
        }
        _ => {
            set_error("geometry not available on the ODE route for this weight");
            return RmtGapsStatusInvalidArgument;
        }
    };
    match result {
        Ok(values) => {
            out.copy_from_slice(&values);
            RmtGapsStatusOk
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Closed-form gap probability (N = 1, 2; plus the flat end family at any N).
///
/// # Safety
/// `out_value` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rmt_gaps_closed_form_e2(
    ensemble: c_int,
    alpha: c_double,
    beta: c_double,
    n: u32,
    geometry: c_int,
    s: c_double,
    out_value: *mut c_double,
) -> RmtGapsStatus {
    if out_value.is_null() {
        set_error("null pointer argument");
        return RmtGapsStatusInvalidArgument;
    }
    let weight = match weight_from(ensemble, alpha, beta) {
        Ok(w) => w,
        Err(status) => return status,
    };
    let n = n as usize;
    let value = match (weight, geometry) {
        (WeightSpec::Hermite, RMT_GAPS_GEOMETRY_EXTERIOR) => closedform::gue_closed(n, s).map(|b| b.e2),
        (WeightSpec::Hermite, RMT_GAPS_GEOMETRY_INTERIOR) => closedform::gue_interior_closed(n, s).map(|b| b.e2),
        (WeightSpec::Jacobi { alpha, beta }, RMT_GAPS_GEOMETRY_JACOBI_EXTERIOR) => {
            if alpha == 0.0 && beta == 0.0 {
                closedform::jue_zero_alpha_closed(n, s).map(|b| b.e2)
            } else {
                closedform::jue_end_closed(n, alpha, beta, s).map(|b| b.e2)
            }
        }
        (WeightSpec::Jacobi { alpha, beta }, RMT_GAPS_GEOMETRY_INTERIOR) => {
            closedform::jue_interior_closed(n, alpha, beta, s).map(|b| b.e2)
        }
        _ => {
            set_error("geometry/weight combination has no closed form here");
            return RmtGapsStatusInvalidArgument;
        }
    };
    match value {
        Ok(v) => {
            *out_value = v;
            RmtGapsStatusOk
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Monte Carlo estimate from the matrix models. Jacobi parameters must be
/// nonnegative integers (realized as Wishart dimensions).
///
/// # Safety
/// `out_p_hat` and `out_stderr` must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn rmt_gaps_mc_gap(
    ensemble: c_int,
    alpha: c_double,
    beta: c_double,
    n: u32,
    geometry: c_int,
    s: c_double,
    samples: usize,
    seed: u64,
    out_p_hat: *mut c_double,
    out_stderr: *mut c_double,
) -> RmtGapsStatus {
    if out_p_hat.is_null() || out_stderr.is_null() {
        set_error("null pointer argument");
        return RmtGapsStatusInvalidArgument;
    }
    let n = n as usize;
    let model = match ensemble {
        RMT_GAPS_ENSEMBLE_HERMITE => Ensemble::Gue { n },
        RMT_GAPS_ENSEMBLE_JACOBI => {
            if alpha < 0.0 || beta < 0.0 || alpha.fract() != 0.0 || beta.fract() != 0.0 {
                set_error("the matrix model needs integer alpha, beta >= 0");
                return RmtGapsStatusDomainError;
            }
            Ensemble::Jue { n, m1: n + alpha as usize, m2: n + beta as usize }
        }
        _ => {
            set_error(format!("unknown ensemble selector {ensemble}"));
            return RmtGapsStatusInvalidArgument;
        }
    };
    let geometry = match geometry_from(geometry, s) {
        Ok(g) => g,
        Err(status) => return status,
    };
    match empirical_gap(&model, &geometry, samples, seed) {
        Ok(est) => {
            *out_p_hat = est.p_hat;
            *out_stderr = est.stderr;
            RmtGapsStatusOk
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Copy the most recent error message of this thread into `buf` (truncated
/// to `cap - 1` bytes, NUL-terminated). Returns the full message length.
///
/// # Safety
/// `buf` must be valid for `cap` bytes when `cap > 0`.
#[no_mangle]
pub unsafe extern "C" fn rmt_gaps_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buf.is_null() && cap > 0 {
            let take = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, take);
            *buf.add(take) = 0;
        }
        bytes.len()
    })
}
