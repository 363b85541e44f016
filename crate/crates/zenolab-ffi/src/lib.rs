// Copyright 2026 The zenolab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! C ABI for zenolab.
//!
//! Systems are held behind opaque handles; every fallible call returns a
//! `ZenolabStatus` code and writes results through out-pointers. Handles must
//! be released with `zenolab_system_free`. All functions are thread-safe as
//! long as a handle is not freed while another thread uses it.

use std::ffi::CStr;
use std::os::raw::c_char;

use zenolab::error::ZenoError;
use zenolab::metrics::{
    bound_first_order, bound_kick_commutator, bound_second_order, zeno_error_measurement,
    zeno_error_unitary,
};
use zenolab::sequences::{
    bessel_j0_zero, higher_order_kick, higher_order_measurement, kick_zeno, measurement_zeno,
    second_order_measurement, solve_compact_coefficients, udd_sequence,
};
use zenolab::system::{example_zz_x, parse_system_descriptor, random_system, SystemModel};
use zenolab::trotter::reflection_count;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZenolabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimMismatch = 3,
    NotHermitian = 4,
    NotProjector = 5,
    NotDensityMatrix = 6,
    UnsupportedRange = 7,
    SolverFailure = 8,
    FitFailure = 9,
    ConfigError = 10,
    IoError = 11,
    Utf8Error = 12,
}

fn status_of(e: &ZenoError) -> ZenolabStatus {
    match e {
        ZenoError::InvalidArgument(_) => ZenolabStatus::InvalidArgument,
        ZenoError::DimMismatch(_, _) => ZenolabStatus::DimMismatch,
        ZenoError::NotHermitian(_) => ZenolabStatus::NotHermitian,
        ZenoError::NotProjector(_) => ZenolabStatus::NotProjector,
        ZenoError::NotDensityMatrix(_) => ZenolabStatus::NotDensityMatrix,
        ZenoError::UnsupportedRange(_) => ZenolabStatus::UnsupportedRange,
        ZenoError::SolverFailure(_) => ZenolabStatus::SolverFailure,
        ZenoError::FitFailure(_) => ZenolabStatus::FitFailure,
        ZenoError::Config(_) => ZenolabStatus::ConfigError,
        ZenoError::Io(_) => ZenolabStatus::IoError,
    }
}

/// Opaque handle to a validated Hamiltonian/projector system.
pub struct ZenolabSystem {
    inner: SystemModel,
}

/// Parses a system descriptor (preset `zz_x:beta=..,J=..` or the
/// `dim/H/P` text form) into a new handle.
///
/// # Safety
/// `descriptor` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn zenolab_system_parse(
    descriptor: *const c_char,
    out: *mut *mut ZenolabSystem,
) -> ZenolabStatus {
    if descriptor.is_null() || out.is_null() {
        return ZenolabStatus::NullPointer;
    }
    let Ok(text) = CStr::from_ptr(descriptor).to_str() else {
        return ZenolabStatus::Utf8Error;
    };
    match parse_system_descriptor(text) {
        Ok(sys) => {
            *out = Box::into_raw(Box::new(ZenolabSystem { inner: sys }));
            ZenolabStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Builds the two-qubit worked example with the given parameters.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zenolab_system_example(
    beta: f64,
    j: f64,
    out: *mut *mut ZenolabSystem,
) -> ZenolabStatus {
    if out.is_null() {
        return ZenolabStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(ZenolabSystem { inner: example_zz_x(beta, j) }));
    ZenolabStatus::Ok
}

/// Draws a seeded random system (normalized Hamiltonian, rank-`rank`
/// projector).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zenolab_system_random(
    dim: usize,
    rank: usize,
    seed: u64,
    out: *mut *mut ZenolabSystem,
) -> ZenolabStatus {
    if out.is_null() {
        return ZenolabStatus::NullPointer;
    }
    match random_system(dim, rank, seed) {
        Ok(sys) => {
            *out = Box::into_raw(Box::new(ZenolabSystem { inner: sys }));
            ZenolabStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a system handle. Passing NULL is a no-op.
///
/// # Safety
/// `sys` must be a handle returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn zenolab_system_free(sys: *mut ZenolabSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Hilbert-space dimension of a system.
///
/// # Safety
/// `sys` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zenolab_system_dim(
    sys: *const ZenolabSystem,
    out: *mut usize,
) -> ZenolabStatus {
    let (Some(sys), false) = (sys.as_ref(), out.is_null()) else {
        return ZenolabStatus::NullPointer;
    };
    *out = sys.inner.dim;
    ZenolabStatus::Ok
}

/// The block norms `beta = ||H_Z||` and `J = ||H_PQ||`.
///
/// # Safety
/// `sys` must be a live handle; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn zenolab_system_norms(
    sys: *const ZenolabSystem,
    beta_out: *mut f64,
    j_out: *mut f64,
) -> ZenolabStatus {
    let Some(sys) = sys.as_ref() else {
        return ZenolabStatus::NullPointer;
    };
    if beta_out.is_null() || j_out.is_null() {
        return ZenolabStatus::NullPointer;
    }
    *beta_out = sys.inner.beta;
    *j_out = sys.inner.j;
    ZenolabStatus::Ok
}

/// Sequence families selectable through the C ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZenolabFamily {
    /// `(P e^{-iHt/N} P)^N`, compared against `e^{-iPHPt}P`.
    Measurement = 0,
    /// `(P e^{-iHdt/2} R e^{-iHdt/2} P)^N`, same target.
    Measurement2 = 1,
    /// `(P S_2k P)^N`, same target (uses `k`).
    Measurement2k = 2,
    /// `(R e^{-iHt/N})^N`, compared against `R^N e^{-iH_Z t}`.
    Kick = 3,
    /// `S_2k^N`, compared against `e^{-iH_Z t}` (uses `k`).
    Kick2k = 4,
    /// Single UDD step of size `t`, compared against `e^{-iH_Z t}`
    /// (uses `k`; `n` ignored).
    Udd = 5,
}

/// Compiles a sequence of the given family and writes its Zeno error
/// (spectral-norm distance to the ideal target) to `error_out`.
///
/// # Safety
/// `sys` must be a live handle; `error_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zenolab_zeno_error(
    sys: *const ZenolabSystem,
    family: ZenolabFamily,
    k: usize,
    n: usize,
    t: f64,
    error_out: *mut f64,
) -> ZenolabStatus {
    let Some(handle) = sys.as_ref() else {
        return ZenolabStatus::NullPointer;
    };
    if error_out.is_null() {
        return ZenolabStatus::NullPointer;
    }
    let sys = &handle.inner;
    let result = (|| -> Result<f64, ZenoError> {
        match family {
            ZenolabFamily::Measurement => {
                zeno_error_measurement(sys, &measurement_zeno(sys, n, t)?, t)
            }
            ZenolabFamily::Measurement2 => {
                zeno_error_measurement(sys, &second_order_measurement(sys, n, t)?, t)
            }
            ZenolabFamily::Measurement2k => {
                zeno_error_measurement(sys, &higher_order_measurement(sys, k, n, t)?, t)
            }
            ZenolabFamily::Kick => {
                zeno_error_unitary(sys, &kick_zeno(sys, n, t)?, t, true, n)
            }
            ZenolabFamily::Kick2k => {
                zeno_error_unitary(sys, &higher_order_kick(sys, k, n, t)?, t, false, n)
            }
            ZenolabFamily::Udd => {
                zeno_error_unitary(sys, &udd_sequence(sys, k, t)?, t, false, 0)
            }
        }
    })();
    match result {
        Ok(e) => {
            *error_out = e;
            ZenolabStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Analytic bounds selectable through the C ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZenolabBound {
    /// `t^2 ||H||^2 / N`.
    FirstOrder = 0,
    /// `t^3 ||H||^3 / (3 N^2)`.
    SecondOrder = 1,
    /// `t^2 ||[H, RHR]|| / (8N)` (paired-kick form).
    KickCommutator = 2,
}

/// Evaluates an analytic error bound.
///
/// # Safety
/// `sys` must be a live handle; `bound_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zenolab_bound(
    sys: *const ZenolabSystem,
    bound: ZenolabBound,
    t: f64,
    n: usize,
    bound_out: *mut f64,
) -> ZenolabStatus {
    let Some(handle) = sys.as_ref() else {
        return ZenolabStatus::NullPointer;
    };
    if bound_out.is_null() || n == 0 {
        return if n == 0 {
            ZenolabStatus::InvalidArgument
        } else {
            ZenolabStatus::NullPointer
        };
    }
    let sys = &handle.inner;
    let value = match bound {
        ZenolabBound::FirstOrder => Ok(bound_first_order(sys, t, n)),
        ZenolabBound::SecondOrder => Ok(bound_second_order(sys, t, n)),
        ZenolabBound::KickCommutator => bound_kick_commutator(sys, t, n),
    };
    match value {
        Ok(v) => {
            *bound_out = v;
            ZenolabStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Solves the compact-sequence coefficients for `order` in {3, 4}. Writes up
/// to `cap` values into `values_out` and the count into `len_out`.
///
/// # Safety
/// `values_out` must point to at least `cap` doubles; `len_out` valid.
#[no_mangle]
pub unsafe extern "C" fn zenolab_solve_compact_coefficients(
    order: usize,
    values_out: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> ZenolabStatus {
    if values_out.is_null() || len_out.is_null() {
        return ZenolabStatus::NullPointer;
    }
    match solve_compact_coefficients(order) {
        Ok(coeffs) => {
            if coeffs.values.len() > cap {
                return ZenolabStatus::InvalidArgument;
            }
            for (i, v) in coeffs.values.iter().enumerate() {
                *values_out.add(i) = *v;
            }
            *len_out = coeffs.values.len();
            ZenolabStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// The `n`-th positive zero of the Bessel function `J0` (`n` in 1..=5).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zenolab_bessel_j0_zero(n: usize, out: *mut f64) -> ZenolabStatus {
    if out.is_null() {
        return ZenolabStatus::NullPointer;
    }
    match bessel_j0_zero(n) {
        Ok(z) => {
            *out = z;
            ZenolabStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Reflection count of the order-`2k` Trotter step (`2 * 5^(k-1)`).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zenolab_reflection_count(k: usize, out: *mut usize) -> ZenolabStatus {
    if out.is_null() {
        return ZenolabStatus::NullPointer;
    }
    match reflection_count(k) {
        Ok(c) => {
            *out = c;
            ZenolabStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
