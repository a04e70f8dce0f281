//! C ABI for the placement library: opaque handles, status codes and a
//! thread-local last-error message. The header is generated into
//! `include/skyplace.h` by the build script.
//!
//! Ownership rules: every `sky_*_new`-style constructor hands the caller an
//! owned handle that must be released with the matching `sky_*_free`;
//! `free` functions accept null.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;

use skyplace::error::Error;
use skyplace::io::load_scenario;
use skyplace::metrics::{evaluate, Placement};
use skyplace::place2d::{invert_coverage_radius, kmeans_place, spiral_place, DiscCoverInstance};
use skyplace::scenario::{gen_road, Scenario};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum SkyStatus {
    SkyOk = 0,
    SkyNullPointer = 1,
    SkyInvalidUtf8 = 2,
    SkyInvalidArgument = 3,
    SkyInfeasible = 4,
    SkyIoError = 5,
    SkyInternalError = 6,
}

/// Opaque scenario handle.
pub struct SkyScenario(Scenario);

/// Opaque placement handle.
pub struct SkyPlacement(Placement);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn record_error(message: String, status: SkyStatus) -> SkyStatus {
    let c = CString::new(message).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
    status
}

fn status_of(e: &Error) -> SkyStatus {
    match e {
        Error::InvalidArgument(_) | Error::Config(_) | Error::Parse { .. } => SkyStatus::SkyInvalidArgument,
        Error::Infeasible { .. }
        | Error::MinRateUnachievable { .. }
        | Error::UncoverableGts(_)
        | Error::EmptyFlyGrid { .. }
        | Error::InstanceTooLarge { .. } => SkyStatus::SkyInfeasible,
        Error::Io(_) => SkyStatus::SkyIoError,
        _ => SkyStatus::SkyInternalError,
    }
}

fn fail(e: Error) -> SkyStatus {
    let status = status_of(&e);
    record_error(e.to_string(), status)
}

/// Copy the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated). Returns the full message length in bytes, or 0
/// when no error has been recorded.
#[no_mangle]
pub unsafe extern "C" fn sky_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let guard = e.borrow();
        let Some(msg) = guard.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast(), n);
            *buf.add(n - 1) = 0;
        }
        bytes.len() - 1
    })
}

unsafe fn path_from(ptr: *const c_char) -> Result<&'static Path, SkyStatus> {
    if ptr.is_null() {
        return Err(record_error("null path".into(), SkyStatus::SkyNullPointer));
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => Err(record_error("path is not valid UTF-8".into(), SkyStatus::SkyInvalidUtf8)),
    }
}

/// Load a scenario JSON document (any referenced SLF file is resolved
/// relative to it). On success `*out` owns the new handle.
#[no_mangle]
pub unsafe extern "C" fn sky_scenario_load(path: *const c_char, out: *mut *mut SkyScenario) -> SkyStatus {
    if out.is_null() {
        return record_error("null output pointer".into(), SkyStatus::SkyNullPointer);
    }
    let path = match path_from(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match load_scenario(path) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(SkyScenario(s)));
            SkyStatus::SkyOk
        }
        Err(e) => fail(e),
    }
}

/// Generate the seeded straight-road scenario.
#[no_mangle]
pub unsafe extern "C" fn sky_scenario_gen_road(
    n_gt: usize,
    length_m: f64,
    seed: u64,
    out: *mut *mut SkyScenario,
) -> SkyStatus {
    if out.is_null() {
        return record_error("null output pointer".into(), SkyStatus::SkyNullPointer);
    }
    match gen_road(n_gt, length_m, seed) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(SkyScenario(s)));
            SkyStatus::SkyOk
        }
        Err(e) => fail(e),
    }
}

/// Number of ground terminals, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn sky_scenario_n_gt(scenario: *const SkyScenario) -> usize {
    scenario.as_ref().map_or(0, |s| s.0.n_gt())
}

#[no_mangle]
pub unsafe extern "C" fn sky_scenario_free(scenario: *mut SkyScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// K-means placement with `k` ABSs at the given altitude.
#[no_mangle]
pub unsafe extern "C" fn sky_place_kmeans(
    scenario: *const SkyScenario,
    k: usize,
    altitude_m: f64,
    seed: u64,
    out: *mut *mut SkyPlacement,
) -> SkyStatus {
    let Some(s) = scenario.as_ref() else {
        return record_error("null scenario".into(), SkyStatus::SkyNullPointer);
    };
    if out.is_null() {
        return record_error("null output pointer".into(), SkyStatus::SkyNullPointer);
    }
    match kmeans_place(&s.0, k, altitude_m, seed) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(SkyPlacement(p)));
            SkyStatus::SkyOk
        }
        Err(e) => fail(e),
    }
}

/// Spiral disc-cover placement; the coverage radius follows from the
/// scenario's link budget at the given altitude.
#[no_mangle]
pub unsafe extern "C" fn sky_place_spiral(
    scenario: *const SkyScenario,
    altitude_m: f64,
    out: *mut *mut SkyPlacement,
) -> SkyStatus {
    let Some(s) = scenario.as_ref() else {
        return record_error("null scenario".into(), SkyStatus::SkyNullPointer);
    };
    if out.is_null() {
        return record_error("null output pointer".into(), SkyStatus::SkyNullPointer);
    }
    let result = invert_coverage_radius(&s.0.radio, altitude_m)
        .map(|r| DiscCoverInstance::from_scenario(&s.0, r, altitude_m))
        .and_then(|inst| spiral_place(&inst));
    match result {
        Ok(p) => {
            *out = Box::into_raw(Box::new(SkyPlacement(p)));
            SkyStatus::SkyOk
        }
        Err(e) => fail(e),
    }
}

/// Number of ABSs, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn sky_placement_n_abs(placement: *const SkyPlacement) -> usize {
    placement.as_ref().map_or(0, |p| p.0.n_abs())
}

/// Copy ABS position `index` into `xyz` (3 doubles).
#[no_mangle]
pub unsafe extern "C" fn sky_placement_position(
    placement: *const SkyPlacement,
    index: usize,
    xyz: *mut f64,
) -> SkyStatus {
    let Some(p) = placement.as_ref() else {
        return record_error("null placement".into(), SkyStatus::SkyNullPointer);
    };
    if xyz.is_null() {
        return record_error("null output pointer".into(), SkyStatus::SkyNullPointer);
    }
    let Some(pos) = p.0.abs_positions.get(index) else {
        return record_error(format!("ABS index {index} out of range"), SkyStatus::SkyInvalidArgument);
    };
    *xyz = pos.x;
    *xyz.add(1) = pos.y;
    *xyz.add(2) = pos.z;
    SkyStatus::SkyOk
}

#[no_mangle]
pub unsafe extern "C" fn sky_placement_free(placement: *mut SkyPlacement) {
    if !placement.is_null() {
        drop(Box::from_raw(placement));
    }
}

/// Evaluate a placement under the scenario's channel model. Writes the sum
/// and minimum per-GT rates in bit/s.
#[no_mangle]
pub unsafe extern "C" fn sky_evaluate(
    scenario: *const SkyScenario,
    placement: *const SkyPlacement,
    sum_rate_bps: *mut f64,
    min_rate_bps: *mut f64,
) -> SkyStatus {
    let Some(s) = scenario.as_ref() else {
        return record_error("null scenario".into(), SkyStatus::SkyNullPointer);
    };
    let Some(p) = placement.as_ref() else {
        return record_error("null placement".into(), SkyStatus::SkyNullPointer);
    };
    if sum_rate_bps.is_null() || min_rate_bps.is_null() {
        return record_error("null output pointer".into(), SkyStatus::SkyNullPointer);
    }
    match evaluate(&s.0, &p.0) {
        Ok(q) => {
            *sum_rate_bps = q.sum_rate_bps;
            *min_rate_bps = q.min_rate_bps;
            SkyStatus::SkyOk
        }
        Err(e) => fail(e),
    }
}
