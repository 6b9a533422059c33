//! C ABI over the verification laboratory.
//!
//! Conventions: every function returns an [`Lg36Status`] code and writes
//! results through out-pointers; configuration lives behind the opaque
//! [`Lg36Config`] handle; reports and exact rational scalars are returned as
//! heap-allocated UTF-8 strings that the caller releases with
//! [`lg36_string_free`]; panics never unwind across the boundary — they are
//! caught and reported as [`Lg36Status::InternalPanic`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lg36::enumerative::{
    brill_noether_degree, gr26_degree, serre_involution_pairs, sigma_ring_degree, vertex_degrees,
};
use lg36::pencil::segre_degree;
use lg36::report::{
    run_all, run_numerology, run_pencil, run_verify_sigma, run_verify_theorem_a, run_vertex,
    FieldChoice, RunConfig, VerificationReport, SCHEMA_VERSION,
};

/// Outcome of a C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lg36Status {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A field string was not "q" or "fp:<odd prime>".
    InvalidField = 3,
    /// The subcommand name is not one of the six run names.
    InvalidSubcommand = 4,
    /// The arguments lie outside the function's exact domain.
    OutOfDomain = 5,
    /// A panic was caught at the boundary; the operation did not complete.
    InternalPanic = 6,
}

/// Opaque verification-run configuration. Create with [`lg36_config_new`],
/// adjust with the setters, release with [`lg36_config_free`].
pub struct Lg36Config {
    inner: RunConfig,
}

fn guarded(f: impl FnOnce() -> Lg36Status) -> Lg36Status {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(Lg36Status::InternalPanic)
}

/// # Safety
/// `p` must be null or a valid NUL-terminated C string.
unsafe fn cstr<'a>(p: *const c_char) -> Result<&'a str, Lg36Status> {
    if p.is_null() {
        return Err(Lg36Status::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| Lg36Status::InvalidUtf8)
}

fn leak_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// Version of the JSON report layout produced by [`lg36_run`].
#[no_mangle]
pub extern "C" fn lg36_schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Allocates a configuration with the defaults: field fp:1009, seed 0,
/// 300 samples, 200 fit pairs, 50 held-out pairs, timings off.
#[no_mangle]
pub extern "C" fn lg36_config_new() -> *mut Lg36Config {
    Box::into_raw(Box::new(Lg36Config {
        inner: RunConfig::default(),
    }))
}

/// Releases a configuration created by [`lg36_config_new`]. Null is a no-op.
///
/// # Safety
/// `config` must be null or a pointer obtained from [`lg36_config_new`] that
/// has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn lg36_config_free(config: *mut Lg36Config) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Sets the coefficient field from a string: "q" or "fp:<odd prime>".
///
/// # Safety
/// `config` must be a live handle from [`lg36_config_new`]; `field` must be
/// a valid NUL-terminated C string.
#[no_mangle]
pub unsafe extern "C" fn lg36_config_set_field(
    config: *mut Lg36Config,
    field: *const c_char,
) -> Lg36Status {
    guarded(|| {
        let Some(cfg) = config.as_mut() else {
            return Lg36Status::NullPointer;
        };
        let text = match cstr(field) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match FieldChoice::parse(text) {
            Ok(choice) => {
                cfg.inner.field = choice;
                Lg36Status::Ok
            }
            Err(_) => Lg36Status::InvalidField,
        }
    })
}

/// Sets the master seed.
///
/// # Safety
/// `config` must be a live handle from [`lg36_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lg36_config_set_seed(config: *mut Lg36Config, seed: u64) -> Lg36Status {
    guarded(|| match config.as_mut() {
        Some(cfg) => {
            cfg.inner.seed = seed;
            Lg36Status::Ok
        }
        None => Lg36Status::NullPointer,
    })
}

/// Sets the sample budget for randomized scans and equivalence checks.
///
/// # Safety
/// `config` must be a live handle from [`lg36_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lg36_config_set_samples(
    config: *mut Lg36Config,
    samples: usize,
) -> Lg36Status {
    guarded(|| match config.as_mut() {
        Some(cfg) => {
            cfg.inner.samples = samples;
            Lg36Status::Ok
        }
        None => Lg36Status::NullPointer,
    })
}

/// Sets how many section points feed the projection fit.
///
/// # Safety
/// `config` must be a live handle from [`lg36_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lg36_config_set_fit_samples(
    config: *mut Lg36Config,
    fit_samples: usize,
) -> Lg36Status {
    guarded(|| match config.as_mut() {
        Some(cfg) => {
            cfg.inner.fit_samples = fit_samples;
            Lg36Status::Ok
        }
        None => Lg36Status::NullPointer,
    })
}

/// Sets how many held-out section points certify the fitted projection.
///
/// # Safety
/// `config` must be a live handle from [`lg36_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lg36_config_set_holdout_samples(
    config: *mut Lg36Config,
    holdout_samples: usize,
) -> Lg36Status {
    guarded(|| match config.as_mut() {
        Some(cfg) => {
            cfg.inner.holdout_samples = holdout_samples;
            Lg36Status::Ok
        }
        None => Lg36Status::NullPointer,
    })
}

/// Enables or disables per-check wall-clock timings in the report. Timings
/// break byte-identical reproducibility of the JSON output.
///
/// # Safety
/// `config` must be a live handle from [`lg36_config_new`].
#[no_mangle]
pub unsafe extern "C" fn lg36_config_set_timings(
    config: *mut Lg36Config,
    timings: bool,
) -> Lg36Status {
    guarded(|| match config.as_mut() {
        Some(cfg) => {
            cfg.inner.timings = timings;
            Lg36Status::Ok
        }
        None => Lg36Status::NullPointer,
    })
}

/// Executes one run and returns its JSON report.
///
/// `subcommand` is one of "verify-sigma", "verify-theorem-a", "vertex",
/// "pencil", "numerology", "all". On success `*out_json` receives a
/// NUL-terminated JSON document (release with [`lg36_string_free`]); the
/// optional `out_passed` / `out_anomalies` flags receive the aggregate
/// verdicts (pass `NULL` to skip either). Identical configurations produce
/// byte-identical JSON when timings are off.
///
/// # Safety
/// `config` must be a live handle from [`lg36_config_new`]; `subcommand`
/// must be a valid NUL-terminated C string; `out_json` must point to
/// writable storage; `out_passed` and `out_anomalies` must each be null or
/// point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn lg36_run(
    config: *const Lg36Config,
    subcommand: *const c_char,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
    out_anomalies: *mut bool,
) -> Lg36Status {
    guarded(|| {
        let Some(cfg) = config.as_ref() else {
            return Lg36Status::NullPointer;
        };
        if out_json.is_null() {
            return Lg36Status::NullPointer;
        }
        let name = match cstr(subcommand) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let run = match name {
            "verify-sigma" => run_verify_sigma,
            "verify-theorem-a" => run_verify_theorem_a,
            "vertex" => run_vertex,
            "pencil" => run_pencil,
            "numerology" => run_numerology,
            "all" => run_all,
            _ => return Lg36Status::InvalidSubcommand,
        };
        let report = VerificationReport::new(&cfg.inner, run(&cfg.inner));
        if !out_passed.is_null() {
            *out_passed = report.passed;
        }
        if !out_anomalies.is_null() {
            *out_anomalies = report.anomalies;
        }
        *out_json = leak_string(report.to_json());
        Lg36Status::Ok
    })
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn lg36_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The sixth power of the hyperplane class on the Lagrangian 6-fold: 16.
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn lg36_sigma_ring_degree(out: *mut i64) -> Lg36Status {
    guarded(|| {
        if out.is_null() {
            return Lg36Status::NullPointer;
        }
        *out = sigma_ring_degree();
        Lg36Status::Ok
    })
}

/// The Plücker degree of the Grassmannian of 2-planes in 6-space: 14.
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn lg36_gr26_degree(out: *mut u64) -> Lg36Status {
    guarded(|| {
        if out.is_null() {
            return Lg36Status::NullPointer;
        }
        *out = gr26_degree();
        Lg36Status::Ok
    })
}

/// The degree of the vertex variety of a general k-dimensional system of
/// hyperplane sections, for k in 2..=5 (8, 16, 12, 5 respectively).
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn lg36_vertex_degree(k: u32, out: *mut u64) -> Lg36Status {
    guarded(|| {
        if out.is_null() {
            return Lg36Status::NullPointer;
        }
        match vertex_degrees().get(&k) {
            Some(d) => {
                *out = *d;
                Lg36Status::Ok
            }
            None => Lg36Status::OutOfDomain,
        }
    })
}

/// The degree n! of the variety of common Lagrangian subspaces of a general
/// pencil on a 2n-dimensional space, for n in 1..=20 (u64 range).
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn lg36_segre_degree(n: u32, out: *mut u64) -> Lg36Status {
    guarded(|| {
        if out.is_null() {
            return Lg36Status::NullPointer;
        }
        if n == 0 || n > 20 {
            return Lg36Status::OutOfDomain;
        }
        *out = segre_degree(n as usize);
        Lg36Status::Ok
    })
}

/// The number of linear series of degree d and dimension r on a general
/// curve of genus g when that number is finite, as an exact decimal string
/// (release with [`lg36_string_free`]). Returns `OutOfDomain` when the
/// count is not defined.
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn lg36_brill_noether_degree(
    g: i64,
    r: i64,
    d: i64,
    out: *mut *mut c_char,
) -> Lg36Status {
    guarded(|| {
        if out.is_null() {
            return Lg36Status::NullPointer;
        }
        match brill_noether_degree(g, r, d) {
            Ok(v) => {
                *out = leak_string(v.to_string());
                Lg36Status::Ok
            }
            Err(_) => Lg36Status::OutOfDomain,
        }
    })
}

/// Half the Brill–Noether count when the Serre involution pairs the series,
/// as an exact decimal string (release with [`lg36_string_free`]).
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn lg36_serre_involution_pairs(
    g: i64,
    r: i64,
    d: i64,
    out: *mut *mut c_char,
) -> Lg36Status {
    guarded(|| {
        if out.is_null() {
            return Lg36Status::NullPointer;
        }
        match serre_involution_pairs(g, r, d) {
            Ok(v) => {
                *out = leak_string(v.to_string());
                Lg36Status::Ok
            }
            Err(_) => Lg36Status::OutOfDomain,
        }
    })
}
