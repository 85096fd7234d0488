//! C ABI for the covtor library.
//!
//! Conventions: handles are opaque pointers created and freed here;
//! functions return a `CovtorStatus` (0 is success) or NULL on failure;
//! structured results come back as JSON strings allocated by Rust and
//! released with `covtor_string_free`. The last error message is kept
//! per-thread and fetched with `covtor_last_error`. Panics never cross
//! the boundary; they turn into `COVTOR_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::c_char;

use covtor::complex::FreeComplex;
use covtor::coset::{
    alpha_subspace, alpha_volume_sq, kernel_decomposition_check, restricted_kernel_volume_sq,
};
use covtor::error::Error;
use covtor::io::{
    format_rational, load_complex, parse_complex_json, parse_coset, parse_sublattice,
    report_to_json,
};
use covtor::lattice::Sublattice;
use covtor::spectral::bv_identity_check;

/// Status codes shared by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum CovtorStatus {
    Ok = 0,
    /// Malformed input: JSON, spec strings, ranges.
    Parse = 1,
    /// Structurally invalid mathematics: shapes, chain condition,
    /// rank-deficient lattices, empty intersections.
    Validation = 2,
    /// Exact/spectral cross-checks failed (rank firewall, norm bound,
    /// kernel coverage).
    Crosscheck = 3,
    /// A panic or other internal fault; details in the last error.
    Internal = 4,
    /// A NULL argument or invalid handle.
    NullArgument = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CovtorStatus {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Io(_) | Error::DimensionMismatch { .. } => {
            CovtorStatus::Parse
        }
        Error::RankCrosscheck { .. }
        | Error::SvdFailed
        | Error::NormBound { .. }
        | Error::CoverageMismatch { .. }
        | Error::AlphaDimension { .. } => CovtorStatus::Crosscheck,
        _ => CovtorStatus::Validation,
    }
}

fn capture<T>(body: impl FnOnce() -> Result<T, (CovtorStatus, String)>) -> Result<T, CovtorStatus> {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(v)) => Ok(v),
        Ok(Err((status, msg))) => {
            set_error(msg);
            Err(status)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal fault: {msg}"));
            Err(CovtorStatus::Internal)
        }
    }
}

fn lib_err(e: Error) -> (CovtorStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, (CovtorStatus, String)> {
    if ptr.is_null() {
        return Err((CovtorStatus::NullArgument, "NULL string argument".into()));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| (CovtorStatus::Parse, "argument is not valid UTF-8".into()))
}

fn to_cstring(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// Opaque handle to a validated-shape chain complex.
pub struct CovtorComplex {
    inner: FreeComplex,
}

/// Opaque handle to a sublattice of Z^n.
pub struct CovtorLattice {
    inner: Sublattice,
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn covtor_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy of the last error message on this thread, or NULL if none.
/// Free with `covtor_string_free`.
#[no_mangle]
pub extern "C" fn covtor_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|c| c.clone().into_raw())
            .unwrap_or(std::ptr::null_mut())
    })
}

/// Frees a string allocated by this library. NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by a covtor function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn covtor_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a complex from JSON text. Returns NULL on failure.
///
/// # Safety
/// `json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn covtor_complex_parse_json(json: *const c_char) -> *mut CovtorComplex {
    capture(|| {
        let text = cstr(json)?;
        let inner = parse_complex_json(text).map_err(lib_err)?;
        Ok(Box::into_raw(Box::new(CovtorComplex { inner })))
    })
    .unwrap_or(std::ptr::null_mut())
}

/// Loads a complex from a JSON file. Returns NULL on failure.
///
/// # Safety
/// `path` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn covtor_complex_load(path: *const c_char) -> *mut CovtorComplex {
    capture(|| {
        let p = cstr(path)?;
        let inner = load_complex(p).map_err(lib_err)?;
        Ok(Box::into_raw(Box::new(CovtorComplex { inner })))
    })
    .unwrap_or(std::ptr::null_mut())
}

/// Frees a complex handle. NULL is a no-op.
///
/// # Safety
/// `c` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn covtor_complex_free(c: *mut CovtorComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Checks the chain condition exactly.
///
/// # Safety
/// `c` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn covtor_complex_validate(c: *const CovtorComplex) -> CovtorStatus {
    match capture(|| {
        if c.is_null() {
            return Err((CovtorStatus::NullArgument, "NULL complex".into()));
        }
        (*c).inner.validate().map_err(lib_err)
    }) {
        Ok(()) => CovtorStatus::Ok,
        Err(status) => status,
    }
}

/// Number of variables of the ambient group ring.
///
/// # Safety
/// `c` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn covtor_complex_dim(c: *const CovtorComplex) -> usize {
    if c.is_null() {
        return 0;
    }
    (*c).inner.dim()
}

/// Number of chain levels (top level + 1).
///
/// # Safety
/// `c` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn covtor_complex_levels(c: *const CovtorComplex) -> usize {
    if c.is_null() {
        return 0;
    }
    (*c).inner.ranks().len()
}

/// Parses a sublattice spec (`diag:…` or `mat:…`) in ambient dimension
/// `n`. Returns NULL on failure.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn covtor_lattice_parse(spec: *const c_char, n: usize) -> *mut CovtorLattice {
    capture(|| {
        let s = cstr(spec)?;
        let inner = parse_sublattice(s, n).map_err(lib_err)?;
        Ok(Box::into_raw(Box::new(CovtorLattice { inner })))
    })
    .unwrap_or(std::ptr::null_mut())
}

/// Frees a lattice handle. NULL is a no-op.
///
/// # Safety
/// `l` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn covtor_lattice_free(l: *mut CovtorLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// Girth (minimal l1 norm of a nonzero lattice vector) of a full-rank
/// lattice, written to `out`.
///
/// # Safety
/// `l` must be a live handle; `out` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn covtor_lattice_girth(
    l: *const CovtorLattice,
    out: *mut u64,
) -> CovtorStatus {
    match capture(|| {
        if l.is_null() || out.is_null() {
            return Err((CovtorStatus::NullArgument, "NULL argument".into()));
        }
        let g = (*l).inner.girth().map_err(lib_err)?;
        *out = g;
        Ok(())
    }) {
        Ok(()) => CovtorStatus::Ok,
        Err(status) => status,
    }
}

/// Index `|Z^n : Gamma|` as a decimal string (big integers do not fit a
/// fixed-width type). Returns NULL on failure; free the result.
///
/// # Safety
/// `l` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn covtor_lattice_index(l: *const CovtorLattice) -> *mut c_char {
    capture(|| {
        if l.is_null() {
            return Err((CovtorStatus::NullArgument, "NULL lattice".into()));
        }
        let idx = (*l).inner.index().map_err(lib_err)?;
        Ok(to_cstring(idx.to_string()))
    })
    .unwrap_or(std::ptr::null_mut())
}

/// Full torsion report (homology torsion, Ray-Singer torsion, squared
/// regulators, residual) as a JSON string. `eps` is the relative rank
/// tolerance; pass 0 for the default 1e-9. Returns NULL on failure.
///
/// # Safety
/// `c` and `l` must be live handles from this library.
#[no_mangle]
pub unsafe extern "C" fn covtor_report_json(
    c: *const CovtorComplex,
    l: *const CovtorLattice,
    eps: f64,
) -> *mut c_char {
    capture(|| {
        if c.is_null() || l.is_null() {
            return Err((CovtorStatus::NullArgument, "NULL handle".into()));
        }
        let eps = if eps > 0.0 {
            eps
        } else {
            covtor::spectral::DEFAULT_EPS
        };
        (*c).inner.validate().map_err(lib_err)?;
        let report = bv_identity_check(&(*c).inner, &(*l).inner, eps).map_err(lib_err)?;
        Ok(to_cstring(report_to_json(&report).to_string()))
    })
    .unwrap_or(std::ptr::null_mut())
}

/// Torsion-coset diagnostics for the Laplacian at `level`: per-coset
/// membership counts, volumes, and the kernel decomposition check.
/// `cosets` is an array of `n_cosets` spec strings `u=…;L=…`. Returns a
/// JSON string or NULL on failure (a non-covering coset list is a
/// failure with crosscheck status).
///
/// # Safety
/// `c` and `l` must be live handles; `cosets` must point to `n_cosets`
/// valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn covtor_coset_json(
    c: *const CovtorComplex,
    l: *const CovtorLattice,
    level: usize,
    cosets: *const *const c_char,
    n_cosets: usize,
) -> *mut c_char {
    capture(|| {
        if c.is_null() || l.is_null() || (n_cosets > 0 && cosets.is_null()) {
            return Err((CovtorStatus::NullArgument, "NULL handle".into()));
        }
        let complex = &(*c).inner;
        let gamma = &(*l).inner;
        if level > complex.top_level() {
            return Err((
                CovtorStatus::Parse,
                format!("level {level} out of range"),
            ));
        }
        let laplacian = complex.laplacian_at(level).map_err(lib_err)?;
        let mut normalized = Vec::with_capacity(n_cosets);
        for i in 0..n_cosets {
            let spec = cstr(*cosets.add(i))?;
            let coset = parse_coset(spec, complex.dim()).map_err(lib_err)?;
            normalized.push((spec.to_string(), coset.normalize().map_err(lib_err)?));
        }

        let mut rows = Vec::new();
        for (spec, norm) in &normalized {
            let alpha = alpha_subspace(gamma, norm).map_err(lib_err)?;
            let vol = if alpha.members.is_empty() {
                None
            } else {
                Some(alpha_volume_sq(gamma, norm).map_err(lib_err)?)
            };
            let ker = restricted_kernel_volume_sq(&laplacian, gamma, norm).map_err(lib_err)?;
            rows.push(serde_json::json!({
                "coset": spec,
                "members": alpha.members.len(),
                "conjugates": alpha.conjugate_count,
                "b_order": alpha.b_order.to_string(),
                "alpha_vol_sq": vol.as_ref().map_or_else(
                    || "1/1".to_string(),
                    |v| format_rational(&v.volume_sq),
                ),
                "alpha_bound_ok": vol.as_ref().is_none_or(|v| v.bound_holds),
                "restricted_ker_vol_sq": format_rational(&ker),
            }));
        }
        let only: Vec<_> = normalized.into_iter().map(|(_, n)| n).collect();
        let decomp = kernel_decomposition_check(&laplacian, gamma, &only).map_err(lib_err)?;
        let value = serde_json::json!({
            "level": level,
            "cosets": rows,
            "kernel_decomposition": {
                "dim_full": decomp.dim_full,
                "dim_covered": decomp.dim_covered,
                "vol_sq_full": format_rational(&decomp.volume_sq_full),
                "vol_sq_product": format_rational(&decomp.volume_sq_product),
                "volume_bound_holds": decomp.volume_bound_holds,
            },
        });
        Ok(to_cstring(value.to_string()))
    })
    .unwrap_or(std::ptr::null_mut())
}
