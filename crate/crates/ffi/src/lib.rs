//! C ABI over `euler_fan`.
//!
//! Every entry point returns an [`EfStatus`]; results are written through out
//! pointers. On failure the message is kept per thread and can be copied out
//! with [`ef_last_error_message`]. Handles are opaque and must be released
//! with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use euler_fan::patching::{assemble, normalize, PatchConfig, PatchedSolution, ProofCase};
use euler_fan::riemann1d::{classify_with, RiemannData, WaveKind};
use euler_fan::subsolution::{estimate_threshold, find, smallness_upper, SearchConfig, SearchResult};
use euler_fan::verifier::{verify_subsolution, Tolerances};
use euler_fan::{Error, GasModel, PrimState};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 3,
    NotFound = 4,
    VerificationFailed = 5,
    Vacuum = 6,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfWave {
    None = 0,
    Shock = 1,
    Rarefaction = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfCase {
    Case1Unique = 1,
    Case2 = 2,
    Case3 = 3,
    Case4 = 4,
    TwoShocks = 5,
    ContactFamilyOpen = 6,
}

/// Primitive state `(rho, u, v, p)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfMiddle {
    pub p: f64,
    pub v: f64,
    pub rho_left: f64,
    pub rho_right: f64,
    pub u_left: f64,
    pub u_right: f64,
}

/// `middle` is zeroed when `has_middle` is false.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfPattern {
    pub row: u8,
    pub left_wave: EfWave,
    pub contact: bool,
    pub right_wave: EfWave,
    pub has_middle: bool,
    pub middle: EfMiddle,
}

/// One interior region of a fan quintuple.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfRegion {
    pub rho: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub c: f64,
    pub p: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfWindow {
    pub upper: f64,
    pub v_est: f64,
}

/// Gas model handle.
pub struct EfGas(GasModel);

/// Fan subsolution found for normalised data.
pub struct EfSubsolution(SearchResult);

/// Patched composite.
pub struct EfPatched(PatchedSolution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: EfStatus, msg: impl Into<String>) -> EfStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> EfStatus {
    let status = match e {
        Error::Domain(_) => EfStatus::Domain,
        Error::Vacuum { .. } => EfStatus::Vacuum,
        Error::NotFound(_) => EfStatus::NotFound,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into [`EfStatus::Panic`].
fn guard(f: impl FnOnce() -> EfStatus) -> EfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(EfStatus::Panic, format!("panic: {msg}"))
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(EfStatus::NullPointer, concat!("null pointer: ", stringify!($p)));
        })+
    };
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return from_error(err),
        }
    };
}

fn prim(s: &EfState) -> euler_fan::Result<PrimState> {
    PrimState::new(s.rho, s.u, s.v, s.p)
}

fn state(s: &PrimState) -> EfState {
    EfState { rho: s.rho, u: s.u, v: s.v, p: s.p }
}

fn wave(w: WaveKind) -> EfWave {
    match w {
        WaveKind::None => EfWave::None,
        WaveKind::Shock => EfWave::Shock,
        WaveKind::Rarefaction => EfWave::Rarefaction,
    }
}

fn case(c: ProofCase) -> EfCase {
    match c {
        ProofCase::Case1Unique => EfCase::Case1Unique,
        ProofCase::Case2 => EfCase::Case2,
        ProofCase::Case3 => EfCase::Case3,
        ProofCase::Case4 => EfCase::Case4,
        ProofCase::TwoShocks => EfCase::TwoShocks,
        ProofCase::ContactFamilyOpen => EfCase::ContactFamilyOpen,
    }
}

unsafe fn data(gas: *const EfGas, left: *const EfState, right: *const EfState) -> euler_fan::Result<RiemannData> {
    RiemannData::new((*gas).0, prim(&*left)?, prim(&*right)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ef_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error of this thread into `buf` (NUL-terminated, truncated
/// to `len`). Returns the full message length, 0 when there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ef_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ef_gas_new(c_v: f64, out: *mut *mut EfGas) -> EfStatus {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let g = attempt!(GasModel::new(c_v));
        *out = Box::into_raw(Box::new(EfGas(g)));
        EfStatus::Ok
    })
}

/// # Safety
/// `gas` must come from [`ef_gas_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ef_gas_free(gas: *mut EfGas) {
    if !gas.is_null() {
        drop(Box::from_raw(gas));
    }
}

/// # Safety
/// Pointers must be valid; `gas` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_gas_gamma(gas: *const EfGas, out: *mut f64) -> EfStatus {
    guard(|| {
        non_null!(gas, out);
        *out = (*gas).0.gamma();
        EfStatus::Ok
    })
}

/// Wave pattern of the Riemann problem `left | right`.
///
/// # Safety
/// Pointers must be valid; `gas` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_classify(
    gas: *const EfGas,
    left: *const EfState,
    right: *const EfState,
    tol_cls: f64,
    out: *mut EfPattern,
) -> EfStatus {
    guard(|| {
        non_null!(gas, left, right, out);
        let d = attempt!(data(gas, left, right));
        let p = attempt!(classify_with(&d, tol_cls));
        let middle = p.middle.map(|m| EfMiddle {
            p: m.p,
            v: m.v,
            rho_left: m.rho_left,
            rho_right: m.rho_right,
            u_left: m.u_left,
            u_right: m.u_right,
        });
        *out = EfPattern {
            row: p.row(),
            left_wave: wave(p.left_wave),
            contact: p.contact,
            right_wave: wave(p.right_wave),
            has_middle: middle.is_some(),
            middle: middle.unwrap_or(EfMiddle {
                p: 0.0,
                v: 0.0,
                rho_left: 0.0,
                rho_right: 0.0,
                u_left: 0.0,
                u_right: 0.0,
            }),
        };
        EfStatus::Ok
    })
}

/// Upper edge of the window for `rho- v-^2`.
///
/// # Safety
/// Pointers must be valid; `gas` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_smallness_upper(gas: *const EfGas, p_minus: f64, p_plus: f64, out: *mut f64) -> EfStatus {
    guard(|| {
        non_null!(gas, out);
        *out = attempt!(smallness_upper(&(*gas).0, p_minus, p_plus));
        EfStatus::Ok
    })
}

/// # Safety
/// Pointers must be valid; `gas` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_estimate_threshold(
    gas: *const EfGas,
    rho_minus: f64,
    p_minus: f64,
    p_plus: f64,
    out: *mut EfWindow,
) -> EfStatus {
    guard(|| {
        non_null!(gas, out);
        let w = attempt!(estimate_threshold(&(*gas).0, rho_minus, p_minus, p_plus, &SearchConfig::default()));
        *out = EfWindow { upper: w.upper, v_est: w.v_est };
        EfStatus::Ok
    })
}

/// Normalises the data and searches the explicit fan family.
///
/// # Safety
/// Pointers must be valid; `gas` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_subsolution_find(
    gas: *const EfGas,
    left: *const EfState,
    right: *const EfState,
    out: *mut *mut EfSubsolution,
) -> EfStatus {
    guard(|| {
        non_null!(gas, left, right, out);
        *out = ptr::null_mut();
        let d = attempt!(data(gas, left, right));
        let n = attempt!(normalize(&d));
        let res = attempt!(find(&n.normalized, &d.gas, &SearchConfig::default()));
        *out = Box::into_raw(Box::new(EfSubsolution(res)));
        EfStatus::Ok
    })
}

/// # Safety
/// `sub` must come from [`ef_subsolution_find`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ef_subsolution_free(sub: *mut EfSubsolution) {
    if !sub.is_null() {
        drop(Box::from_raw(sub));
    }
}

/// Interface speeds `mu0 < mu1 < mu2` into `out[0..3]`.
///
/// # Safety
/// `out` must be valid for three writes; `sub` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_subsolution_speeds(sub: *const EfSubsolution, out: *mut f64) -> EfStatus {
    guard(|| {
        non_null!(sub, out);
        let mu = (*sub).0.subsolution.mu;
        ptr::copy_nonoverlapping(mu.as_ptr(), out, 3);
        EfStatus::Ok
    })
}

/// Interior region `index` (0 or 1) of the lifted quintuple.
///
/// # Safety
/// Pointers must be valid; `sub` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_subsolution_region(
    sub: *const EfSubsolution,
    index: usize,
    out: *mut EfRegion,
) -> EfStatus {
    guard(|| {
        non_null!(sub, out);
        let q = (*sub).0.subsolution.quintuple();
        let Some(r) = q.regions.get(index) else {
            return fail(EfStatus::Domain, format!("region index {index} out of range"));
        };
        *out = EfRegion { rho: r.rho, alpha: r.alpha, beta: r.beta, gamma: r.gamma, delta: r.delta, c: r.c, p: r.p };
        EfStatus::Ok
    })
}

/// Re-runs the full verification with tolerance `tol_eq`; writes the smallest
/// strict margin. Returns [`EfStatus::VerificationFailed`] if any check fails.
///
/// # Safety
/// Pointers must be valid; `sub` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_subsolution_verify(
    sub: *const EfSubsolution,
    gas: *const EfGas,
    tol_eq: f64,
    min_margin: *mut f64,
) -> EfStatus {
    guard(|| {
        non_null!(sub, gas, min_margin);
        let tol = Tolerances { eq: tol_eq, ..Tolerances::default() };
        let rep = attempt!(verify_subsolution(&(*sub).0.subsolution.quintuple(), &(*gas).0, &tol));
        *min_margin = rep.min_strict_margin();
        if rep.passed {
            EfStatus::Ok
        } else {
            fail(EfStatus::VerificationFailed, format!("failed: {}", rep.failures().join(", ")))
        }
    })
}

/// Fan subsolution plus trailing wave for any datum of cases 2 to 4.
///
/// # Safety
/// Pointers must be valid; `gas` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_patch_assemble(
    gas: *const EfGas,
    left: *const EfState,
    right: *const EfState,
    out: *mut *mut EfPatched,
) -> EfStatus {
    guard(|| {
        non_null!(gas, left, right, out);
        *out = ptr::null_mut();
        let d = attempt!(data(gas, left, right));
        let sol = attempt!(assemble(&d, &PatchConfig::default()));
        *out = Box::into_raw(Box::new(EfPatched(sol)));
        EfStatus::Ok
    })
}

/// # Safety
/// `p` must come from [`ef_patch_assemble`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ef_patched_free(p: *mut EfPatched) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// Pointers must be valid; `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_patched_case(p: *const EfPatched, out: *mut EfCase) -> EfStatus {
    guard(|| {
        non_null!(p, out);
        *out = case((*p).0.case);
        EfStatus::Ok
    })
}

/// `delta` used, 0 in case 2.
///
/// # Safety
/// Pointers must be valid; `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_patched_delta(p: *const EfPatched, out: *mut f64) -> EfStatus {
    guard(|| {
        non_null!(p, out);
        *out = (*p).0.delta;
        EfStatus::Ok
    })
}

/// Compatibility margin; NaN when there is no trailing wave.
///
/// # Safety
/// Pointers must be valid; `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_patched_compatibility(p: *const EfPatched, out: *mut f64) -> EfStatus {
    guard(|| {
        non_null!(p, out);
        *out = (*p).0.compatibility.unwrap_or(f64::NAN);
        EfStatus::Ok
    })
}

/// Auxiliary state in the normalised frame; `has_aux` is false in case 2.
///
/// # Safety
/// Pointers must be valid; `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_patched_aux_state(p: *const EfPatched, has_aux: *mut bool, out: *mut EfState) -> EfStatus {
    guard(|| {
        non_null!(p, has_aux, out);
        match (*p).0.aux_state {
            Some(s) => {
                *has_aux = true;
                *out = state(&s);
            }
            None => *has_aux = false,
        }
        EfStatus::Ok
    })
}
