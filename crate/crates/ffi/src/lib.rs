//! C ABI over `sidon-core`.
//!
//! Sets live behind an opaque `SidonSet` handle. Every fallible call returns
//! a [`SidonStatus`]; on failure the message is available from
//! [`sidon_last_error`] on the same thread until the next failing call.
//! Strings returned by the library are freed with [`sidon_string_free`], sets
//! with [`sidon_set_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sidon_core::format::{parse_set, serialize_set, ParseOptions};
use sidon_core::sidon::{self, BFamilyParams};
use sidon_core::{counting, CompositionMode, Error, GroundSet};

/// Status codes; the nonzero values match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidonStatus {
    Ok = 0,
    VerificationFailed = 1,
    BadInput = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidonMode {
    Difference = 0,
    Sum = 1,
    Product = 2,
    Ratio = 3,
}

impl From<SidonMode> for CompositionMode {
    fn from(m: SidonMode) -> Self {
        match m {
            SidonMode::Difference => CompositionMode::Difference,
            SidonMode::Sum => CompositionMode::Sum,
            SidonMode::Product => CompositionMode::Product,
            SidonMode::Ratio => CompositionMode::Ratio,
        }
    }
}

/// Opaque set handle.
pub struct SidonSet {
    inner: GroundSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> SidonStatus {
    let status = match e.exit_code() {
        1 => SidonStatus::VerificationFailed,
        3 => SidonStatus::BudgetExceeded,
        _ => SidonStatus::BadInput,
    };
    set_error(e.to_string());
    status
}

fn null(what: &str) -> SidonStatus {
    set_error(format!("null pointer: {what}"));
    SidonStatus::NullPointer
}

/// Run `f`, turning panics into `SidonStatus::Panic`.
fn guard(f: impl FnOnce() -> SidonStatus) -> SidonStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SidonStatus::Panic
        }
    }
}

fn boxed(set: GroundSet) -> *mut SidonSet {
    Box::into_raw(Box::new(SidonSet { inner: set }))
}

fn give_string(s: String, out: *mut *mut c_char) {
    let c = CString::new(s).expect("library strings have no nul bytes");
    // SAFETY: callers check `out` for null first.
    unsafe { *out = c.into_raw() };
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sidon_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a set from JSON or the text format.
///
/// # Safety
/// `text` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sidon_set_parse(text: *const c_char, out: *mut *mut SidonSet) -> SidonStatus {
    guard(|| {
        if text.is_null() {
            return null("text");
        }
        if out.is_null() {
            return null("out");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            set_error("input is not valid UTF-8".into());
            return SidonStatus::BadInput;
        };
        match parse_set(s, ParseOptions::default()) {
            Ok(set) => {
                *out = boxed(set);
                SidonStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// A set of integers; duplicates are merged.
///
/// # Safety
/// `values` must point to `len` readable integers (or be null with `len == 0`)
/// and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sidon_set_from_ints(values: *const i64, len: usize, out: *mut *mut SidonSet) -> SidonStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        if values.is_null() && len > 0 {
            return null("values");
        }
        let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(values, len) };
        *out = boxed(GroundSet::integers(slice.iter().copied()));
        SidonStatus::Ok
    })
}

/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sidon_set_free(set: *mut SidonSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sidon_set_len(set: *const SidonSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.len())
}

/// Copy up to `cap` integer elements into `buf`; `written` receives the count.
/// Fails with `BadInput` for sets in the plane.
///
/// # Safety
/// `set` must be a live handle, `buf` must have room for `cap` values and
/// `written` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sidon_set_ints(
    set: *const SidonSet,
    buf: *mut i64,
    cap: usize,
    written: *mut usize,
) -> SidonStatus {
    guard(|| {
        let Some(s) = set.as_ref() else { return null("set") };
        if written.is_null() || (buf.is_null() && cap > 0) {
            return null("buf/written");
        }
        let Some(ints) = s.inner.ints() else {
            set_error("set elements are not integers".into());
            return SidonStatus::BadInput;
        };
        let n = ints.len().min(cap);
        if n > 0 {
            ptr::copy_nonoverlapping(ints.as_ptr(), buf, n);
        }
        *written = n;
        SidonStatus::Ok
    })
}

/// Canonical JSON for the set.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sidon_set_to_json(set: *const SidonSet, out: *mut *mut c_char) -> SidonStatus {
    guard(|| {
        let Some(s) = set.as_ref() else { return null("set") };
        if out.is_null() {
            return null("out");
        }
        give_string(serialize_set(&s.inner), out);
        SidonStatus::Ok
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sidon_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `E_k` in the given mode, as a decimal string.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sidon_energy(
    set: *const SidonSet,
    k: u32,
    mode: SidonMode,
    out: *mut *mut c_char,
) -> SidonStatus {
    guard(|| {
        let Some(s) = set.as_ref() else { return null("set") };
        if out.is_null() {
            return null("out");
        }
        match counting::energy_k(&s.inner, k, mode.into()) {
            Ok(r) => {
                give_string(r.value.to_string(), out);
                SidonStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `E'_k` (all entries distinct) in the given mode, as a decimal string.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sidon_energy_prime(
    set: *const SidonSet,
    k: u32,
    mode: SidonMode,
    out: *mut *mut c_char,
) -> SidonStatus {
    guard(|| {
        let Some(s) = set.as_ref() else { return null("set") };
        if out.is_null() {
            return null("out");
        }
        match counting::energy_prime_k_with(&s.inner, k, mode.into(), Default::default()) {
            Ok(v) => {
                give_string(v.to_string(), out);
                SidonStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `Ok` when every non-identity count is at most `g`, `VerificationFailed`
/// otherwise (the witness is in the error message).
///
/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sidon_verify_multiplicity(set: *const SidonSet, g: u64, mode: SidonMode) -> SidonStatus {
    guard(|| {
        let Some(s) = set.as_ref() else { return null("set") };
        match sidon::verify_multiplicity(&s.inner, g, mode.into()) {
            Ok(None) => SidonStatus::Ok,
            Ok(Some(w)) => {
                set_error(format!("violation: {w:?}"));
                SidonStatus::VerificationFailed
            }
            Err(e) => fail(e),
        }
    })
}

/// Membership in `B°_k[g]`; same return convention as
/// [`sidon_verify_multiplicity`].
///
/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sidon_verify_bfamily(set: *const SidonSet, k: u32, g: u32) -> SidonStatus {
    guard(|| {
        let Some(s) = set.as_ref() else { return null("set") };
        let params = match BFamilyParams::new(k, g) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        match sidon::verify_bfamily(&s.inner, params) {
            Ok(None) => SidonStatus::Ok,
            Ok(Some(w)) => {
                set_error(format!("violation: {w:?}"));
                SidonStatus::VerificationFailed
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact `Sid_k` by exhaustive search; `witness` may be null.
///
/// # Safety
/// `set` must be a live handle, `size` a valid pointer, `witness` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sidon_sid_exact(
    set: *const SidonSet,
    k: u32,
    mode: SidonMode,
    cap: usize,
    size: *mut usize,
    witness: *mut *mut SidonSet,
) -> SidonStatus {
    guard(|| {
        let Some(s) = set.as_ref() else { return null("set") };
        if size.is_null() {
            return null("size");
        }
        match sidon::sid_k_exact(&s.inner, k, mode.into(), cap) {
            Ok(r) => {
                *size = r.size;
                if !witness.is_null() {
                    *witness = boxed(r.witness);
                }
                SidonStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Randomized extraction; `out` receives a subset whose non-identity counts
/// are at most `bound` (3k-3 for differences, 2k-2 for sums and products).
///
/// # Safety
/// `set` must be a live handle; `out` and `bound` valid pointers (`bound`
/// may be null).
#[no_mangle]
pub unsafe extern "C" fn sidon_extract(
    set: *const SidonSet,
    k: u32,
    mode: SidonMode,
    seed: u64,
    trials: u64,
    out: *mut *mut SidonSet,
    bound: *mut u64,
) -> SidonStatus {
    guard(|| {
        let Some(s) = set.as_ref() else { return null("set") };
        if out.is_null() {
            return null("out");
        }
        match sidon::extract_random(&s.inner, k, mode.into(), seed, trials) {
            Ok(r) if r.verified => {
                if !bound.is_null() {
                    *bound = r.certified_bound;
                }
                *out = boxed(r.subset);
                SidonStatus::Ok
            }
            Ok(_) => {
                set_error("extracted subset failed verification".into());
                SidonStatus::VerificationFailed
            }
            Err(e) => fail(e),
        }
    })
}

/// Run the `sidon` command line with `argc` arguments (excluding the program
/// name) and return its exit code.
///
/// # Safety
/// `argv` must point to `argc` valid nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn sidon_cli_run(argc: usize, argv: *const *const c_char) -> i32 {
    if argv.is_null() && argc > 0 {
        null("argv");
        return SidonStatus::NullPointer as i32;
    }
    let mut args = vec!["sidon".to_string()];
    for i in 0..argc {
        let p = *argv.add(i);
        if p.is_null() {
            null("argv[i]");
            return SidonStatus::NullPointer as i32;
        }
        args.push(CStr::from_ptr(p).to_string_lossy().into_owned());
    }
    catch_unwind(|| sidon_core::cli::run(args)).unwrap_or(SidonStatus::Panic as i32)
}
