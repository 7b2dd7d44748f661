//! C interface to `setalg`.
//!
//! Set functions and witness pairs are handed out as opaque heap handles and
//! must be released with the matching `*_free` function. Every fallible call
//! returns a [`SetalgStatus`]; on failure a message is available from
//! [`setalg_last_error`] until the next failing call on the same thread.
//! Subsets cross the boundary as `uint64_t` bit masks. Strings returned through
//! `char **` are owned by the caller and freed with [`setalg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use setalg::witness::{self, WitnessPair};
use setalg::{Error, Rational, SetFamily, SetFunction, Subset};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetalgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GroundMismatch = 3,
    GroundTooLarge = 4,
    DegreeExceedsGround = 5,
    NotZeroDivisor = 6,
    NotFound = 7,
    NoTransversal = 8,
    Panic = 9,
}

/// A finitely supported map from `degree`-subsets of a ground set to rationals.
pub struct SetalgFunction(SetFunction);

/// A pair `(f, g)` of nonzero functions with `fg = 0`.
pub struct SetalgPair(WitnessPair);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

fn status_of(e: &Error) -> SetalgStatus {
    set_error(e.to_string());
    match e {
        Error::GroundMismatch { .. } => SetalgStatus::GroundMismatch,
        Error::GroundTooLarge(_) => SetalgStatus::GroundTooLarge,
        Error::DegreeExceedsGround { .. } => SetalgStatus::DegreeExceedsGround,
        Error::NotZeroDivisorPair(_) => SetalgStatus::NotZeroDivisor,
        Error::NoTransversal => SetalgStatus::NoTransversal,
        _ => SetalgStatus::InvalidArgument,
    }
}

fn guard(body: impl FnOnce() -> Result<(), SetalgStatus>) -> SetalgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SetalgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            SetalgStatus::Panic
        }
    }
}

fn lift<T>(r: setalg::Result<T>) -> Result<T, SetalgStatus> {
    r.map_err(|e| status_of(&e))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, SetalgStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(SetalgStatus::NullPointer);
    }
    Ok(&*p)
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> Result<&'a mut T, SetalgStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(SetalgStatus::NullPointer);
    }
    Ok(&mut *p)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), SetalgStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(SetalgStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn ratio(num: i64, den: i64) -> Result<Rational, SetalgStatus> {
    if den == 0 {
        set_error("zero denominator");
        return Err(SetalgStatus::InvalidArgument);
    }
    Ok(Rational::new(num.into(), den.into()))
}

/// Message describing the last failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn setalg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn setalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The zero function of the given degree on `ground_size ≤ 64` points.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_function_new(
    ground_size: usize,
    degree: usize,
    out: *mut *mut SetalgFunction,
) -> SetalgStatus {
    guard(|| {
        if ground_size > setalg::subset::MAX_GROUND {
            return Err(status_of(&Error::GroundTooLarge(ground_size)));
        }
        let f = lift(SetFunction::zero(ground_size, degree))?;
        write_out(out, boxed(SetalgFunction(f)))
    })
}

/// The function `e`, equal to 1 on every singleton.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_function_e(ground_size: usize, out: *mut *mut SetalgFunction) -> SetalgStatus {
    guard(|| {
        if ground_size > setalg::subset::MAX_GROUND {
            return Err(status_of(&Error::GroundTooLarge(ground_size)));
        }
        let f = lift(SetFunction::e(ground_size))?;
        write_out(out, boxed(SetalgFunction(f)))
    })
}

/// Sets `f(set) = num/den`.
///
/// # Safety
/// `f` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn setalg_function_set(f: *mut SetalgFunction, set: u64, num: i64, den: i64) -> SetalgStatus {
    guard(|| {
        let f = deref_mut(f)?;
        let v = ratio(num, den)?;
        lift(f.0.set(Subset::from_bits(set), v))
    })
}

/// Writes `f(set)` as a decimal string `"num/den"` (or `"num"`).
///
/// # Safety
/// `f` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_function_value(
    f: *const SetalgFunction,
    set: u64,
    out: *mut *mut c_char,
) -> SetalgStatus {
    guard(|| {
        let f = deref(f)?;
        write_out(out, c_string(f.0.value(Subset::from_bits(set)).to_string()))
    })
}

/// Number of sets where `f` is nonzero; 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn setalg_function_support_len(f: *const SetalgFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.support_len())
}

/// Degree of `f`; 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn setalg_function_degree(f: *const SetalgFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.degree())
}

/// Serializes `f` as `{ground_size, degree, terms:[{set, num, den}]}`.
///
/// # Safety
/// `f` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_function_to_json(f: *const SetalgFunction, out: *mut *mut c_char) -> SetalgStatus {
    guard(|| {
        let f = deref(f)?;
        write_out(out, c_string(serde_json::to_string(&f.0).expect("serializes")))
    })
}

/// Parses the JSON produced by [`setalg_function_to_json`].
///
/// # Safety
/// `json` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_function_from_json(json: *const c_char, out: *mut *mut SetalgFunction) -> SetalgStatus {
    guard(|| {
        if json.is_null() {
            set_error("null pointer argument");
            return Err(SetalgStatus::NullPointer);
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| {
            set_error("input is not UTF-8");
            SetalgStatus::InvalidArgument
        })?;
        let f: SetFunction = serde_json::from_str(text).map_err(|e| {
            set_error(e.to_string());
            SetalgStatus::InvalidArgument
        })?;
        write_out(out, boxed(SetalgFunction(f)))
    })
}

/// The product `fg`.
///
/// # Safety
/// `f` and `g` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_product(
    f: *const SetalgFunction,
    g: *const SetalgFunction,
    out: *mut *mut SetalgFunction,
) -> SetalgStatus {
    guard(|| {
        let (f, g) = (deref(f)?, deref(g)?);
        let fg = lift(setalg::product(&f.0, &g.0))?;
        write_out(out, boxed(SetalgFunction(fg)))
    })
}

/// A nonzero `g` of degree `n` with `fg = 0`. Returns `NOT_FOUND` and writes
/// null when multiplication by `f` is injective in degree `n`.
///
/// # Safety
/// `f` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_cofactor(
    f: *const SetalgFunction,
    n: usize,
    out: *mut *mut SetalgFunction,
) -> SetalgStatus {
    guard(|| {
        let f = deref(f)?;
        match lift(setalg::cofactor(&f.0, n))? {
            Some(g) => write_out(out, boxed(SetalgFunction(g))),
            None => {
                write_out(out, ptr::null_mut())?;
                set_error("multiplication is injective in this degree");
                Err(SetalgStatus::NotFound)
            }
        }
    })
}

/// Releases a function handle. Null is ignored.
///
/// # Safety
/// `f` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn setalg_function_free(f: *mut SetalgFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Minimum transversal of the family given by `len` bit masks on
/// `ground_size` points. Writes its size and a witness mask.
///
/// # Safety
/// `sets` must point to `len` masks (or be null when `len = 0`); outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn setalg_tau(
    ground_size: usize,
    sets: *const u64,
    len: usize,
    tau_out: *mut usize,
    witness_out: *mut u64,
) -> SetalgStatus {
    guard(|| {
        let masks: &[u64] = if len == 0 {
            &[]
        } else {
            if sets.is_null() {
                set_error("null pointer argument");
                return Err(SetalgStatus::NullPointer);
            }
            std::slice::from_raw_parts(sets, len)
        };
        if ground_size > setalg::subset::MAX_GROUND {
            return Err(status_of(&Error::GroundTooLarge(ground_size)));
        }
        let family = lift(SetFamily::from_sets(ground_size, masks.iter().map(|&m| Subset::from_bits(m))))?;
        let t = lift(setalg::tau(&family))?;
        write_out(tau_out, t.size)?;
        write_out(witness_out, t.witness.bits())
    })
}

/// Checks `f ≠ 0`, `g ≠ 0`, `fg = 0` and builds a pair from copies of `f` and `g`.
///
/// # Safety
/// `f`, `g` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_pair_new(
    f: *const SetalgFunction,
    g: *const SetalgFunction,
    out: *mut *mut SetalgPair,
) -> SetalgStatus {
    guard(|| {
        let (f, g) = (deref(f)?, deref(g)?);
        let pair = lift(WitnessPair::new(f.0.clone(), g.0.clone()))?;
        write_out(out, boxed(SetalgPair(pair)))
    })
}

/// The parity gadget for `τ(1, n) = 2n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_gadget_tau1n(n: usize, out: *mut *mut SetalgPair) -> SetalgStatus {
    guard(|| write_out(out, boxed(SetalgPair(lift(witness::gadget_tau1n(n))?))))
}

/// The block gadget reaching `τ = (m+1)(n+1) − 2`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_gadget_lower(m: usize, n: usize, out: *mut *mut SetalgPair) -> SetalgStatus {
    guard(|| write_out(out, boxed(SetalgPair(lift(witness::gadget_lower(m, n))?))))
}

/// The two-squares pair on 8 points.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_two_squares(out: *mut *mut SetalgPair) -> SetalgStatus {
    guard(|| write_out(out, boxed(SetalgPair(witness::two_squares()))))
}

/// Copies of the two components of a pair.
///
/// # Safety
/// `pair` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_pair_components(
    pair: *const SetalgPair,
    f_out: *mut *mut SetalgFunction,
    g_out: *mut *mut SetalgFunction,
) -> SetalgStatus {
    guard(|| {
        let p = deref(pair)?;
        if f_out.is_null() || g_out.is_null() {
            set_error("null output pointer");
            return Err(SetalgStatus::NullPointer);
        }
        write_out(f_out, boxed(SetalgFunction(p.0.f().clone())))?;
        write_out(g_out, boxed(SetalgFunction(p.0.g().clone())))
    })
}

/// Re-verifies the pair and writes `τ(supp f ∪ supp g)` with a witness mask.
///
/// # Safety
/// `pair` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_pair_verify(
    pair: *const SetalgPair,
    tau_out: *mut usize,
    witness_out: *mut u64,
) -> SetalgStatus {
    guard(|| {
        let p = deref(pair)?;
        let cert = lift(witness::verify(&p.0))?;
        write_out(tau_out, cert.tau_value)?;
        write_out(witness_out, cert.tau_witness.bits())
    })
}

/// Certificate JSON `{f, g, tau, tau_witness, formula_expected, match}`.
/// `expected_tau < 0` means no formula value.
///
/// # Safety
/// `pair` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_pair_certificate_json(
    pair: *const SetalgPair,
    expected_tau: i64,
    out: *mut *mut c_char,
) -> SetalgStatus {
    guard(|| {
        let p = deref(pair)?;
        let mut cert = lift(witness::verify(&p.0))?;
        if expected_tau >= 0 {
            cert = cert.expecting(expected_tau as usize);
        }
        write_out(out, c_string(serde_json::to_string(&cert).expect("serializes")))
    })
}

/// Releases a pair handle. Null is ignored.
///
/// # Safety
/// `pair` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn setalg_pair_free(pair: *mut SetalgPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// The symbolic upper bound on `τ(m, n)`, e.g. `2·(R²_{5^30}(4)+2)`, UTF-8.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn setalg_bound_expr(m: usize, n: usize, out: *mut *mut c_char) -> SetalgStatus {
    guard(|| write_out(out, c_string(setalg::bound::tau_upper_expr(m, n).to_string())))
}
