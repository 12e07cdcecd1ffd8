//! C interface to the group analysis and the ideal-count sieve.
//!
//! Every function returns an [`ImStatus`] and writes results through out
//! pointers. On failure a message is available from [`im_last_error`] until
//! the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use idealmoments::characters::{compute_delta, solve_alpha_beta, CharError, DeltaMode as CoreMode, SubconvexityConfig};
use idealmoments::group::{preset, GroupInvariants, Preset, PresetName};
use idealmoments::moments::{partial_sums, sieve_a_values, MomentError};
use idealmoments::report::{analyze_group, GroupRequest, ThetaOverrides};
use idealmoments::splitting::{
    builtin_overrides, splitting_type, BadPrimeOverride, FieldPresentation, PrimeSplittingCache, SplittingError,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    MissingOverride = 5,
    Assumption = 6,
    Overflow = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImDeltaMode {
    Direct = 0,
    Dedekind = 1,
}

/// Integers attached to a presentation and a choice of `N′`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ImInvariants {
    /// `|G|`
    pub n: usize,
    pub n_prime: usize,
    pub n_dprime: usize,
    pub h: usize,
    /// Common `|N″_h|`, or 0 when the sizes differ or `H` is trivial.
    pub n_h_dprime: usize,
    pub normality_holds: bool,
}

/// A group preset with a chosen `N′`.
pub struct ImGroup {
    preset: Preset,
    n_prime: String,
    invariants: GroupInvariants,
}

/// A number field with its bad-prime overrides.
pub struct ImField {
    field: FieldPresentation,
    overrides: BadPrimeOverride,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: ImStatus, msg: impl Into<String>) -> ImStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> ImStatus) -> ImStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(ImStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, ImStatus> {
    if s.is_null() {
        return Err(fail(ImStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(ImStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn char_status(e: &CharError) -> ImStatus {
    match e {
        CharError::AssumptionI | CharError::AssumptionIII { .. } | CharError::NormalityFails => ImStatus::Assumption,
        CharError::Overflow => ImStatus::Overflow,
        _ => ImStatus::Invalid,
    }
}

fn splitting_status(e: &SplittingError) -> ImStatus {
    match e {
        SplittingError::Parse(_) | SplittingError::NotMonic | SplittingError::Format(_) => ImStatus::Parse,
        SplittingError::MissingOverride(_) => ImStatus::MissingOverride,
        _ => ImStatus::Invalid,
    }
}

macro_rules! null_check {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(ImStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message for the last failure on this thread, or null. Owned by the
/// library; valid until the next failing call.
#[no_mangle]
pub extern "C" fn im_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn im_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a preset such as `"dihedral:4"` or `"a4"`; `n_prime` may be null
/// for the trivial subgroup.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn im_group_new(name: *const c_char, n_prime: *const c_char, out: *mut *mut ImGroup) -> ImStatus {
    guard(|| {
        null_check!(out);
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let label = if n_prime.is_null() {
            "trivial"
        } else {
            match read_str(n_prime, "n_prime") {
                Ok(s) => s,
                Err(s) => return s,
            }
        };
        let parsed: PresetName = match name.parse() {
            Ok(p) => p,
            Err(e) => return fail(ImStatus::Parse, e.to_string()),
        };
        let built = match preset(&parsed) {
            Ok(p) => p,
            Err(e) => return fail(ImStatus::Invalid, e.to_string()),
        };
        let invariants = match built.n_prime(label).and_then(|c| built.presentation.invariants(&c.subgroup)) {
            Ok(inv) => inv,
            Err(e) => return fail(ImStatus::Invalid, e.to_string()),
        };
        let handle = ImGroup { preset: built, n_prime: label.to_string(), invariants };
        *out = Box::into_raw(Box::new(handle));
        ImStatus::Ok
    })
}

/// # Safety
/// `g` must be null or a handle from [`im_group_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn im_group_free(g: *mut ImGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn im_group_invariants(g: *const ImGroup, out: *mut ImInvariants) -> ImStatus {
    guard(|| {
        null_check!(g, out);
        let inv = &(*g).invariants;
        *out = ImInvariants {
            n: inv.n,
            n_prime: inv.n_prime,
            n_dprime: inv.n_dprime,
            h: inv.h,
            n_h_dprime: if inv.h <= 1 { 0 } else { inv.common_n_h_dprime().unwrap_or(0) },
            normality_holds: inv.quotient_action_defined,
        };
        ImStatus::Ok
    })
}

/// `α(l)` and `β(l)`; `IM_STATUS_ASSUMPTION` when (I) or (III) fails.
///
/// # Safety
/// `g` must be a live handle; `alpha` and `beta` writable.
#[no_mangle]
pub unsafe extern "C" fn im_group_alpha_beta(g: *const ImGroup, l: u32, alpha: *mut u64, beta: *mut u64) -> ImStatus {
    guard(|| {
        null_check!(g, alpha, beta);
        match solve_alpha_beta(&(*g).invariants, l) {
            Ok(p) => match (u64::try_from(p.alpha), u64::try_from(p.beta)) {
                (Ok(a), Ok(b)) => {
                    *alpha = a;
                    *beta = b;
                    ImStatus::Ok
                }
                _ => fail(ImStatus::Overflow, "α or β exceeds 64 bits"),
            },
            Err(e) => fail(char_status(&e), e.to_string()),
        }
    })
}

/// `δ(l)` with default exponents as a reduced fraction.
///
/// # Safety
/// `g` must be a live handle; `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn im_group_delta(
    g: *const ImGroup,
    l: u32,
    mode: ImDeltaMode,
    num: *mut i64,
    den: *mut i64,
) -> ImStatus {
    guard(|| {
        null_check!(g, num, den);
        let inv = &(*g).invariants;
        let mode = match mode {
            ImDeltaMode::Direct => CoreMode::Direct,
            ImDeltaMode::Dedekind => CoreMode::Dedekind,
        };
        let result = solve_alpha_beta(inv, l)
            .and_then(|p| compute_delta(&p, &SubconvexityConfig::defaults(inv, mode)));
        match result {
            Ok(r) => match (i64::try_from(*r.delta.numer()), i64::try_from(*r.delta.denom())) {
                (Ok(a), Ok(b)) => {
                    *num = a;
                    *den = b;
                    ImStatus::Ok
                }
                _ => fail(ImStatus::Overflow, "δ does not fit in 64 bits"),
            },
            Err(e) => fail(char_status(&e), e.to_string()),
        }
    })
}

/// Full JSON group report for the exponents `ls[0..n]`. Free the result
/// with [`im_string_free`].
///
/// # Safety
/// `g` must be a live handle, `ls` readable for `n` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn im_group_report_json(
    g: *const ImGroup,
    ls: *const u32,
    n: usize,
    out: *mut *mut c_char,
) -> ImStatus {
    guard(|| {
        null_check!(g, ls, out);
        let ls = std::slice::from_raw_parts(ls, n);
        let g = &*g;
        let req = GroupRequest {
            preset: &g.preset,
            n_prime: &g.n_prime,
            l_values: ls,
            declared_ii: true,
            mode: CoreMode::Direct,
            theta: ThetaOverrides::default(),
        };
        match analyze_group(&req) {
            Ok(report) => {
                let json = serde_json::to_string(&report).expect("report serializes");
                *out = CString::new(json).expect("no NUL in JSON").into_raw();
                ImStatus::Ok
            }
            Err(e) => fail(char_status(&e), e.to_string()),
        }
    })
}

/// Parses a monic irreducible polynomial. `overrides` is the override file
/// text, or null for the shipped overrides (none for unknown fields).
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn im_field_new(poly: *const c_char, overrides: *const c_char, out: *mut *mut ImField) -> ImStatus {
    guard(|| {
        null_check!(out);
        let poly = match read_str(poly, "poly") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let field = match FieldPresentation::parse(poly) {
            Ok(f) => f,
            Err(e) => return fail(splitting_status(&e), e.to_string()),
        };
        let ov = if overrides.is_null() {
            builtin_overrides(field.poly()).unwrap_or_default()
        } else {
            let text = match read_str(overrides, "overrides") {
                Ok(s) => s,
                Err(s) => return s,
            };
            match BadPrimeOverride::parse(text) {
                Ok(o) => o,
                Err(e) => return fail(ImStatus::Parse, e.to_string()),
            }
        };
        if let Err(e) = ov.validate(&field) {
            return fail(ImStatus::Invalid, e.to_string());
        }
        *out = Box::into_raw(Box::new(ImField { field, overrides: ov }));
        ImStatus::Ok
    })
}

/// # Safety
/// `f` must be null or a handle from [`im_field_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn im_field_free(f: *mut ImField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle and `degree` writable.
#[no_mangle]
pub unsafe extern "C" fn im_field_degree(f: *const ImField, degree: *mut usize) -> ImStatus {
    guard(|| {
        null_check!(f, degree);
        *degree = (*f).field.degree();
        ImStatus::Ok
    })
}

/// Residue degrees of the primes above `p`, sorted. `len` receives the
/// count even when `cap` is too small.
///
/// # Safety
/// `f` must be a live handle, `degrees` writable for `cap` values, `len`
/// and `ramified` writable.
#[no_mangle]
pub unsafe extern "C" fn im_field_splitting_type(
    f: *const ImField,
    p: u64,
    degrees: *mut u32,
    cap: usize,
    len: *mut usize,
    ramified: *mut bool,
) -> ImStatus {
    guard(|| {
        null_check!(f, degrees, len, ramified);
        if !idealmoments::primes::is_prime(p) {
            return fail(ImStatus::Invalid, format!("{p} is not prime"));
        }
        let f = &*f;
        match splitting_type(&f.field, p, &f.overrides) {
            Ok(st) => {
                *len = st.residue_degrees.len();
                *ramified = st.ramified;
                if st.residue_degrees.len() > cap {
                    return fail(ImStatus::BufferTooSmall, format!("{} degrees, capacity {cap}", st.residue_degrees.len()));
                }
                ptr::copy_nonoverlapping(st.residue_degrees.as_ptr(), degrees, st.residue_degrees.len());
                ImStatus::Ok
            }
            Err(e) => fail(splitting_status(&e), e.to_string()),
        }
    })
}

/// `S_l(X_j) = Σ_{m ≤ X_j} a(m)^l` at sorted checkpoints `xs[0..n]`, all at
/// most `x`.
///
/// # Safety
/// `f` must be a live handle; `xs` readable and `sums` writable for `n` values.
#[no_mangle]
pub unsafe extern "C" fn im_field_moment_sums(
    f: *const ImField,
    x: u64,
    l: u32,
    xs: *const u64,
    n: usize,
    sums: *mut u64,
) -> ImStatus {
    guard(|| {
        null_check!(f, xs, sums);
        let f = &*f;
        let checkpoints = std::slice::from_raw_parts(xs, n);
        let cache = match PrimeSplittingCache::build(&f.field, x, &f.overrides) {
            Ok(c) => c,
            Err(e) => return fail(splitting_status(&e), e.to_string()),
        };
        let series = sieve_a_values(&cache, x).and_then(|t| partial_sums(&t, l, checkpoints));
        match series {
            Ok(s) => {
                let out = std::slice::from_raw_parts_mut(sums, n);
                for (slot, &(_, v)) in out.iter_mut().zip(&s.checkpoints) {
                    match u64::try_from(v) {
                        Ok(v) => *slot = v,
                        Err(_) => return fail(ImStatus::Overflow, "moment sum exceeds 64 bits"),
                    }
                }
                ImStatus::Ok
            }
            Err(MomentError::SumOverflow { .. }) => fail(ImStatus::Overflow, "moment sum overflow"),
            Err(e) => fail(ImStatus::Invalid, e.to_string()),
        }
    })
}
