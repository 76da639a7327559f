//! C ABI for orbitkit.
//!
//! Conventions:
//!
//! * Every fallible function returns an [`OkStatus`]; on failure a message
//!   is available from [`ok_last_error`] on the same thread.
//! * Objects are opaque handles created by `*_parse`/`*_build` and released
//!   with the matching `*_free`. Strings returned through `char **` out
//!   parameters are owned by the caller and released with [`ok_string_free`].
//! * Vectors are `int64_t` arrays; matrices are row-major, and vectors act
//!   on the left (`x·A`).
//! * Panics never cross the boundary; they are reported as
//!   `OK_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orbitkit::stallings::StallingsGraph;
use orbitkit::whitehead::{aut_orbit_decide, is_primitive};
use orbitkit::words::{conjugacy_decide, Word};
use orbitkit::zlattice::{sod_gl, tcp_abelian, IntMatrix, IntVector, Lattice};
use orbitkit::{Decision, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Dimension = 4,
    InvalidArgument = 5,
    Capacity = 6,
    /// A result does not fit the fixed-width output type.
    Overflow = 7,
    Internal = 8,
}

/// Three-valued answer of a decider.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OkVerdict {
    No = 0,
    Yes = 1,
    Unknown = 2,
}

/// Opaque free-group element.
pub struct OkWord(Word);

/// Opaque finitely generated subgroup of a free group.
pub struct OkSubgroup(StallingsGraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(OkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => OkStatus::Parse,
            Error::RankMismatch { .. } | Error::Dimension(_) => OkStatus::Dimension,
            Error::NotUnimodular(_) | Error::Invalid(_) => OkStatus::InvalidArgument,
            Error::Capacity(_) => OkStatus::Capacity,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn set_error(msg: Option<String>) {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = msg.map(|m| CString::new(m.replace('\0', " ")).unwrap_or_default());
    });
}

fn guard(f: impl FnOnce() -> Outcome) -> OkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            OkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal error".into()));
            OkStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(OkStatus::NullPointer, format!("{what} is null"))
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn as_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(OkStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

unsafe fn int_slice<'a>(p: *const i64, len: usize, what: &str) -> Result<&'a [i64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn int_matrix(p: *const i64, rows: usize, cols: usize, what: &str) -> Result<IntMatrix, Failure> {
    let flat = int_slice(p, rows * cols, what)?;
    if rows == 0 {
        return Ok(IntMatrix::zeros(0, cols));
    }
    let rows: Vec<&[i64]> = flat.chunks(cols.max(1)).collect();
    Ok(IntMatrix::from_i64(&rows))
}

fn verdict<W>(d: &Decision<W>) -> OkVerdict {
    match d {
        Decision::Yes(_) => OkVerdict::Yes,
        Decision::No(_) => OkVerdict::No,
        Decision::Unknown { .. } => OkVerdict::Unknown,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ok_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message describing the last failure on this thread, or NULL after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ok_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ok_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a word such as `"abA"` in the free group of the given rank.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ok_word_parse(text: *const c_char, rank: usize, out: *mut *mut OkWord) -> OkStatus {
    guard(|| {
        let w = Word::parse(as_str(text, "text")?, rank)?;
        write(out, Box::into_raw(Box::new(OkWord(w))), "out")
    })
}

/// Releases a word. NULL is ignored.
///
/// # Safety
/// `w` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ok_word_free(w: *mut OkWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Writes the reduced spelling of `w` (`"1"` for the identity).
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ok_word_to_string(w: *const OkWord, out: *mut *mut c_char) -> OkStatus {
    guard(|| {
        let w = as_ref(w, "word")?;
        write(out, c_string(w.0.to_string()), "out")
    })
}

/// Writes the reduced length of `w`.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ok_word_length(w: *const OkWord, out: *mut usize) -> OkStatus {
    guard(|| write(out, as_ref(w, "word")?.0.len(), "out"))
}

/// Writes the reduced product `u·v` as a new handle.
///
/// # Safety
/// `u`, `v` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ok_word_multiply(u: *const OkWord, v: *const OkWord, out: *mut *mut OkWord) -> OkStatus {
    guard(|| {
        let p = as_ref(u, "u")?.0.concat(&as_ref(v, "v")?.0)?;
        write(out, Box::into_raw(Box::new(OkWord(p))), "out")
    })
}

/// Decides whether `x⁻¹·u·x = v` for some `x`. On yes, and if `witness` is
/// not NULL, a new handle holding `x` is written there (else NULL).
///
/// # Safety
/// `u`, `v` must be live handles, `result` writable, `witness` NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ok_conjugacy(
    u: *const OkWord,
    v: *const OkWord,
    result: *mut OkVerdict,
    witness: *mut *mut OkWord,
) -> OkStatus {
    guard(|| {
        let d = conjugacy_decide(&as_ref(u, "u")?.0, &as_ref(v, "v")?.0)?;
        write(result, verdict(&d), "result")?;
        if !witness.is_null() {
            let w = d.into_witness().map_or(ptr::null_mut(), |x| Box::into_raw(Box::new(OkWord(x))));
            witness.write(w);
        }
        Ok(())
    })
}

/// Decides whether some automorphism maps `u` to `v`. On yes, and if
/// `certificate_json` is not NULL, the Whitehead move sequence is written
/// there as JSON (else NULL).
///
/// # Safety
/// `u`, `v` must be live handles, `result` writable, `certificate_json`
/// NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ok_aut_orbit(
    u: *const OkWord,
    v: *const OkWord,
    result: *mut OkVerdict,
    certificate_json: *mut *mut c_char,
) -> OkStatus {
    guard(|| {
        let d = aut_orbit_decide(&as_ref(u, "u")?.0, &as_ref(v, "v")?.0)?;
        write(result, verdict(&d), "result")?;
        if !certificate_json.is_null() {
            let text = d.witness().map_or(ptr::null_mut(), |m| c_string(serde_json::to_string(m).expect("moves serialize")));
            certificate_json.write(text);
        }
        Ok(())
    })
}

/// Writes whether `w` is part of a free basis.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ok_is_primitive(w: *const OkWord, out: *mut bool) -> OkStatus {
    guard(|| {
        let p = is_primitive(&as_ref(w, "word")?.0)?;
        write(out, p, "out")
    })
}

/// Builds the subgroup generated by `count` words of the given rank.
///
/// # Safety
/// `gens` must point to `count` live handles (or be NULL with `count = 0`)
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ok_subgroup_build(
    rank: usize,
    gens: *const *const OkWord,
    count: usize,
    out: *mut *mut OkSubgroup,
) -> OkStatus {
    guard(|| {
        let handles: &[*const OkWord] = if count == 0 {
            &[]
        } else if gens.is_null() {
            return Err(null("gens"));
        } else {
            std::slice::from_raw_parts(gens, count)
        };
        let words = handles.iter().map(|&h| as_ref(h, "generator").map(|w| w.0.clone())).collect::<Result<Vec<_>, _>>()?;
        let g = StallingsGraph::build(rank, &words)?;
        write(out, Box::into_raw(Box::new(OkSubgroup(g))), "out")
    })
}

/// Releases a subgroup. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ok_subgroup_free(s: *mut OkSubgroup) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Writes whether `w` lies in the subgroup.
///
/// # Safety
/// `s`, `w` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ok_subgroup_contains(s: *const OkSubgroup, w: *const OkWord, out: *mut bool) -> OkStatus {
    guard(|| {
        let s = as_ref(s, "subgroup")?;
        let w = as_ref(w, "word")?;
        let d = s.0.member(&w.0)?;
        write(out, d.is_yes(), "out")
    })
}

/// Writes a free basis of the subgroup as a JSON list of words.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ok_subgroup_basis_json(s: *const OkSubgroup, out: *mut *mut c_char) -> OkStatus {
    guard(|| {
        let basis: Vec<String> = as_ref(s, "subgroup")?.0.basis().iter().map(ToString::to_string).collect();
        write(out, c_string(serde_json::to_string(&basis).expect("strings serialize")), "out")
    })
}

/// Decides whether `x·α` lies in the lattice spanned by the `rows` rows of
/// `gens` (row-major, `rows × n`) for some `α ∈ GL_n(Z)`. On yes, and if
/// `witness_json` is not NULL, `{"alpha", "image", "coefficients"}` is
/// written there (else NULL).
///
/// # Safety
/// `x` must hold `n` values, `gens` `rows·n` values, `result` must be
/// writable and `witness_json` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ok_sod_gl(
    x: *const i64,
    n: usize,
    gens: *const i64,
    rows: usize,
    result: *mut OkVerdict,
    witness_json: *mut *mut c_char,
) -> OkStatus {
    guard(|| {
        let x = IntVector::from_i64(int_slice(x, n, "x")?);
        let lattice = Lattice::new(int_matrix(gens, rows, n, "gens")?);
        let d = sod_gl(&x, &lattice)?;
        write(result, verdict(&d), "result")?;
        if !witness_json.is_null() {
            let text = d.witness().map_or(ptr::null_mut(), |w| c_string(serde_json::to_string(w).expect("witness serializes")));
            witness_json.write(text);
        }
        Ok(())
    })
}

/// Twisted conjugacy in `Z^n`: decides whether `x·(I − A) = v − u` has an
/// integer solution. On yes, and if `x_out` is not NULL, the solution is
/// written to its `n` entries; `OK_STATUS_OVERFLOW` is returned if an entry
/// does not fit in `int64_t`.
///
/// # Safety
/// `a` must hold `n·n` values, `u`, `v` `n` values each, `result` must be
/// writable and `x_out` NULL or writable for `n` values.
#[no_mangle]
pub unsafe extern "C" fn ok_tcp(
    a: *const i64,
    n: usize,
    u: *const i64,
    v: *const i64,
    result: *mut OkVerdict,
    x_out: *mut i64,
) -> OkStatus {
    guard(|| {
        let a = int_matrix(a, n, n, "a")?;
        let u = IntVector::from_i64(int_slice(u, n, "u")?);
        let v = IntVector::from_i64(int_slice(v, n, "v")?);
        let d = tcp_abelian(&a, &u, &v)?;
        if let (Decision::Yes(x), false) = (&d, x_out.is_null()) {
            let fixed: Vec<i64> = x
                .iter()
                .map(i64::try_from)
                .collect::<Result<_, _>>()
                .map_err(|_| Failure(OkStatus::Overflow, "solution entry exceeds int64_t".into()))?;
            std::slice::from_raw_parts_mut(x_out, n).copy_from_slice(&fixed);
        }
        write(result, verdict(&d), "result")
    })
}

/// Runs one command-line invocation in-process. `argv` holds `argc`
/// arguments *without* the program name, e.g. `{"fg-conj", "--rank", "2",
/// "abA", "b"}`. The exit code follows the command-line tool (0 decided,
/// 1 verification failed, 2 unknown, 3 input error, 4 capacity); stdout and
/// stderr are returned as new strings when the pointers are not NULL.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; the out pointers must be
/// writable or NULL (`exit_code` is required).
#[no_mangle]
pub unsafe extern "C" fn ok_run(
    argc: usize,
    argv: *const *const c_char,
    exit_code: *mut i32,
    stdout_out: *mut *mut c_char,
    stderr_out: *mut *mut c_char,
) -> OkStatus {
    guard(|| {
        let raw: &[*const c_char] = if argc == 0 {
            &[]
        } else if argv.is_null() {
            return Err(null("argv"));
        } else {
            std::slice::from_raw_parts(argv, argc)
        };
        let mut args = vec!["orbitkit".to_string()];
        for &a in raw {
            args.push(as_str(a, "argument")?.to_string());
        }
        let ex = orbitkit::cli::execute(args);
        write(exit_code, ex.code, "exit_code")?;
        if !stdout_out.is_null() {
            stdout_out.write(c_string(ex.stdout));
        }
        if !stderr_out.is_null() {
            stderr_out.write(c_string(ex.stderr));
        }
        Ok(())
    })
}
