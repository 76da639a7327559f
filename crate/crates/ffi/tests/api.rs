use std::ffi::{c_char, CStr, CString};
use std::ptr;

use orbitkit_ffi::*;

fn word(text: &str) -> *mut OkWord {
    let c = CString::new(text).unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { ok_word_parse(c.as_ptr(), 2, &mut w) }, OkStatus::Ok);
    w
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    ok_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = ok_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn words_round_trip() {
    let w = word("abAab");
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ok_word_to_string(w, &mut s), OkStatus::Ok);
        assert_eq!(take(s), "abb");
        let mut len = 0;
        assert_eq!(ok_word_length(w, &mut len), OkStatus::Ok);
        assert_eq!(len, 3);
        let inv = word("BBA");
        let mut p = ptr::null_mut();
        assert_eq!(ok_word_multiply(w, inv, &mut p), OkStatus::Ok);
        assert_eq!(ok_word_length(p, &mut len), OkStatus::Ok);
        assert_eq!(len, 0);
        ok_word_free(p);
        ok_word_free(inv);
        ok_word_free(w);
    }
}

#[test]
fn parse_errors_set_the_message() {
    let c = CString::new("abc").unwrap();
    let mut w = ptr::null_mut();
    let status = unsafe { ok_word_parse(c.as_ptr(), 2, &mut w) };
    assert_eq!(status, OkStatus::Parse);
    assert!(w.is_null());
    assert!(last_error().unwrap().contains('c'));
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { ok_word_parse(ptr::null(), 2, &mut w) }, OkStatus::NullPointer);
}

#[test]
fn conjugacy_returns_a_witness() {
    let (u, v) = (word("abA"), word("b"));
    unsafe {
        let mut verdict = OkVerdict::No;
        let mut x = ptr::null_mut();
        assert_eq!(ok_conjugacy(u, v, &mut verdict, &mut x), OkStatus::Ok);
        assert_eq!(verdict, OkVerdict::Yes);
        let mut s = ptr::null_mut();
        ok_word_to_string(x, &mut s);
        assert_eq!(take(s), "a");
        ok_word_free(x);
        let other = word("a");
        let mut x = ptr::null_mut();
        assert_eq!(ok_conjugacy(other, v, &mut verdict, &mut x), OkStatus::Ok);
        assert_eq!(verdict, OkVerdict::No);
        assert!(x.is_null());
        ok_word_free(other);
        ok_word_free(u);
        ok_word_free(v);
    }
}

#[test]
fn automorphic_orbits_and_primitivity() {
    let (u, v, c) = (word("ab"), word("a"), word("abAB"));
    unsafe {
        let mut verdict = OkVerdict::No;
        let mut cert = ptr::null_mut();
        assert_eq!(ok_aut_orbit(u, v, &mut verdict, &mut cert), OkStatus::Ok);
        assert_eq!(verdict, OkVerdict::Yes);
        assert!(take(cert).starts_with('['));
        assert_eq!(ok_aut_orbit(v, c, &mut verdict, ptr::null_mut()), OkStatus::Ok);
        assert_eq!(verdict, OkVerdict::No);
        let mut p = false;
        assert_eq!(ok_is_primitive(u, &mut p), OkStatus::Ok);
        assert!(p);
        assert_eq!(ok_is_primitive(c, &mut p), OkStatus::Ok);
        assert!(!p);
        for w in [u, v, c] {
            ok_word_free(w);
        }
    }
}

#[test]
fn subgroups() {
    let gens = [word("aa"), word("b")];
    let handles: Vec<*const OkWord> = gens.iter().map(|&w| w as *const _).collect();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ok_subgroup_build(2, handles.as_ptr(), 2, &mut s), OkStatus::Ok);
        let (yes, no) = (word("aab"), word("ab"));
        let mut member = false;
        assert_eq!(ok_subgroup_contains(s, yes, &mut member), OkStatus::Ok);
        assert!(member);
        assert_eq!(ok_subgroup_contains(s, no, &mut member), OkStatus::Ok);
        assert!(!member);
        let mut basis = ptr::null_mut();
        assert_eq!(ok_subgroup_basis_json(s, &mut basis), OkStatus::Ok);
        let basis: Vec<String> = serde_json::from_str(&take(basis)).unwrap();
        assert_eq!(basis.len(), 2);
        ok_subgroup_free(s);
        for w in gens.into_iter().chain([yes, no]) {
            ok_word_free(w);
        }
    }
}

#[test]
fn lattice_deciders() {
    unsafe {
        let mut verdict = OkVerdict::Yes;
        let (x, gens) = ([2i64, 4], [3i64, 0, 0, 3]);
        assert_eq!(ok_sod_gl(x.as_ptr(), 2, gens.as_ptr(), 2, &mut verdict, ptr::null_mut()), OkStatus::Ok);
        assert_eq!(verdict, OkVerdict::No);
        let (x, gens) = ([2i64, 0], [1i64, 1]);
        let mut w = ptr::null_mut();
        assert_eq!(ok_sod_gl(x.as_ptr(), 2, gens.as_ptr(), 1, &mut verdict, &mut w), OkStatus::Ok);
        assert_eq!(verdict, OkVerdict::Yes);
        let w: serde_json::Value = serde_json::from_str(&take(w)).unwrap();
        assert_eq!(w["image"], serde_json::json!([2, 2]));

        let (a, u, v) = ([0i64, 1, 1, 0], [1i64, 0], [0i64, 1]);
        let mut sol = [0i64; 2];
        assert_eq!(ok_tcp(a.as_ptr(), 2, u.as_ptr(), v.as_ptr(), &mut verdict, sol.as_mut_ptr()), OkStatus::Ok);
        assert_eq!(verdict, OkVerdict::Yes);
        // x·(I − A) = v − u
        assert_eq!([sol[0] - sol[1], sol[1] - sol[0]], [-1, 1]);
        let id = [1i64, 0, 0, 1];
        assert_eq!(ok_tcp(id.as_ptr(), 2, u.as_ptr(), [0i64, 0].as_ptr(), &mut verdict, ptr::null_mut()), OkStatus::Ok);
        assert_eq!(verdict, OkVerdict::No);
        let singular = [2i64, 0, 0, 1];
        assert_eq!(ok_tcp(singular.as_ptr(), 2, u.as_ptr(), v.as_ptr(), &mut verdict, ptr::null_mut()), OkStatus::InvalidArgument);
        assert!(last_error().is_some());
    }
}

#[test]
fn generic_entry_point_matches_the_cli() {
    let args: Vec<CString> = ["ab-sod-gl", "--x", "2,4", "--gens", "3,0;0,3"].iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    unsafe {
        let (mut code, mut out, mut err) = (-1, ptr::null_mut(), ptr::null_mut());
        assert_eq!(ok_run(argv.len(), argv.as_ptr(), &mut code, &mut out, &mut err), OkStatus::Ok);
        assert_eq!(code, 0);
        let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(report["decision"], "no");
        assert_eq!(report["schema"], "orbitkit/1");
        assert_eq!(take(err), "");

        let bad: Vec<CString> = ["ab-sod-gl", "--x", "1,2,three", "--gens", "1,0"].iter().map(|a| CString::new(*a).unwrap()).collect();
        let argv: Vec<*const c_char> = bad.iter().map(|a| a.as_ptr()).collect();
        let mut err = ptr::null_mut();
        assert_eq!(ok_run(argv.len(), argv.as_ptr(), &mut code, ptr::null_mut(), &mut err), OkStatus::Ok);
        assert_eq!(code, 3);
        assert!(take(err).contains("three"));
    }
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(ok_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
