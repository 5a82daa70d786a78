use std::ffi::{c_char, CStr, CString};
use std::ptr;

use kahyp_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    kahyp_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(kahyp_last_error()).to_str().unwrap().to_owned()
}

unsafe fn expr(s: &str) -> *mut KahypExpr {
    let mut e = ptr::null_mut();
    assert_eq!(kahyp_expr_parse(cstr(s).as_ptr(), &mut e), KahypStatus::Ok);
    e
}

unsafe fn hyps(s: &str) -> *mut KahypHypotheses {
    let mut h = ptr::null_mut();
    assert_eq!(kahyp_hypotheses_parse(cstr(s).as_ptr(), &mut h), KahypStatus::Ok);
    h
}

#[test]
fn parse_and_print() {
    unsafe {
        let e = expr("(a+b)*ab");
        assert_eq!(take(kahyp_expr_to_string(e)), "(a+b)*ab");
        kahyp_expr_free(e);
    }
}

#[test]
fn syntax_errors_set_the_message() {
    unsafe {
        let mut e = 1 as *mut KahypExpr;
        assert_eq!(kahyp_expr_parse(cstr("a+(").as_ptr(), &mut e), KahypStatus::Syntax);
        assert!(e.is_null());
        assert!(last_error().contains("position"), "{}", last_error());
    }
}

#[test]
fn null_arguments() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(kahyp_expr_parse(ptr::null(), &mut e), KahypStatus::NullArgument);
        assert_eq!(
            kahyp_expr_parse(cstr("a").as_ptr(), ptr::null_mut()),
            KahypStatus::NullArgument
        );
        assert!(kahyp_expr_to_string(ptr::null()).is_null());
        let mut r = ptr::null_mut();
        assert_eq!(
            kahyp_reduce(ptr::null(), ptr::null(), ptr::null(), &mut r),
            KahypStatus::NullArgument
        );
        kahyp_expr_free(ptr::null_mut());
        kahyp_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8() {
    unsafe {
        let bytes = [0xffu8, 0];
        let mut e = ptr::null_mut();
        assert_eq!(
            kahyp_expr_parse(bytes.as_ptr().cast(), &mut e),
            KahypStatus::InvalidUtf8
        );
    }
}

#[test]
fn reduce_saturates() {
    unsafe {
        let (e, h) = (expr("a"), hyps("ba<=a\n"));
        assert_eq!(kahyp_hypotheses_len(h), 1);
        let mut r = ptr::null_mut();
        assert_eq!(kahyp_reduce(e, h, ptr::null(), &mut r), KahypStatus::Ok);
        assert!(kahyp_reduction_is_reduced(r));
        assert_eq!(kahyp_reduction_rounds(r), 2);
        let out = kahyp_reduction_expr(r);
        assert_eq!(take(kahyp_expr_to_string(out)), "b*a");
        kahyp_expr_free(out);
        kahyp_reduction_free(r);
        kahyp_hypotheses_free(h);
        kahyp_expr_free(e);
    }
}

#[test]
fn undefined_reduction() {
    unsafe {
        let (e, h) = (expr("(ab)*"), hyps("ab<=ba"));
        let mut cfg = kahyp_config_default();
        cfg.max_rounds = 6;
        let mut r = ptr::null_mut();
        assert_eq!(kahyp_reduce(e, h, &cfg, &mut r), KahypStatus::Ok);
        assert!(!kahyp_reduction_is_reduced(r));
        assert!(kahyp_reduction_expr(r).is_null());
        kahyp_reduction_free(r);
        kahyp_hypotheses_free(h);
        kahyp_expr_free(e);
    }
}

#[test]
fn invalid_config() {
    unsafe {
        let (e, h) = (expr("a"), hyps(""));
        let mut cfg = kahyp_config_default();
        cfg.max_rounds = 0;
        let mut r = ptr::null_mut();
        assert_eq!(kahyp_reduce(e, h, &cfg, &mut r), KahypStatus::InvalidConfig);
        assert!(r.is_null());
        kahyp_hypotheses_free(h);
        kahyp_expr_free(e);
    }
}

#[test]
fn equivalence_verdicts() {
    unsafe {
        let h = hyps("ba<=a");
        let (l, r) = (expr("a"), expr("b*a"));
        let mut v = KahypVerdict::Unknown;
        let mut w = 1 as *mut c_char;
        assert_eq!(kahyp_equiv(l, r, h, ptr::null(), &mut v, &mut w), KahypStatus::Ok);
        assert_eq!(v, KahypVerdict::Equivalent);
        assert!(w.is_null());

        let (l2, r2) = (expr("ab"), expr("a"));
        assert_eq!(kahyp_equiv(l2, r2, h, ptr::null(), &mut v, &mut w), KahypStatus::Ok);
        // b*ab against b*a: the shortlex-least difference is "a"
        assert_eq!(v, KahypVerdict::InequivalentRight);
        assert_eq!(take(w), "a");
        assert_eq!(
            kahyp_equiv(r2, l2, h, ptr::null(), &mut v, ptr::null_mut()),
            KahypStatus::Ok
        );
        assert_eq!(v, KahypVerdict::InequivalentLeft);

        let mut json = ptr::null_mut();
        assert_eq!(kahyp_equiv_json(l2, r2, h, ptr::null(), &mut json), KahypStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["verdict"], "inequivalent");
        assert_eq!(v["witness"], "a");
        assert_eq!(v["side"], "right");
        for p in [l, r, l2, r2] {
            kahyp_expr_free(p);
        }
        kahyp_hypotheses_free(h);
    }
}

#[test]
fn closure_sample() {
    unsafe {
        let (e, h) = (expr("a"), hyps("aa<=a"));
        let mut json = ptr::null_mut();
        assert_eq!(kahyp_closure_sample_json(e, h, 4, 4, &mut json), KahypStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["words"], serde_json::json!(["a", "aa", "aaa", "aaaa"]));
        assert_eq!(v["stabilized"], true);
        kahyp_hypotheses_free(h);
        kahyp_expr_free(e);
    }
}

#[test]
fn thompson_exports() {
    unsafe {
        let e = expr("a*");
        assert!(take(kahyp_thompson_dot(e)).starts_with("digraph nfa {"));
        let v: serde_json::Value = serde_json::from_str(&take(kahyp_thompson_json(e))).unwrap();
        assert!(v["states"].as_array().unwrap().len() >= 2);
        kahyp_expr_free(e);
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(kahyp_expr_parse(cstr(")").as_ptr(), &mut e), KahypStatus::Syntax);
        std::thread::spawn(|| assert!(kahyp_last_error().is_null()))
            .join()
            .unwrap();
        assert!(!kahyp_last_error().is_null());
    }
}
