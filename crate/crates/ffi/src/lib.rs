//! C interface to `kahyp`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns a
//! [`KahypStatus`]; on failure a message is available from
//! [`kahyp_last_error`] until the next failing call on the same thread.
//! Strings returned by the library are owned by the caller and must be
//! released with [`kahyp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kahyp::automata::{to_dot, NfaJson};
use kahyp::oracle::stabilized_closure;
use kahyp::syntax::parse_hypothesis_file;
use kahyp::{
    ka_h_equiv, parse_expr, reduce_seq, thompson, ClosureConfig, Error, Expr, Hypothesis, ReductionOutcome, Side,
    Variant, Verdict,
};

#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KahypStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    InvalidConfig = 4,
    BudgetExceeded = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KahypVariant {
    T0 = 0,
    Th = 1,
}

/// Closure settings. Start from [`kahyp_config_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct KahypConfig {
    pub variant: KahypVariant,
    pub max_rounds: u32,
    pub max_states: usize,
}

#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KahypVerdict {
    Equivalent = 0,
    /// The witness is in the left language only.
    InequivalentLeft = 1,
    /// The witness is in the right language only.
    InequivalentRight = 2,
    Unknown = 3,
}

/// A parsed regular expression.
pub struct KahypExpr(Expr);

/// A list of hypotheses.
pub struct KahypHypotheses(Vec<Hypothesis>);

/// The result of a reduction, defined or not.
pub struct KahypReduction(ReductionOutcome);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(KahypStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. } | Error::LetterOutsideAlphabet { .. } => KahypStatus::Syntax,
            Error::InvalidConfig(_) => KahypStatus::InvalidConfig,
            Error::StateBudgetExceeded { .. } => KahypStatus::BudgetExceeded,
            Error::UnknownState(_) | Error::InvalidAutomaton(_) => KahypStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn run(f: impl FnOnce() -> Result<(), Failure>) -> KahypStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KahypStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            KahypStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(KahypStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(KahypStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn obj<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn config(cfg: *const KahypConfig) -> ClosureConfig {
    let c = unsafe { cfg.as_ref() }
        .copied()
        .unwrap_or_else(|| kahyp_config_default());
    let variant = match c.variant {
        KahypVariant::T0 => Variant::T0,
        KahypVariant::Th => Variant::TH,
    };
    ClosureConfig::with_variant(variant)
        .max_rounds(c.max_rounds)
        .max_states(c.max_states)
}

/// The message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn kahyp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kahyp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn kahyp_config_default() -> KahypConfig {
    let d = ClosureConfig::default();
    KahypConfig {
        variant: match d.variant {
            Variant::T0 => KahypVariant::T0,
            Variant::TH => KahypVariant::Th,
        },
        max_rounds: d.max_rounds,
        max_states: d.max_states,
    }
}

/// # Safety
/// `src` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kahyp_expr_parse(src: *const c_char, out_expr: *mut *mut KahypExpr) -> KahypStatus {
    run(|| {
        let slot = out(out_expr, "out_expr")?;
        *slot = ptr::null_mut();
        let e = parse_expr(text(src, "src")?)?;
        *slot = Box::into_raw(Box::new(KahypExpr(e)));
        Ok(())
    })
}

/// # Safety
/// `e` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn kahyp_expr_free(e: *mut KahypExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// The expression in concrete syntax, or null if `e` is null.
///
/// # Safety
/// `e` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kahyp_expr_to_string(e: *const KahypExpr) -> *mut c_char {
    match e.as_ref() {
        Some(e) => c_string(e.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// Parses hypotheses in the file format: one per line, `#` starting a
/// comment. A line `u == w` contributes two hypotheses.
///
/// # Safety
/// `src` must be a nul-terminated string and `out_hyps` writable.
#[no_mangle]
pub unsafe extern "C" fn kahyp_hypotheses_parse(
    src: *const c_char,
    out_hyps: *mut *mut KahypHypotheses,
) -> KahypStatus {
    run(|| {
        let slot = out(out_hyps, "out_hyps")?;
        *slot = ptr::null_mut();
        let hs = parse_hypothesis_file(text(src, "src")?)?;
        *slot = Box::into_raw(Box::new(KahypHypotheses(hs)));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kahyp_hypotheses_len(h: *const KahypHypotheses) -> usize {
    h.as_ref().map_or(0, |h| h.0.len())
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kahyp_hypotheses_free(h: *mut KahypHypotheses) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Reduces `e` under `hyps`. An undefined reduction is still `KAHYP_STATUS_OK`;
/// inspect it with [`kahyp_reduction_is_reduced`]. A null `cfg` means the
/// defaults.
///
/// # Safety
/// Handles must be live, `cfg` null or readable, `out_red` writable.
#[no_mangle]
pub unsafe extern "C" fn kahyp_reduce(
    e: *const KahypExpr,
    hyps: *const KahypHypotheses,
    cfg: *const KahypConfig,
    out_red: *mut *mut KahypReduction,
) -> KahypStatus {
    run(|| {
        let slot = out(out_red, "out_red")?;
        *slot = ptr::null_mut();
        let (e, hs) = (obj(e, "e")?, obj(hyps, "hyps")?);
        let r = reduce_seq(&e.0, &hs.0, &config(cfg))?;
        *slot = Box::into_raw(Box::new(KahypReduction(r)));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kahyp_reduction_is_reduced(r: *const KahypReduction) -> bool {
    r.as_ref().is_some_and(|r| r.0.is_reduced())
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kahyp_reduction_rounds(r: *const KahypReduction) -> u32 {
    r.as_ref().map_or(0, |r| r.0.rounds())
}

/// A new handle for the reduced expression, or null if undefined.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kahyp_reduction_expr(r: *const KahypReduction) -> *mut KahypExpr {
    match r.as_ref().and_then(|r| r.0.expr()) {
        Some(e) => Box::into_raw(Box::new(KahypExpr(e.clone()))),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kahyp_reduction_free(r: *mut KahypReduction) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Decides `left ≡ right` under `hyps`. For an inequivalence the witness is
/// stored in `out_witness` (if not null); otherwise `*out_witness` is null.
///
/// # Safety
/// Handles must be live, `cfg` null or readable, `out_verdict` writable,
/// `out_witness` null or writable.
#[no_mangle]
pub unsafe extern "C" fn kahyp_equiv(
    left: *const KahypExpr,
    right: *const KahypExpr,
    hyps: *const KahypHypotheses,
    cfg: *const KahypConfig,
    out_verdict: *mut KahypVerdict,
    out_witness: *mut *mut c_char,
) -> KahypStatus {
    run(|| {
        let verdict = out(out_verdict, "out_verdict")?;
        let mut witness_slot = out_witness.as_mut();
        if let Some(w) = witness_slot.as_deref_mut() {
            *w = ptr::null_mut();
        }
        let (l, r, hs) = (obj(left, "left")?, obj(right, "right")?, obj(hyps, "hyps")?);
        let d = ka_h_equiv(&l.0, &r.0, &hs.0, &config(cfg))?;
        *verdict = match &d.verdict {
            Verdict::Equivalent => KahypVerdict::Equivalent,
            Verdict::Unknown { .. } => KahypVerdict::Unknown,
            Verdict::Inequivalent { witness, side } => {
                if let Some(w) = witness_slot {
                    *w = c_string(witness.to_string());
                }
                match side {
                    Side::Left => KahypVerdict::InequivalentLeft,
                    Side::Right => KahypVerdict::InequivalentRight,
                }
            }
        };
        Ok(())
    })
}

/// The full decision as JSON, in the same shape as `kahyp equiv --format json`.
///
/// # Safety
/// As for [`kahyp_equiv`]; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kahyp_equiv_json(
    left: *const KahypExpr,
    right: *const KahypExpr,
    hyps: *const KahypHypotheses,
    cfg: *const KahypConfig,
    out_json: *mut *mut c_char,
) -> KahypStatus {
    run(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        let (l, r, hs) = (obj(left, "left")?, obj(right, "right")?, obj(hyps, "hyps")?);
        let d = ka_h_equiv(&l.0, &r.0, &hs.0, &config(cfg))?;
        let json = serde_json::to_string(&d).map_err(|e| Failure(KahypStatus::Internal, e.to_string()))?;
        *slot = c_string(json);
        Ok(())
    })
}

/// The words of length at most `len` in the bounded hypothesis closure of
/// `e`, as a JSON object `{words, len, slack, stabilized}`.
///
/// # Safety
/// Handles must be live, `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn kahyp_closure_sample_json(
    e: *const KahypExpr,
    hyps: *const KahypHypotheses,
    len: usize,
    slack: usize,
    out_json: *mut *mut c_char,
) -> KahypStatus {
    run(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        let (e, hs) = (obj(e, "e")?, obj(hyps, "hyps")?);
        let s = stabilized_closure(&e.0, &hs.0, len, slack);
        let words: Vec<String> = s.fragment.iter().map(|w| w.to_string()).collect();
        let json = serde_json::json!({
            "words": words,
            "len": len,
            "slack": s.slack,
            "stabilized": s.stabilized,
        });
        *slot = c_string(json.to_string());
        Ok(())
    })
}

/// The Thompson automaton of `e` in Graphviz syntax, or null if `e` is null.
///
/// # Safety
/// `e` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kahyp_thompson_dot(e: *const KahypExpr) -> *mut c_char {
    match e.as_ref() {
        Some(e) => c_string(to_dot(&thompson(&e.0))),
        None => ptr::null_mut(),
    }
}

/// The Thompson automaton of `e` as JSON, or null if `e` is null.
///
/// # Safety
/// `e` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kahyp_thompson_json(e: *const KahypExpr) -> *mut c_char {
    match e.as_ref() {
        Some(e) => match serde_json::to_string(&NfaJson::from(&thompson(&e.0))) {
            Ok(s) => c_string(s),
            Err(_) => ptr::null_mut(),
        },
        None => ptr::null_mut(),
    }
}
