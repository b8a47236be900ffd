//! C ABI over the `blockbench` library.
//!
//! Every function returns a [`BbStatus`]; on failure a message is available
//! from [`bb_last_error`] on the same thread. Handles are opaque and must be
//! released with the matching `*_free` function. Bit strings are passed as
//! one byte per bit (zero is 0, anything else is 1).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use blockbench::moea::hypervolume_2d;
use blockbench::problems::{make_biobjective, make_suite_instance, BiSuiteId, SuiteId};
use blockbench::soea::{self, SoConfig};
use blockbench::{BiObjectiveInstance, BiProblem, BitString, InstanceSpec, ObjectivePair, Problem, RandomSource};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BbStatus {
    Ok = 0,
    NullPointer = -1,
    InvalidArgument = -2,
    ParseError = -3,
    Panic = -4,
}

/// Single-objective problem handle.
pub struct BbProblem {
    inner: Problem,
}

/// Bi-objective problem handle.
pub struct BbBiProblem {
    inner: BiProblem,
}

/// Outcome of one single-objective run.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct BbRunSummary {
    pub evaluations_used: u64,
    pub best_f: f64,
    /// 1 if the known optimum was reached.
    pub hit_target: i32,
    /// Evaluation index of the first hit, or the budget when missed.
    pub fes: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (BbStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BbStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            BbStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (BbStatus::NullPointer, format!("{what} is null"))
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    (BbStatus::InvalidArgument, e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (BbStatus::ParseError, format!("{what} is not UTF-8")))
}

unsafe fn read_bits(bits: *const u8, len: usize) -> Result<BitString, Failure> {
    if bits.is_null() && len > 0 {
        return Err(null("bits"));
    }
    let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(bits, len) };
    Ok(slice.iter().map(|&b| b != 0).collect())
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds suite instance `id` (F1..F10) with `n` bits and `m` blocks.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bb_problem_from_suite(id: *const c_char, n: usize, m: usize, out: *mut *mut BbProblem) -> BbStatus {
    guard(|| {
        let id: SuiteId = read_str(id, "id")?.parse().map_err(invalid)?;
        let spec = make_suite_instance(id, n, m).map_err(invalid)?;
        store(out, BbProblem { inner: Problem::new(spec).map_err(invalid)? })
    })
}

/// Builds a problem from an instance JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bb_problem_from_json(json: *const c_char, out: *mut *mut BbProblem) -> BbStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let spec = InstanceSpec::from_json(text).map_err(|e| (BbStatus::ParseError, e.to_string()))?;
        store(out, BbProblem { inner: Problem::new(spec).map_err(invalid)? })
    })
}

/// Releases a problem handle. NULL is ignored.
///
/// # Safety
/// `problem` must come from a `bb_problem_from_*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bb_problem_free(problem: *mut BbProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Writes the string length `n` and block count `m`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_problem_shape(problem: *const BbProblem, n: *mut usize, m: *mut usize) -> BbStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        if n.is_null() || m.is_null() {
            return Err(null("output"));
        }
        *n = p.inner.n();
        *m = p.inner.m();
        Ok(())
    })
}

/// Evaluates `bits[0..len]`. `block_values`, if not NULL, receives `m` values.
///
/// # Safety
/// `bits` must hold `len` bytes, `f` must be valid and `block_values` must be
/// NULL or hold `m` slots.
#[no_mangle]
pub unsafe extern "C" fn bb_problem_evaluate(
    problem: *const BbProblem,
    bits: *const u8,
    len: usize,
    f: *mut f64,
    block_values: *mut u64,
) -> BbStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        if f.is_null() {
            return Err(null("f"));
        }
        let e = p.inner.evaluate(&read_bits(bits, len)?).map_err(invalid)?;
        *f = e.f;
        if !block_values.is_null() {
            ptr::copy_nonoverlapping(e.block_values.as_ptr(), block_values, e.block_values.len());
        }
        Ok(())
    })
}

/// Writes the global optimum when it is known analytically; `*known` is set
/// to 0 otherwise.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_problem_known_optimum(problem: *const BbProblem, known: *mut i32, value: *mut f64) -> BbStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        if known.is_null() || value.is_null() {
            return Err(null("output"));
        }
        match p.inner.known_optimum() {
            Some(v) => {
                *known = 1;
                *value = v;
            }
            None => *known = 0,
        }
        Ok(())
    })
}

/// Runs one single-objective algorithm. `config_json` is an algorithm config
/// such as `{"variant": "two_rate"}`; NULL means the (1+λ) EA defaults. With
/// `stop_at_optimum` the run ends at the known optimum.
///
/// # Safety
/// `problem` and `out` must be valid; `config_json` NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn bb_run_single(
    problem: *const BbProblem,
    config_json: *const c_char,
    budget: u64,
    seed: u64,
    stop_at_optimum: i32,
    out: *mut BbRunSummary,
) -> BbStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let cfg: SoConfig = if config_json.is_null() {
            SoConfig::default()
        } else {
            serde_json::from_str(read_str(config_json, "config_json")?).map_err(|e| (BbStatus::ParseError, e.to_string()))?
        };
        let target = if stop_at_optimum != 0 { p.inner.known_optimum() } else { None };
        let r = soea::run(&cfg, &p.inner, budget, target, &mut RandomSource::new(seed)).map_err(invalid)?;
        *out = BbRunSummary {
            evaluations_used: r.evaluations_used,
            best_f: r.best_f,
            hit_target: r.hit_target as i32,
            fes: r.fes(budget),
        };
        Ok(())
    })
}

/// Builds bi-objective suite instance `id` (BF1..BF5).
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bb_bi_problem_from_suite(id: *const c_char, n: usize, m: usize, out: *mut *mut BbBiProblem) -> BbStatus {
    guard(|| {
        let id: BiSuiteId = read_str(id, "id")?.parse().map_err(invalid)?;
        let inst = make_biobjective(id, n, m).map_err(invalid)?;
        store(out, BbBiProblem { inner: BiProblem::new(inst).map_err(invalid)? })
    })
}

/// Builds a bi-objective problem from `{"first": ..., "second": ...}` JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bb_bi_problem_from_json(json: *const c_char, out: *mut *mut BbBiProblem) -> BbStatus {
    guard(|| {
        let inst: BiObjectiveInstance =
            serde_json::from_str(read_str(json, "json")?).map_err(|e| (BbStatus::ParseError, e.to_string()))?;
        store(out, BbBiProblem { inner: BiProblem::new(inst).map_err(invalid)? })
    })
}

/// Releases a bi-objective handle. NULL is ignored.
///
/// # Safety
/// `problem` must come from a `bb_bi_problem_from_*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bb_bi_problem_free(problem: *mut BbBiProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Evaluates both objectives of `bits[0..len]`.
///
/// # Safety
/// `bits` must hold `len` bytes; `y1` and `y2` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_bi_problem_evaluate(
    problem: *const BbBiProblem,
    bits: *const u8,
    len: usize,
    y1: *mut f64,
    y2: *mut f64,
) -> BbStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        if y1.is_null() || y2.is_null() {
            return Err(null("output"));
        }
        let (a, b) = p.inner.evaluate(&read_bits(bits, len)?).map_err(invalid)?;
        *y1 = a.f;
        *y2 = b.f;
        Ok(())
    })
}

/// Area dominated by the points `(y1[i], y2[i])` (maximisation) above the
/// reference point `(r1, r2)`.
///
/// # Safety
/// `y1` and `y2` must hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_hypervolume_2d(
    y1: *const f64,
    y2: *const f64,
    len: usize,
    r1: f64,
    r2: f64,
    out: *mut f64,
) -> BbStatus {
    guard(|| {
        if out.is_null() || (len > 0 && (y1.is_null() || y2.is_null())) {
            return Err(null("input or output"));
        }
        let pts: Vec<ObjectivePair> = (0..len).map(|i| ObjectivePair::new(*y1.add(i), *y2.add(i))).collect();
        *out = hypervolume_2d(&pts, ObjectivePair::new(r1, r2));
        Ok(())
    })
}
