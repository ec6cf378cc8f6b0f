//! C ABI over the `memsat` solver.
//!
//! Instances and results are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Fallible calls return a
//! [`MemsatStatus`]; the message for the most recent failure on the calling
//! thread is available from [`memsat_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use memsat::bench::{self, ResourceModel};
use memsat::cnf::{parse_dimacs, Instance};
use memsat::generator::{generate, GeneratorConfig};
use memsat::hwemu::{solve_hw, HwConfig};
use memsat::solver::{solve, Outcome, Precision, RunRecord, SolveConfig, DEFAULT_MAX_STEPS};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemsatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidConfig = 4,
    BufferTooSmall = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemsatEngine {
    /// Floating-point integrator.
    Float = 0,
    /// Fixed-point schedule emulator.
    Hw = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemsatOutcome {
    Sat = 0,
    BudgetExhausted = 1,
}

/// Opaque parsed or generated 3-SAT instance.
pub struct MemsatInstance(Instance);

/// Opaque outcome of one solve.
pub struct MemsatResult(RunRecord);

/// Solver settings. Start from [`memsat_solve_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemsatSolveConfig {
    pub seed: u64,
    pub max_steps: u64,
    pub check_every: u64,
    pub dt: f64,
    /// Nonzero selects single precision for the float engine.
    pub single_precision: u8,
    /// One of the `MemsatEngine` values.
    pub engine: u32,
    /// Value format for the hw engine: sign + int_bits + frac_bits.
    pub int_bits: u32,
    pub frac_bits: u32,
    pub cycles_per_interval: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn guard(f: impl FnOnce() -> Result<(), (MemsatStatus, String)>) -> MemsatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MemsatStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside memsat");
            MemsatStatus::Panic
        }
    }
}

fn null(what: &str) -> (MemsatStatus, String) {
    (MemsatStatus::NullPointer, format!("{what} is null"))
}

/// Copies the last error message (NUL-terminated, truncated to fit) into
/// `buf` and returns the buffer size needed for the full message.
/// Returns 0 when the last call on this thread succeeded.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn memsat_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = (bytes.len() - 1).min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Parses DIMACS CNF text of `len` bytes.
///
/// # Safety
/// `data` must be valid for `len` bytes; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn memsat_instance_parse_dimacs(
    data: *const u8,
    len: usize,
    out: *mut *mut MemsatInstance,
) -> MemsatStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if data.is_null() {
            return Err(null("data"));
        }
        let bytes = std::slice::from_raw_parts(data, len);
        let inst = parse_dimacs(bytes).map_err(|e| (MemsatStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(MemsatInstance(inst)));
        Ok(())
    })
}

/// Reads a DIMACS file from a NUL-terminated UTF-8 path.
///
/// # Safety
/// `path` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn memsat_instance_load(path: *const c_char, out: *mut *mut MemsatInstance) -> MemsatStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|e| (MemsatStatus::InvalidUtf8, e.to_string()))?;
        let bytes = std::fs::read(path).map_err(|e| (MemsatStatus::Io, format!("{path}: {e}")))?;
        let inst = parse_dimacs(&bytes).map_err(|e| (MemsatStatus::ParseError, format!("{path}: {e}")))?;
        *out = Box::into_raw(Box::new(MemsatInstance(inst)));
        Ok(())
    })
}

/// Generates a planted-solution instance with `round(ratio * num_vars)` clauses.
/// If `planted` is non-null it receives the planted assignment as 0/1 bytes
/// and must hold `num_vars` bytes.
///
/// # Safety
/// `out` must be a valid pointer; `planted` must be null or valid for `num_vars` bytes.
#[no_mangle]
pub unsafe extern "C" fn memsat_instance_generate(
    num_vars: usize,
    ratio: f64,
    p0: f64,
    seed: u64,
    planted: *mut u8,
    out: *mut *mut MemsatInstance,
) -> MemsatStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let cfg = GeneratorConfig {
            num_vars,
            ratio,
            p0,
            seed,
        };
        let p = generate(&cfg).map_err(|e| (MemsatStatus::InvalidConfig, e.to_string()))?;
        if !planted.is_null() {
            let dst = std::slice::from_raw_parts_mut(planted, num_vars);
            for (d, &b) in dst.iter_mut().zip(&p.planted) {
                *d = b as u8;
            }
        }
        *out = Box::into_raw(Box::new(MemsatInstance(p.instance)));
        Ok(())
    })
}

/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn memsat_instance_num_vars(inst: *const MemsatInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.num_vars())
}

/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn memsat_instance_num_clauses(inst: *const MemsatInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.num_clauses())
}

/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn memsat_instance_free(inst: *mut MemsatInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Default settings for `inst` (float64 engine, seed 0).
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn memsat_solve_config_default(inst: *const MemsatInstance) -> MemsatSolveConfig {
    let dt = match inst.as_ref() {
        Some(i) => SolveConfig::for_instance(&i.0, 0).params.dt,
        None => memsat::dynamics::DEFAULT_DT,
    };
    let hw = HwConfig::default();
    MemsatSolveConfig {
        seed: 0,
        max_steps: DEFAULT_MAX_STEPS,
        check_every: 1,
        dt,
        single_precision: 0,
        engine: MemsatEngine::Float as u32,
        int_bits: hw.value.int_bits,
        frac_bits: hw.value.frac_bits,
        cycles_per_interval: hw.cycles_per_interval,
    }
}

/// Runs the solver. Budget exhaustion is a successful call with outcome
/// `MEMSAT_OUTCOME_BUDGET_EXHAUSTED`.
///
/// # Safety
/// `inst` and `config` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn memsat_solve(
    inst: *const MemsatInstance,
    config: *const MemsatSolveConfig,
    out: *mut *mut MemsatResult,
) -> MemsatStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = &inst.as_ref().ok_or_else(|| null("instance"))?.0;
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        let invalid = |e: &dyn std::fmt::Display| (MemsatStatus::InvalidConfig, e.to_string());
        let mut cfg = SolveConfig::for_instance(inst, c.seed);
        cfg.params.dt = c.dt;
        cfg.max_steps = c.max_steps;
        cfg.check_every = c.check_every;
        cfg.precision = if c.single_precision != 0 {
            Precision::Float32
        } else {
            Precision::Float64
        };
        cfg.validate().map_err(|e| invalid(&e))?;
        let record = match c.engine {
            e if e == MemsatEngine::Float as u32 => solve(inst, &cfg),
            e if e == MemsatEngine::Hw as u32 => {
                let mut hw = HwConfig::with_bits(c.int_bits, c.frac_bits).map_err(|e| invalid(&e))?;
                hw.cycles_per_interval = c.cycles_per_interval;
                solve_hw(inst, &cfg, &hw).map_err(|e| invalid(&e))?
            }
            other => return Err((MemsatStatus::InvalidConfig, format!("unknown engine {other}"))),
        };
        *out = Box::into_raw(Box::new(MemsatResult(record)));
        Ok(())
    })
}

/// # Safety
/// `res` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn memsat_result_outcome(res: *const MemsatResult) -> MemsatOutcome {
    match res.as_ref().map(|r| r.0.outcome) {
        Some(Outcome::Sat) => MemsatOutcome::Sat,
        _ => MemsatOutcome::BudgetExhausted,
    }
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn memsat_result_steps(res: *const MemsatResult) -> u64 {
    res.as_ref().map_or(0, |r| r.0.steps)
}

/// Clock cycles of an hw-engine run; 0 for the float engine.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn memsat_result_cycles(res: *const MemsatResult) -> u64 {
    res.as_ref().and_then(|r| r.0.cycles).unwrap_or(0)
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn memsat_result_wall_time(res: *const MemsatResult) -> f64 {
    res.as_ref().map_or(0.0, |r| r.0.wall_time_s)
}

/// Copies the satisfying assignment as 0/1 bytes. `written` receives the
/// number of variables (0 when the run did not reach SAT).
///
/// # Safety
/// `res` must be live; `buf` must be null or valid for `len` bytes; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn memsat_result_assignment(
    res: *const MemsatResult,
    buf: *mut u8,
    len: usize,
    written: *mut usize,
) -> MemsatStatus {
    guard(|| {
        let res = &res.as_ref().ok_or_else(|| null("result"))?.0;
        if written.is_null() {
            return Err(null("written"));
        }
        let assignment = res.assignment.as_deref().unwrap_or(&[]);
        *written = assignment.len();
        if assignment.is_empty() {
            return Ok(());
        }
        if buf.is_null() || len < assignment.len() {
            return Err((
                MemsatStatus::BufferTooSmall,
                format!("assignment needs {} bytes, got {len}", assignment.len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(buf, assignment.len());
        for (d, &b) in dst.iter_mut().zip(assignment) {
            *d = b as u8;
        }
        Ok(())
    })
}

/// # Safety
/// `res` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn memsat_result_free(res: *mut MemsatResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Modeled hardware seconds: `steps * (num_clauses + 1) * cycles_per_interval / clock_hz`.
#[no_mangle]
pub extern "C" fn memsat_project_hw_time(
    steps: u64,
    num_clauses: usize,
    clock_hz: f64,
    cycles_per_interval: u64,
) -> f64 {
    bench::project_hw_time(steps, num_clauses, clock_hz, cycles_per_interval)
}

/// Estimated LUT usage for `num_vars` variables under the default resource model.
#[no_mangle]
pub extern "C" fn memsat_estimate_luts(num_vars: usize) -> f64 {
    ResourceModel::default().estimate_luts(num_vars)
}
