//! Fixed-point emulation of the clause-serial hardware schedule.
//!
//! One Euler step (a "macro step") is split into `M + 1` intervals. Interval
//! `m < M` reads the three voltages of clause `m` from the voltage RAM,
//! evaluates `C_m`, `G` and `R`, adds the clause's `dv` contributions into
//! per-variable accumulators and updates the clause-local memories `xs_m`,
//! `xl_m`. Interval `M` writes `v + dt * acc` back, clamped to `[-1, 1]`.
//! Voltage writes are staged and only committed at the end of interval `M`,
//! so every clause evaluation in a macro step sees the start-of-step voltages.
//!
//! All quantities share one binary point (`frac_bits`). Bounded quantities
//! (`v`, `xs`, literal terms, `C`, `G`, `R`, the constants) use the value
//! format; `xl` and everything scaled by it use the wide format. Every
//! arithmetic result is rounded to nearest-even at the binary point and
//! saturated to its format, and saturations are counted.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::Instance;
use crate::dynamics::{Params, RigidityMode, SolverState};
use crate::solver::{initial_voltages, Engine, Outcome, RunRecord, SaturationCounters, SolveConfig};

#[derive(Debug, Error, PartialEq)]
pub enum HwError {
    #[error("format Q{int_bits}.{frac_bits} needs {} bits, at most 64 are available", 1 + int_bits + frac_bits)]
    TooWide { int_bits: u32, frac_bits: u32 },
    #[error("frac_bits must be at least 1")]
    NoFraction,
    #[error("value and wide formats must share frac_bits ({value} vs {wide})")]
    FracMismatch { value: u32, wide: u32 },
    #[error("{what} = {value} is not representable in Q{int_bits}.{frac_bits}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        int_bits: u32,
        frac_bits: u32,
    },
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
    #[error("invalid solve configuration: {0}")]
    Config(String),
}

/// Signed two's-complement format: 1 sign bit, `int_bits`, `frac_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointFormat {
    pub int_bits: u32,
    pub frac_bits: u32,
}

impl FixedPointFormat {
    pub fn new(int_bits: u32, frac_bits: u32) -> Result<Self, HwError> {
        if frac_bits == 0 {
            return Err(HwError::NoFraction);
        }
        if 1 + int_bits + frac_bits > 64 {
            return Err(HwError::TooWide { int_bits, frac_bits });
        }
        Ok(FixedPointFormat { int_bits, frac_bits })
    }

    pub fn total_bits(&self) -> u32 {
        1 + self.int_bits + self.frac_bits
    }

    #[inline]
    pub fn raw_max(&self) -> i64 {
        ((1i128 << (self.total_bits() - 1)) - 1) as i64
    }

    #[inline]
    pub fn raw_min(&self) -> i64 {
        (-(1i128 << (self.total_bits() - 1))) as i64
    }

    #[inline]
    pub fn one(&self) -> i64 {
        1i64 << self.frac_bits
    }

    pub fn max_value(&self) -> f64 {
        self.to_f64(self.raw_max())
    }

    pub fn min_value(&self) -> f64 {
        self.to_f64(self.raw_min())
    }

    pub fn to_f64(&self, raw: i64) -> f64 {
        raw as f64 / (self.frac_bits as f64).exp2()
    }

    /// Saturates a wide intermediate into this format.
    #[inline]
    pub fn saturate(&self, x: i128) -> (i64, bool) {
        if x > self.raw_max() as i128 {
            (self.raw_max(), true)
        } else if x < self.raw_min() as i128 {
            (self.raw_min(), true)
        } else {
            (x as i64, false)
        }
    }

    /// Nearest-even rounding at `frac_bits`, saturating at the range edges.
    pub fn quantize(&self, x: f64) -> Quantized {
        if x.is_nan() {
            return Quantized { raw: 0, saturated: true };
        }
        let scaled = (x * (self.frac_bits as f64).exp2()).round_ties_even();
        if scaled >= self.raw_max() as f64 {
            Quantized {
                raw: self.raw_max(),
                saturated: scaled > self.raw_max() as f64,
            }
        } else if scaled <= self.raw_min() as f64 {
            Quantized {
                raw: self.raw_min(),
                saturated: scaled < self.raw_min() as f64,
            }
        } else {
            Quantized {
                raw: scaled as i64,
                saturated: false,
            }
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min_value() && x <= self.max_value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quantized {
    pub raw: i64,
    pub saturated: bool,
}

/// Arithmetic shift right by `shift` with round-half-to-even.
#[inline]
fn shift_round_even(x: i128, shift: u32) -> i128 {
    if shift == 0 {
        return x;
    }
    let floor = x >> shift;
    let rem = x - (floor << shift);
    let half = 1i128 << (shift - 1);
    if rem > half || (rem == half && floor & 1 == 1) {
        floor + 1
    } else {
        floor
    }
}

/// Value/wide format pair plus the interval timing knob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HwConfig {
    pub value: FixedPointFormat,
    pub wide: FixedPointFormat,
    pub cycles_per_interval: u64,
}

pub const DEFAULT_FRAC_BITS: u32 = 20;
pub const DEFAULT_VALUE_INT_BITS: u32 = 11;

impl Default for HwConfig {
    /// 32-bit Q11.20 values with a 64-bit Q43.20 wide format.
    fn default() -> Self {
        HwConfig::with_bits(DEFAULT_VALUE_INT_BITS, DEFAULT_FRAC_BITS).expect("valid default")
    }
}

impl HwConfig {
    /// Value format `Q{int_bits}.{frac_bits}`; the wide format takes all
    /// remaining bits of a 64-bit word for its integer part.
    pub fn with_bits(int_bits: u32, frac_bits: u32) -> Result<Self, HwError> {
        let value = FixedPointFormat::new(int_bits, frac_bits)?;
        let wide_int = 63u32.checked_sub(frac_bits).ok_or(HwError::TooWide {
            int_bits,
            frac_bits,
        })?;
        let wide = FixedPointFormat::new(wide_int.max(int_bits), frac_bits)?;
        Ok(HwConfig {
            value,
            wide,
            cycles_per_interval: 1,
        })
    }

    /// Checks both formats against the parameter constants and `xl_max`.
    pub fn validate(&self, params: &Params) -> Result<(), HwError> {
        if self.value.frac_bits != self.wide.frac_bits {
            return Err(HwError::FracMismatch {
                value: self.value.frac_bits,
                wide: self.wide.frac_bits,
            });
        }
        if self.cycles_per_interval == 0 {
            return Err(HwError::ZeroCount("cycles_per_interval"));
        }
        let value_checks = [
            ("v bound", 1.0),
            ("v bound", -1.0),
            ("literal term bound", 2.0),
            ("alpha", params.alpha),
            ("beta", params.beta),
            ("gamma", params.gamma),
            ("delta", params.delta),
            ("epsilon", params.epsilon),
            ("zeta", params.zeta),
            ("dt", params.dt),
        ];
        for (what, value) in value_checks {
            if !self.value.contains(value) {
                return Err(HwError::OutOfRange {
                    what,
                    value,
                    int_bits: self.value.int_bits,
                    frac_bits: self.value.frac_bits,
                });
            }
        }
        if !self.wide.contains(params.xl_max) {
            return Err(HwError::OutOfRange {
                what: "xl_max",
                value: params.xl_max,
                int_bits: self.wide.int_bits,
                frac_bits: self.wide.frac_bits,
            });
        }
        Ok(())
    }
}

/// Fixed-point state; raw integers at the shared binary point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedState {
    pub v: Vec<i64>,
    pub xs: Vec<i64>,
    pub xl: Vec<i64>,
    pub t: u64,
}

impl FixedState {
    pub fn to_float(&self, fmt: &FixedPointFormat) -> SolverState<f64> {
        let f = |xs: &[i64]| xs.iter().map(|&r| fmt.to_f64(r)).collect();
        SolverState {
            v: f(&self.v),
            xs: f(&self.xs),
            xl: f(&self.xl),
            t: self.t,
        }
    }

    pub fn assignment(&self) -> Vec<bool> {
        self.v.iter().map(|&r| r >= 0).collect()
    }
}

/// What happened in one interval of the schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntervalRecord {
    Clause {
        phase: usize,
        clause: usize,
        /// `(variable, raw voltage)` as read from the voltage RAM.
        reads: [(usize, i64); 3],
        c: i64,
        g: [i64; 3],
        r: [i64; 3],
        contrib: [i64; 3],
    },
    VoltageUpdate {
        phase: usize,
        writes: usize,
    },
}

impl IntervalRecord {
    pub fn phase(&self) -> usize {
        match self {
            IntervalRecord::Clause { phase, .. } | IntervalRecord::VoltageUpdate { phase, .. } => *phase,
        }
    }
}

pub trait ScheduleObserver {
    fn interval(&mut self, record: &IntervalRecord);
}

impl ScheduleObserver for () {
    #[inline]
    fn interval(&mut self, _: &IntervalRecord) {}
}

impl ScheduleObserver for Vec<IntervalRecord> {
    fn interval(&mut self, record: &IntervalRecord) {
        self.push(record.clone());
    }
}

/// Voltage block RAM with a one-step write delay.
#[derive(Debug, Clone)]
struct VoltageRam {
    data: Vec<i64>,
    staged: Vec<i64>,
}

impl VoltageRam {
    #[inline]
    fn read(&self, n: usize) -> i64 {
        self.data[n]
    }

    fn stage(&mut self, n: usize, raw: i64) {
        self.staged[n] = raw;
    }

    fn commit(&mut self) {
        std::mem::swap(&mut self.data, &mut self.staged);
    }
}

#[derive(Debug, Clone, Copy)]
struct Constants {
    one: i64,
    alpha: i64,
    beta: i64,
    gamma: i64,
    delta: i64,
    epsilon: i64,
    xs_hi: i64,
    zeta: i64,
    dt: i64,
    xl_max: i64,
}

/// Clause-serial fixed-point integrator for one instance.
#[derive(Debug, Clone)]
pub struct HwEmulator<'a> {
    instance: &'a Instance,
    config: HwConfig,
    mode: RigidityMode,
    k: Constants,
    acc: Vec<i64>,
    ram: VoltageRam,
    pub saturation: SaturationCounters,
}

impl<'a> HwEmulator<'a> {
    pub fn new(instance: &'a Instance, params: &Params, config: HwConfig) -> Result<Self, HwError> {
        config.validate(params)?;
        let q = |x: f64| config.value.quantize(x).raw;
        let k = Constants {
            one: config.value.one(),
            alpha: q(params.alpha),
            beta: q(params.beta),
            gamma: q(params.gamma),
            delta: q(params.delta),
            epsilon: q(params.epsilon),
            xs_hi: q(1.0 - params.epsilon),
            zeta: q(params.zeta),
            dt: q(params.dt),
            xl_max: config.wide.quantize(params.xl_max).raw,
        };
        let n = instance.num_vars();
        Ok(HwEmulator {
            instance,
            config,
            mode: params.rigidity,
            k,
            acc: vec![0; n],
            ram: VoltageRam {
                data: vec![0; n],
                staged: vec![0; n],
            },
            saturation: SaturationCounters::default(),
        })
    }

    pub fn config(&self) -> &HwConfig {
        &self.config
    }

    /// Quantizes a float state into the emulator's formats.
    pub fn quantize_state(&mut self, state: &SolverState<f64>) -> FixedState {
        let mut qv = |x: f64| {
            let q = self.config.value.quantize(x);
            self.saturation.value += q.saturated as u64;
            q.raw
        };
        let v = state.v.iter().map(|&x| qv(x)).collect();
        let xs = state.xs.iter().map(|&x| qv(x)).collect();
        let xl = state
            .xl
            .iter()
            .map(|&x| {
                let q = self.config.wide.quantize(x);
                self.saturation.wide += q.saturated as u64;
                q.raw
            })
            .collect();
        FixedState { v, xs, xl, t: state.t }
    }

    /// Initial conditions in fixed point: quantized uniform voltages,
    /// `xs = clamp(C_m)` computed in fixed point, `xl = 1`.
    pub fn initialize(&mut self, seed: u64) -> FixedState {
        let v: Vec<i64> = initial_voltages(self.instance.num_vars(), seed)
            .into_iter()
            .map(|x| {
                let q = self.config.value.quantize(x);
                self.saturation.value += q.saturated as u64;
                q.raw
            })
            .collect();
        let xs = (0..self.instance.num_clauses())
            .map(|m| {
                let t = self.literal_terms(m, |n| v[n]);
                let c = self.half(t[0].min(t[1]).min(t[2]));
                c.clamp(self.k.epsilon, self.k.xs_hi)
            })
            .collect();
        FixedState {
            v,
            xs,
            xl: vec![self.config.wide.one(); self.instance.num_clauses()],
            t: 0,
        }
    }

    #[inline]
    fn sat_value(&mut self, x: i128) -> i64 {
        let (r, s) = self.config.value.saturate(x);
        self.saturation.value += s as u64;
        r
    }

    #[inline]
    fn sat_wide(&mut self, x: i128) -> i64 {
        let (r, s) = self.config.wide.saturate(x);
        self.saturation.wide += s as u64;
        r
    }

    #[inline]
    fn product(&self, a: i64, b: i64) -> i128 {
        shift_round_even(a as i128 * b as i128, self.config.value.frac_bits)
    }

    #[inline]
    fn mul_value(&mut self, a: i64, b: i64) -> i64 {
        let p = self.product(a, b);
        self.sat_value(p)
    }

    #[inline]
    fn mul_wide(&mut self, a: i64, b: i64) -> i64 {
        let p = self.product(a, b);
        self.sat_wide(p)
    }

    #[inline]
    fn half(&self, a: i64) -> i64 {
        shift_round_even(a as i128, 1) as i64
    }

    #[inline]
    fn literal_terms(&mut self, m: usize, read: impl Fn(usize) -> i64) -> [i64; 3] {
        let one = self.k.one as i128;
        let lits = *self.instance.clause(m).literals();
        lits.map(|l| {
            let x = read(l.var) as i128;
            let t = if l.positive { one - x } else { one + x };
            self.sat_value(t)
        })
    }

    /// One macro step (`M + 1` intervals), reporting each interval to `observer`.
    pub fn scheduled_step<O: ScheduleObserver>(&mut self, state: &mut FixedState, observer: &mut O) {
        let m_count = self.instance.num_clauses();
        self.ram.data.clone_from(&state.v);
        self.ram.staged.clone_from(&state.v);
        self.acc.iter_mut().for_each(|a| *a = 0);
        let k = self.k;

        for m in 0..m_count {
            let lits = *self.instance.clause(m).literals();
            let reads = lits.map(|l| (l.var, self.ram.read(l.var)));
            let t = self.literal_terms(m, |n| {
                reads.iter().find(|(var, _)| *var == n).map(|r| r.1).unwrap_or(0)
            });
            let min = t[0].min(t[1]).min(t[2]);
            let c = self.half(min);

            let xs = state.xs[m];
            let xl = state.xl[m];
            let gw = self.mul_wide(xl, xs);
            let zx = self.mul_wide(k.zeta, xl);
            let one_plus = self.sat_wide(k.one as i128 + zx as i128);
            let one_minus = self.sat_value(k.one as i128 - xs as i128);
            let rw = self.mul_wide(one_plus, one_minus);

            let mut g = [0i64; 3];
            let mut r = [0i64; 3];
            let mut contrib = [0i64; 3];
            let mut rigid_taken = false;
            for s in 0..3 {
                let q = if lits[s].positive { k.one } else { -k.one };
                let half_min = self.half(t[(s + 1) % 3].min(t[(s + 2) % 3]));
                g[s] = if lits[s].positive { half_min } else { -half_min };
                let attains = t[s] == min;
                let gets_r = match self.mode {
                    RigidityMode::AllMinima => attains,
                    RigidityMode::FirstMinimum => attains && !rigid_taken,
                };
                if gets_r {
                    rigid_taken = true;
                    let diff = self.sat_value(q as i128 - reads[s].1 as i128);
                    r[s] = self.half(diff);
                }
                let a = self.mul_wide(gw, g[s]);
                let b = self.mul_wide(rw, r[s]);
                contrib[s] = self.sat_wide(a as i128 + b as i128);
                let var = lits[s].var;
                self.acc[var] = self.sat_wide(self.acc[var] as i128 + contrib[s] as i128);
            }

            // clause-local memories update inside their own interval
            let xs_eps = self.sat_value(xs as i128 + k.epsilon as i128);
            let c_gamma = self.sat_value(c as i128 - k.gamma as i128);
            let scaled = self.mul_value(k.beta, xs_eps);
            let dxs = self.mul_value(scaled, c_gamma);
            let step = self.mul_value(k.dt, dxs);
            let xs_next = self.sat_value(xs as i128 + step as i128);
            state.xs[m] = xs_next.clamp(k.epsilon, k.xs_hi);

            let c_delta = self.sat_value(c as i128 - k.delta as i128);
            let dxl = self.mul_value(k.alpha, c_delta);
            let step = self.mul_wide(k.dt, dxl);
            let xl_next = self.sat_wide(xl as i128 + step as i128);
            state.xl[m] = xl_next.clamp(k.one, k.xl_max);

            observer.interval(&IntervalRecord::Clause {
                phase: m,
                clause: m,
                reads,
                c,
                g,
                r,
                contrib,
            });
        }

        // interval M: voltage write-back
        for n in 0..self.instance.num_vars() {
            let step = self.mul_wide(k.dt, self.acc[n]);
            let next = self.sat_wide(self.ram.read(n) as i128 + step as i128);
            self.ram.stage(n, next.clamp(-k.one, k.one));
        }
        self.ram.commit();
        state.v.clone_from(&self.ram.data);
        state.t += 1;
        observer.interval(&IntervalRecord::VoltageUpdate {
            phase: m_count,
            writes: self.instance.num_vars(),
        });
    }
}

/// Intervals per macro step: one per clause plus the voltage write-back.
pub fn intervals_per_step(num_clauses: usize) -> u64 {
    num_clauses as u64 + 1
}

/// Runs the schedule to SAT or budget; `cycles = steps * (M + 1) * cycles_per_interval`.
pub fn solve_hw(instance: &Instance, config: &SolveConfig, hw: &HwConfig) -> Result<RunRecord, HwError> {
    config.validate().map_err(|e| HwError::Config(e.to_string()))?;
    let start = Instant::now();
    let mut emu = HwEmulator::new(instance, &config.params, *hw)?;
    let mut state = emu.initialize(config.seed);

    let check = |state: &FixedState| {
        let a = state.assignment();
        instance.evaluate(&a).expect("state matches instance").then_some(a)
    };
    let mut found = check(&state);
    while found.is_none() && state.t < config.max_steps {
        emu.scheduled_step(&mut state, &mut ());
        if state.t % config.check_every == 0 || state.t == config.max_steps {
            found = check(&state);
        }
    }

    Ok(RunRecord {
        outcome: if found.is_some() {
            Outcome::Sat
        } else {
            Outcome::BudgetExhausted
        },
        assignment: found,
        steps: state.t,
        wall_time_s: start.elapsed().as_secs_f64(),
        seed: config.seed,
        instance_digest: instance.digest(),
        num_vars: instance.num_vars(),
        num_clauses: instance.num_clauses(),
        engine: Engine::Hw,
        cycles: Some(state.t * intervals_per_step(instance.num_clauses()) * hw.cycles_per_interval),
        saturation: Some(emu.saturation),
    })
}

/// Solve count at one fraction width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPoint {
    pub frac_bits: u32,
    pub solved: usize,
    pub total: usize,
}

/// Solves every instance at each fraction width (value int bits fixed).
pub fn precision_sweep(
    instances: &[Instance],
    config: &SolveConfig,
    int_bits: u32,
    frac_bits: &[u32],
) -> Result<Vec<PrecisionPoint>, HwError> {
    frac_bits
        .iter()
        .map(|&f| {
            let hw = HwConfig::with_bits(int_bits, f)?;
            let mut solved = 0;
            for inst in instances {
                let mut cfg = *config;
                cfg.params.xl_max = 1e4 * inst.num_clauses().max(1) as f64;
                if solve_hw(inst, &cfg, &hw)?.is_sat() {
                    solved += 1;
                }
            }
            Ok(PrecisionPoint {
                frac_bits: f,
                solved,
                total: instances.len(),
            })
        })
        .collect()
}

/// Smallest width from which every wider width in the sweep solves everything.
pub fn precision_threshold(points: &[PrecisionPoint]) -> Option<u32> {
    let mut sorted = points.to_vec();
    sorted.sort_by_key(|p| p.frac_bits);
    let mut threshold = None;
    for p in sorted.iter().rev() {
        if p.solved == p.total {
            threshold = Some(p.frac_bits);
        } else {
            break;
        }
    }
    threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{Clause, Literal};

    #[test]
    fn quantize_examples() {
        let f8 = FixedPointFormat::new(3, 8).unwrap();
        assert_eq!(f8.quantize(0.5), Quantized { raw: 128, saturated: false });
        let f4 = FixedPointFormat::new(3, 4).unwrap();
        let q = f4.quantize(1.0 / 3.0);
        assert_eq!(q.raw, 5);
        assert_eq!(f4.to_f64(q.raw), 0.3125);
        let v_fmt = FixedPointFormat::new(1, 8).unwrap();
        let q = v_fmt.quantize(2.0);
        assert!(q.saturated);
        assert_eq!(q.raw, v_fmt.raw_max());
        assert_eq!(v_fmt.max_value(), 2.0 - 1.0 / 256.0);
        assert!(v_fmt.quantize(-5.0).saturated);
        assert_eq!(v_fmt.quantize(-2.0), Quantized { raw: -512, saturated: false });
    }

    #[test]
    fn quantize_rounds_ties_to_even() {
        let f = FixedPointFormat::new(3, 2).unwrap();
        assert_eq!(f.quantize(0.125).raw, 0); // 0.5 ulp -> even 0
        assert_eq!(f.quantize(0.375).raw, 2); // 1.5 ulp -> 2
        assert_eq!(f.quantize(-0.125).raw, 0);
        assert_eq!(f.quantize(-0.375).raw, -2);
    }

    #[test]
    fn shift_rounding_matches_float_rounding() {
        for x in -200i128..200 {
            for s in 1..5 {
                let expect = (x as f64 / (1u32 << s) as f64).round_ties_even() as i128;
                assert_eq!(shift_round_even(x, s), expect, "x={x} s={s}");
            }
        }
    }

    #[test]
    fn format_limits() {
        assert!(FixedPointFormat::new(40, 30).is_err());
        assert!(FixedPointFormat::new(3, 0).is_err());
        let f = FixedPointFormat::new(31, 32).unwrap();
        assert_eq!(f.raw_max(), i64::MAX);
        assert_eq!(f.raw_min(), i64::MIN);
        let d = HwConfig::default();
        assert_eq!(d.value.total_bits(), 32);
        assert_eq!(d.wide.total_bits(), 64);
    }

    #[test]
    fn validation_catches_narrow_formats() {
        let params = Params::with_ratio(4.3, 43);
        assert!(HwConfig::default().validate(&params).is_ok());
        // beta = 20 does not fit 4 integer bits
        let narrow = HwConfig::with_bits(4, 20).unwrap();
        assert!(matches!(narrow.validate(&params), Err(HwError::OutOfRange { what: "beta", .. })));
        let mut no_room = HwConfig::with_bits(11, 20).unwrap();
        no_room.wide = FixedPointFormat::new(12, 20).unwrap();
        assert!(matches!(no_room.validate(&params), Err(HwError::OutOfRange { what: "xl_max", .. })));
    }

    #[test]
    fn interval_count_is_m_plus_one() {
        let inst = Instance::new(
            4,
            vec![
                Clause::new([Literal::pos(0), Literal::neg(1), Literal::pos(2)]).unwrap(),
                Clause::new([Literal::neg(0), Literal::pos(3), Literal::pos(1)]).unwrap(),
            ],
        )
        .unwrap();
        let params = Params::for_instance(&inst);
        let mut emu = HwEmulator::new(&inst, &params, HwConfig::default()).unwrap();
        let mut state = emu.initialize(4);
        let mut log: Vec<IntervalRecord> = Vec::new();
        emu.scheduled_step(&mut state, &mut log);
        assert_eq!(log.len() as u64, intervals_per_step(inst.num_clauses()));
        for (i, rec) in log.iter().enumerate() {
            assert_eq!(rec.phase(), i);
        }
        assert!(matches!(log.last(), Some(IntervalRecord::VoltageUpdate { phase: 2, writes: 4 })));
    }

    #[test]
    fn cycle_count_for_thousand_steps() {
        assert_eq!(1000 * intervals_per_step(43), 44_000);
    }
}
