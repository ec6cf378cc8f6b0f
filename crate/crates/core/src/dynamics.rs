//! Right-hand sides of the memcomputing ODEs and the forward Euler map.
//!
//! For clause `m` with literal terms `t_s = 1 - q_s v_s` (s = 0, 1, 2):
//!
//! ```text
//! C_m    = 1/2 min(t_0, t_1, t_2)
//! G_s    = 1/2 q_s min(t_other, t_other')
//! R_s    = 1/2 (q_s - v_s)  if t_s attains the minimum, else 0
//! dv_n   = sum over m containing n of  xl_m xs_m G + (1 + zeta xl_m)(1 - xs_m) R
//! dxs_m  = beta (xs_m + eps)(C_m - gamma)
//! dxl_m  = alpha (C_m - delta)
//! ```
//!
//! `v` lives in `[-1, 1]`, `xs` in `[eps, 1 - eps]` and `xl` in `[1, xl_max]`.

use std::fmt::Debug;

use num_traits::Float;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Clause, Instance};

/// Clause count above which derivative passes run on the rayon pool.
pub const PARALLEL_CLAUSE_THRESHOLD: usize = 1 << 14;

/// Default Euler step, 2^-5: exact in binary floating and fixed point.
pub const DEFAULT_DT: f64 = 1.0 / 32.0;

/// Clause/variable ratio at which the default `zeta` switches from 0.001 to 0.1.
pub const ZETA_SPLIT_RATIO: f64 = 5.65;

pub trait Real: Float + Send + Sync + Debug + Default + 'static {
    fn of(x: f64) -> Self;
}

impl Real for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
}

impl Real for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("variable {var} does not occur in clause {clause}")]
    NotInClause { var: usize, clause: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("state shape does not match instance ({0})")]
    ShapeMismatch(String),
}

/// Which literals receive the rigidity term when several attain the clause minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigidityMode {
    /// Every minimum-attaining literal.
    #[default]
    AllMinima,
    /// Only the lowest slot attaining the minimum.
    FirstMinimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub zeta: f64,
    pub dt: f64,
    pub xl_max: f64,
    #[serde(default)]
    pub rigidity: RigidityMode,
}

impl Params {
    /// Published constants with `zeta` picked by clause ratio and
    /// `xl_max = 1e4 * M`.
    pub fn for_instance(instance: &Instance) -> Self {
        Self::with_ratio(instance.ratio(), instance.num_clauses())
    }

    pub fn with_ratio(ratio: f64, num_clauses: usize) -> Self {
        Params {
            alpha: 5.0,
            beta: 20.0,
            gamma: 0.25,
            delta: 0.05,
            epsilon: 1e-3,
            zeta: default_zeta(ratio),
            dt: DEFAULT_DT,
            xl_max: 1e4 * num_clauses.max(1) as f64,
            rigidity: RigidityMode::AllMinima,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let named = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("epsilon", self.epsilon),
            ("zeta", self.zeta),
            ("dt", self.dt),
        ];
        for (name, value) in named {
            if !(value.is_finite() && value > 0.0) {
                return Err(DynamicsError::InvalidParams(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        if self.epsilon >= 0.5 {
            return Err(DynamicsError::InvalidParams(format!(
                "epsilon must be below 0.5, got {}",
                self.epsilon
            )));
        }
        if !(self.xl_max.is_finite() && self.xl_max >= 1.0) {
            return Err(DynamicsError::InvalidParams(format!(
                "xl_max must be at least 1, got {}",
                self.xl_max
            )));
        }
        Ok(())
    }
}

pub fn default_zeta(ratio: f64) -> f64 {
    if ratio >= ZETA_SPLIT_RATIO {
        0.1
    } else {
        0.001
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState<F> {
    pub v: Vec<F>,
    pub xs: Vec<F>,
    pub xl: Vec<F>,
    pub t: u64,
}

impl<F: Real> SolverState<F> {
    /// True when every component is inside its clamp interval.
    pub fn within_bounds(&self, params: &Params) -> bool {
        let (lo_s, hi_s) = (F::of(params.epsilon), F::of(1.0 - params.epsilon));
        let xl_max = F::of(params.xl_max);
        self.v.iter().all(|&v| v >= -F::one() && v <= F::one())
            && self.xs.iter().all(|&x| x >= lo_s && x <= hi_s)
            && self.xl.iter().all(|&x| x >= F::one() && x <= xl_max)
    }

    pub fn check_shape(&self, instance: &Instance) -> Result<(), DynamicsError> {
        if self.v.len() != instance.num_vars()
            || self.xs.len() != instance.num_clauses()
            || self.xl.len() != instance.num_clauses()
        {
            return Err(DynamicsError::ShapeMismatch(format!(
                "v={}, xs={}, xl={} for N={}, M={}",
                self.v.len(),
                self.xs.len(),
                self.xl.len(),
                instance.num_vars(),
                instance.num_clauses()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivatives<F> {
    pub dv: Vec<F>,
    pub dxs: Vec<F>,
    pub dxl: Vec<F>,
}

/// Per-clause evaluation: clause function plus the `dv` contribution for each slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClauseEval<F> {
    pub c: F,
    pub g: [F; 3],
    pub r: [F; 3],
    pub contrib: [F; 3],
}

#[inline]
fn literal_terms<F: Real>(clause: &Clause, v: &[F]) -> [F; 3] {
    clause.literals().map(|l| {
        let x = v[l.var];
        if l.positive {
            F::one() - x
        } else {
            F::one() + x
        }
    })
}

#[inline]
fn q_of<F: Real>(positive: bool) -> F {
    if positive {
        F::one()
    } else {
        -F::one()
    }
}

#[inline]
fn half<F: Real>() -> F {
    F::of(0.5)
}

/// Evaluates `C_m`, `G` and `R` for all three slots, and their `dv` contributions.
#[inline]
pub fn eval_clause<F: Real>(
    clause: &Clause,
    v: &[F],
    xs: F,
    xl: F,
    zeta: F,
    mode: RigidityMode,
) -> ClauseEval<F> {
    let t = literal_terms(clause, v);
    let min = t[0].min(t[1]).min(t[2]);
    let lits = clause.literals();
    let mut g = [F::zero(); 3];
    let mut r = [F::zero(); 3];
    let mut rigid_taken = false;
    for s in 0..3 {
        let q = q_of::<F>(lits[s].positive);
        let others = t[(s + 1) % 3].min(t[(s + 2) % 3]);
        g[s] = half::<F>() * others * q;
        let attains = t[s] == min;
        let gets_r = match mode {
            RigidityMode::AllMinima => attains,
            RigidityMode::FirstMinimum => attains && !rigid_taken,
        };
        if gets_r {
            rigid_taken = true;
            r[s] = half::<F>() * (q - v[lits[s].var]);
        }
    }
    let gw = xl * xs;
    let rw = (F::one() + zeta * xl) * (F::one() - xs);
    let contrib = [0, 1, 2].map(|s| gw * g[s] + rw * r[s]);
    ClauseEval {
        c: half::<F>() * min,
        g,
        r,
        contrib,
    }
}

/// `C_m`, in `[0, 1]` for `v` in `[-1, 1]`.
pub fn clause_value<F: Real>(instance: &Instance, v: &[F], m: usize) -> F {
    let t = literal_terms(instance.clause(m), v);
    half::<F>() * t[0].min(t[1]).min(t[2])
}

/// `G_{n,m}`: pull on variable `n` from clause `m`, gated by the other two literals.
pub fn gradient_term<F: Real>(
    instance: &Instance,
    v: &[F],
    m: usize,
    n: usize,
) -> Result<F, DynamicsError> {
    let clause = instance.clause(m);
    let s = clause
        .slot_of(n)
        .ok_or(DynamicsError::NotInClause { var: n, clause: m })?;
    let t = literal_terms(clause, v);
    let q = q_of::<F>(clause.literals()[s].positive);
    Ok(half::<F>() * t[(s + 1) % 3].min(t[(s + 2) % 3]) * q)
}

/// `R_{n,m}`: nonzero only when literal `n` attains the clause minimum.
pub fn rigidity_term<F: Real>(
    instance: &Instance,
    v: &[F],
    m: usize,
    n: usize,
    mode: RigidityMode,
) -> Result<F, DynamicsError> {
    let clause = instance.clause(m);
    let s = clause
        .slot_of(n)
        .ok_or(DynamicsError::NotInClause { var: n, clause: m })?;
    let eval = eval_clause(clause, v, F::zero(), F::zero(), F::zero(), mode);
    Ok(eval.r[s])
}

/// Scratch buffers reused across steps.
#[derive(Debug, Clone)]
pub struct Workspace<F> {
    contrib: Vec<[F; 3]>,
    pub deriv: Derivatives<F>,
}

impl<F: Real> Workspace<F> {
    pub fn new(instance: &Instance) -> Self {
        let m = instance.num_clauses();
        Workspace {
            contrib: vec![[F::zero(); 3]; m],
            deriv: Derivatives {
                dv: vec![F::zero(); instance.num_vars()],
                dxs: vec![F::zero(); m],
                dxl: vec![F::zero(); m],
            },
        }
    }
}

/// Computes all derivatives into `ws.deriv`.
///
/// Clauses are evaluated independently (in parallel for large `M`); each
/// `dv_n` is then gathered through the occurrence index in ascending clause
/// order, so the result is bit-identical for any thread count.
pub fn derivatives_into<F: Real>(
    instance: &Instance,
    state: &SolverState<F>,
    params: &Params,
    ws: &mut Workspace<F>,
) {
    let m = instance.num_clauses();
    if ws.contrib.len() != m || ws.deriv.dv.len() != instance.num_vars() {
        *ws = Workspace::new(instance);
    }
    let zeta = F::of(params.zeta);
    let (alpha, beta) = (F::of(params.alpha), F::of(params.beta));
    let (gamma, delta, eps) = (F::of(params.gamma), F::of(params.delta), F::of(params.epsilon));
    let mode = params.rigidity;
    let v = &state.v;

    let clause_pass = |(idx, ((contrib, dxs), dxl)): (usize, ((&mut [F; 3], &mut F), &mut F))| {
        let xs = state.xs[idx];
        let eval = eval_clause(instance.clause(idx), v, xs, state.xl[idx], zeta, mode);
        *contrib = eval.contrib;
        *dxs = beta * (xs + eps) * (eval.c - gamma);
        *dxl = alpha * (eval.c - delta);
    };
    let Derivatives { dv, dxs, dxl } = &mut ws.deriv;
    if m >= PARALLEL_CLAUSE_THRESHOLD {
        ws.contrib
            .par_iter_mut()
            .zip(dxs.par_iter_mut())
            .zip(dxl.par_iter_mut())
            .enumerate()
            .for_each(clause_pass);
    } else {
        ws.contrib
            .iter_mut()
            .zip(dxs.iter_mut())
            .zip(dxl.iter_mut())
            .enumerate()
            .for_each(clause_pass);
    }

    let contrib = &ws.contrib;
    let gather = |(n, out): (usize, &mut F)| {
        let mut acc = F::zero();
        for occ in instance.occurrences(n) {
            acc = acc + contrib[occ.clause as usize][occ.slot as usize];
        }
        *out = acc;
    };
    if m >= PARALLEL_CLAUSE_THRESHOLD {
        dv.par_iter_mut().enumerate().for_each(gather);
    } else {
        dv.iter_mut().enumerate().for_each(gather);
    }
}

pub fn derivatives<F: Real>(
    instance: &Instance,
    state: &SolverState<F>,
    params: &Params,
) -> Derivatives<F> {
    let mut ws = Workspace::new(instance);
    derivatives_into(instance, state, params, &mut ws);
    ws.deriv
}

/// Applies `s + dt * ds` followed by the componentwise clamps.
pub fn apply_update<F: Real>(state: &mut SolverState<F>, deriv: &Derivatives<F>, params: &Params) {
    let dt = F::of(params.dt);
    let one = F::one();
    let (lo_s, hi_s) = (F::of(params.epsilon), F::of(1.0 - params.epsilon));
    let xl_max = F::of(params.xl_max);
    for (v, &d) in state.v.iter_mut().zip(&deriv.dv) {
        *v = (*v + dt * d).max(-one).min(one);
    }
    for (x, &d) in state.xs.iter_mut().zip(&deriv.dxs) {
        *x = (*x + dt * d).max(lo_s).min(hi_s);
    }
    for (x, &d) in state.xl.iter_mut().zip(&deriv.dxl) {
        *x = (*x + dt * d).max(one).min(xl_max);
    }
    state.t += 1;
}

pub fn euler_step_in_place<F: Real>(
    instance: &Instance,
    state: &mut SolverState<F>,
    params: &Params,
    ws: &mut Workspace<F>,
) {
    derivatives_into(instance, state, params, ws);
    apply_update(state, &ws.deriv, params);
}

/// One forward Euler step at constant `dt`, clamped after the full update.
pub fn euler_step<F: Real>(instance: &Instance, state: &SolverState<F>, params: &Params) -> SolverState<F> {
    let mut next = state.clone();
    let mut ws = Workspace::new(instance);
    euler_step_in_place(instance, &mut next, params, &mut ws);
    next
}

/// Boolean value of each variable: true iff `v_n >= 0`.
pub fn extract_assignment<F: Real>(v: &[F]) -> Vec<bool> {
    v.iter().map(|&x| x >= F::zero()).collect()
}
