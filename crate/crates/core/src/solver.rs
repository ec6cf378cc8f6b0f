//! Full solves: initial conditions, the stepping loop and run records.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cnf::Instance;
use crate::dynamics::{
    clause_value, euler_step_in_place, extract_assignment, DynamicsError, Params, Real, SolverState,
    Workspace,
};

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Float32,
    #[default]
    Float64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Float,
    Hw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub params: Params,
    pub max_steps: u64,
    pub check_every: u64,
    pub seed: u64,
    pub precision: Precision,
}

impl SolveConfig {
    /// Published parameters for this instance, `check_every = 1`, a 10^7 step budget.
    pub fn for_instance(instance: &Instance, seed: u64) -> Self {
        SolveConfig {
            params: Params::for_instance(instance),
            max_steps: DEFAULT_MAX_STEPS,
            check_every: 1,
            seed,
            precision: Precision::Float64,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        self.params.validate()?;
        if self.max_steps == 0 {
            return Err(DynamicsError::InvalidParams("max_steps must be at least 1".into()));
        }
        if self.check_every == 0 {
            return Err(DynamicsError::InvalidParams("check_every must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Sat,
    BudgetExhausted,
}

/// Counts of fixed-point saturation events, per quantity class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SaturationCounters {
    pub value: u64,
    pub wide: u64,
}

impl SaturationCounters {
    pub fn total(&self) -> u64 {
        self.value + self.wide
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub outcome: Outcome,
    pub assignment: Option<Vec<bool>>,
    pub steps: u64,
    pub wall_time_s: f64,
    pub seed: u64,
    pub instance_digest: String,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub engine: Engine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation: Option<SaturationCounters>,
}

impl RunRecord {
    pub fn is_sat(&self) -> bool {
        self.outcome == Outcome::Sat
    }

    /// Checks a SAT record against the instance with the Boolean evaluator.
    pub fn verify(&self, instance: &Instance) -> bool {
        match (&self.outcome, &self.assignment) {
            (Outcome::Sat, Some(a)) => instance.evaluate(a).unwrap_or(false),
            (Outcome::Sat, None) => false,
            (Outcome::BudgetExhausted, _) => true,
        }
    }

    /// Equality of everything except wall time.
    pub fn same_result(&self, other: &RunRecord) -> bool {
        RunRecord {
            wall_time_s: 0.0,
            ..self.clone()
        } == RunRecord {
            wall_time_s: 0.0,
            ..other.clone()
        }
    }
}

/// Diagnostic sample of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: u64,
    pub unsat: usize,
    pub max_c: f64,
    pub max_xl: f64,
}

/// Initial voltages drawn uniformly from `[-1, 1]`.
pub fn initial_voltages(num_vars: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num_vars)
        .map(|_| 2.0 * rng.random::<f64>() - 1.0)
        .collect()
}

/// `xl = 1`, `xs = clamp(C_m(v0), eps, 1 - eps)`, `t = 0`.
pub fn initialize<F: Real>(instance: &Instance, config: &SolveConfig) -> SolverState<F> {
    let v: Vec<F> = initial_voltages(instance.num_vars(), config.seed)
        .into_iter()
        .map(F::of)
        .collect();
    let (lo, hi) = (F::of(config.params.epsilon), F::of(1.0 - config.params.epsilon));
    let xs = (0..instance.num_clauses())
        .map(|m| clause_value(instance, &v, m).max(lo).min(hi))
        .collect();
    SolverState {
        v,
        xs,
        xl: vec![F::one(); instance.num_clauses()],
        t: 0,
    }
}

fn trace_row<F: Real>(instance: &Instance, state: &SolverState<F>) -> TraceRow {
    let assignment = extract_assignment(&state.v);
    let unsat = instance
        .count_unsatisfied(&assignment)
        .expect("state matches instance");
    let max_c = (0..instance.num_clauses())
        .map(|m| clause_value(instance, &state.v, m).to_f64().unwrap_or(f64::NAN))
        .fold(0.0, f64::max);
    let max_xl = state
        .xl
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::NAN))
        .fold(0.0, f64::max);
    TraceRow {
        t: state.t,
        unsat,
        max_c,
        max_xl,
    }
}

fn run<F: Real>(
    instance: &Instance,
    config: &SolveConfig,
    mut trace: Option<(u64, &mut Vec<TraceRow>)>,
) -> RunRecord {
    let start = Instant::now();
    let mut state = initialize::<F>(instance, config);
    let mut ws = Workspace::new(instance);

    let check = |state: &SolverState<F>| {
        let a = extract_assignment(&state.v);
        instance.evaluate(&a).expect("state matches instance").then_some(a)
    };

    let mut found = check(&state);
    while found.is_none() && state.t < config.max_steps {
        euler_step_in_place(instance, &mut state, &config.params, &mut ws);
        if state.t.is_multiple_of(config.check_every) || state.t == config.max_steps {
            found = check(&state);
        }
        if let Some((every, rows)) = trace.as_mut() {
            let last = found.is_some() || state.t == config.max_steps;
            if state.t.is_multiple_of(*every) || last {
                rows.push(trace_row(instance, &state));
            }
        }
    }

    RunRecord {
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
        engine: Engine::Float,
        cycles: None,
        saturation: None,
    }
}

/// Integrates until the sign assignment satisfies every clause or the budget runs out.
///
/// The assignment is tested at `t = 0`, every `check_every` steps and at the
/// final budget step. A SAT outcome always carries an assignment that passed
/// [`Instance::evaluate`].
pub fn solve(instance: &Instance, config: &SolveConfig) -> RunRecord {
    match config.precision {
        Precision::Float64 => run::<f64>(instance, config, None),
        Precision::Float32 => run::<f32>(instance, config, None),
    }
}

/// As [`solve`], also sampling `(t, unsat, max C, max xl)` every `trace_every`
/// steps and at the final step.
pub fn solve_traced(
    instance: &Instance,
    config: &SolveConfig,
    trace_every: u64,
) -> (RunRecord, Vec<TraceRow>) {
    let every = trace_every.max(1);
    let mut rows = Vec::new();
    let record = match config.precision {
        Precision::Float64 => run::<f64>(instance, config, Some((every, &mut rows))),
        Precision::Float32 => run::<f32>(instance, config, Some((every, &mut rows))),
    };
    (record, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{Clause, Literal};
    use crate::generator::{generate, GeneratorConfig};

    #[test]
    fn initial_state_follows_prescription() {
        let p = generate(&GeneratorConfig::new(20, 4.3, 3)).unwrap();
        let cfg = SolveConfig::for_instance(&p.instance, 11);
        let s = initialize::<f64>(&p.instance, &cfg);
        assert!(s.xl.iter().all(|&x| x == 1.0));
        assert!(s.v.iter().all(|&v| (-1.0..=1.0).contains(&v)));
        for m in 0..p.instance.num_clauses() {
            let c = clause_value(&p.instance, &s.v, m);
            assert_eq!(s.xs[m], c.clamp(1e-3, 1.0 - 1e-3));
        }
        assert_eq!(s, initialize::<f64>(&p.instance, &cfg));
        assert_eq!(s.t, 0);
    }

    #[test]
    fn exactly_satisfied_clause_starts_at_epsilon() {
        let inst = Instance::new(3, vec![Clause::new([Literal::pos(0), Literal::pos(1), Literal::pos(2)]).unwrap()]).unwrap();
        let cfg = SolveConfig::for_instance(&inst, 0);
        let mut s = initialize::<f64>(&inst, &cfg);
        s.v[0] = 1.0;
        let c = clause_value(&inst, &s.v, 0);
        assert_eq!(c, 0.0);
        assert_eq!(c.clamp(cfg.params.epsilon, 1.0 - cfg.params.epsilon), 1e-3);
    }

    #[test]
    fn trivially_satisfied_instance_detected_at_first_check() {
        // every polarity pattern except all-negative: any assignment with a true variable works
        let inst = Instance::new(3, vec![Clause::new([Literal::pos(0), Literal::pos(1), Literal::pos(2)]).unwrap()]).unwrap();
        let mut seed = 0;
        loop {
            let v = initial_voltages(3, seed);
            if v.iter().any(|&x| x >= 0.0) {
                break;
            }
            seed += 1;
        }
        let mut cfg = SolveConfig::for_instance(&inst, seed);
        cfg.check_every = 4;
        let rec = solve(&inst, &cfg);
        assert!(rec.is_sat());
        assert!(rec.steps <= cfg.check_every);
        assert!(rec.verify(&inst));
    }

    #[test]
    fn float32_path_solves_small_instance() {
        let p = generate(&GeneratorConfig::new(10, 4.3, 5)).unwrap();
        let mut cfg = SolveConfig::for_instance(&p.instance, 2);
        cfg.precision = Precision::Float32;
        cfg.max_steps = 1_000_000;
        let rec = solve(&p.instance, &cfg);
        assert!(rec.is_sat());
        assert!(rec.verify(&p.instance));
    }

    #[test]
    fn config_validation() {
        let p = generate(&GeneratorConfig::new(10, 4.3, 5)).unwrap();
        let mut cfg = SolveConfig::for_instance(&p.instance, 2);
        assert!(cfg.validate().is_ok());
        cfg.check_every = 0;
        assert!(cfg.validate().is_err());
        cfg.check_every = 1;
        cfg.max_steps = 0;
        assert!(cfg.validate().is_err());
    }
}
