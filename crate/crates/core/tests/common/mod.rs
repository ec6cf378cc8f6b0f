//! Shared oracles and proptest strategies.
#![allow(dead_code)]

use memsat::cnf::{Clause, Instance, Literal};
use memsat::dynamics::{Params, SolverState};
use proptest::prelude::*;
use proptest::sample::subsequence;

/// Clause-by-clause satisfaction check written without the library evaluator.
pub fn eval_oracle(instance: &Instance, assignment: &[bool]) -> bool {
    assert_eq!(assignment.len(), instance.num_vars());
    for clause in instance.clauses() {
        let mut sat = false;
        for lit in clause.literals() {
            let value = assignment[lit.var];
            if (lit.positive && value) || (!lit.positive && !value) {
                sat = true;
            }
        }
        if !sat {
            return false;
        }
    }
    true
}

/// Naive O(N*M) double loop for `dv`, ascending clause index per variable.
pub fn brute_force_dv(instance: &Instance, state: &SolverState<f64>, params: &Params, first_only: bool) -> Vec<f64> {
    let mut dv = vec![0.0f64; instance.num_vars()];
    for (n, out) in dv.iter_mut().enumerate() {
        let mut acc = 0.0f64;
        for m in 0..instance.num_clauses() {
            let lits = instance.clause(m).literals();
            let Some(s) = lits.iter().position(|l| l.var == n) else {
                continue;
            };
            let term = |i: usize| {
                let q = if lits[i].positive { 1.0 } else { -1.0 };
                if q > 0.0 {
                    1.0 - state.v[lits[i].var]
                } else {
                    1.0 + state.v[lits[i].var]
                }
            };
            let t = [term(0), term(1), term(2)];
            let min = t[0].min(t[1]).min(t[2]);
            let q = if lits[s].positive { 1.0 } else { -1.0 };
            let others = t[(s + 1) % 3].min(t[(s + 2) % 3]);
            let g = 0.5 * others * q;
            let attains = if first_only {
                t.iter().position(|&x| x == min) == Some(s)
            } else {
                t[s] == min
            };
            let r = if attains { 0.5 * (q - state.v[n]) } else { 0.0 };
            let (xs, xl) = (state.xs[m], state.xl[m]);
            let contrib = (xl * xs) * g + ((1.0 + params.zeta * xl) * (1.0 - xs)) * r;
            acc += contrib;
        }
        *out = acc;
    }
    dv
}

/// All 8 clauses `(+-x, +-a, +-b)`: unsatisfiable over 3 variables.
pub fn padded_unsat() -> Instance {
    let mut clauses = Vec::new();
    for x in [true, false] {
        for a in [true, false] {
            for b in [true, false] {
                clauses.push(Clause::new([Literal::new(0, x), Literal::new(1, a), Literal::new(2, b)]).unwrap());
            }
        }
    }
    Instance::new(3, clauses).unwrap()
}

pub fn all_assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << n).map(move |bits| (0..n).map(|i| bits >> i & 1 == 1).collect())
}

fn clause_strategy(n: usize) -> impl Strategy<Value = Clause> {
    (
        subsequence((0..n).collect::<Vec<_>>(), 3).prop_shuffle(),
        any::<[bool; 3]>(),
    )
        .prop_map(|(vars, pol)| {
            Clause::new([
                Literal::new(vars[0], pol[0]),
                Literal::new(vars[1], pol[1]),
                Literal::new(vars[2], pol[2]),
            ])
            .unwrap()
        })
}

pub fn instance_strategy(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = Instance> {
    (3..=max_vars).prop_flat_map(move |n| {
        proptest::collection::vec(clause_strategy(n), 0..=max_clauses)
            .prop_map(move |clauses| Instance::new(n, clauses).unwrap())
    })
}

/// Voltages with boundary and zero values mixed in.
pub fn voltage() -> impl Strategy<Value = f64> {
    prop_oneof![
        1 => Just(-1.0),
        1 => Just(1.0),
        1 => Just(0.0),
        6 => -1.0f64..=1.0,
    ]
}

/// An instance with a random in-bounds state for default parameters.
pub fn instance_and_state(
    max_vars: usize,
    max_clauses: usize,
) -> impl Strategy<Value = (Instance, SolverState<f64>, Params)> {
    instance_strategy(max_vars, max_clauses).prop_flat_map(|inst| {
        let params = Params::for_instance(&inst);
        let n = inst.num_vars();
        let m = inst.num_clauses();
        let eps = params.epsilon;
        let xl_max = params.xl_max;
        (
            Just(inst),
            proptest::collection::vec(voltage(), n),
            proptest::collection::vec(prop_oneof![Just(eps), Just(1.0 - eps), eps..=1.0 - eps], m),
            proptest::collection::vec(prop_oneof![Just(1.0), Just(xl_max), 0.0f64..=xl_max.log10()], m),
            Just(params),
        )
            .prop_map(|(inst, v, xs, xl_raw, params)| {
                let xl = xl_raw
                    .into_iter()
                    .map(|x| if x == 1.0 || x == params.xl_max { x } else { 10f64.powf(x).clamp(1.0, params.xl_max) })
                    .collect();
                (inst, SolverState { v, xs, xl, t: 0 }, params)
            })
    })
}
