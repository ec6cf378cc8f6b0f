mod common;

use memsat::cnf::{parse_dimacs, serialize_dimacs};
use memsat::generator::{batch, generate, GeneratorConfig, PatternProbabilities};
use proptest::prelude::*;

use common::{eval_oracle, instance_strategy};

/// Negation count of each clause before the gauge flip, recovered from the
/// planted assignment: a literal was negated iff its polarity disagrees with
/// the planted value of its variable.
fn pre_flip_negations(p: &memsat::PlantedInstance) -> Vec<usize> {
    p.instance
        .clauses()
        .iter()
        .map(|c| {
            c.literals()
                .iter()
                .filter(|l| l.positive != p.planted[l.var])
                .count()
        })
        .collect()
}

#[test]
fn negation_pattern_frequencies_within_three_sigma() {
    let cfg = GeneratorConfig::new(50, 7.0, 1_000);
    let instances = batch(&cfg, 200).unwrap();
    let mut counts = [0usize; 4];
    for p in &instances {
        assert_eq!(p.instance.num_clauses(), 350);
        for k in pre_flip_negations(p) {
            counts[k] += 1;
        }
    }
    assert_eq!(counts[3], 0, "3-negation clause before flip");
    let total = (200 * 350) as f64;
    let expected = PatternProbabilities::from_p0(0.08).by_negations();
    for k in 0..3 {
        let p = expected[k];
        let sigma = (total * p * (1.0 - p)).sqrt();
        let dev = (counts[k] as f64 - total * p).abs();
        assert!(dev <= 3.0 * sigma, "k={k}: count {} expected {} (3 sigma = {})", counts[k], total * p, 3.0 * sigma);
    }
}

#[test]
fn generation_is_deterministic() {
    let cfg = GeneratorConfig::new(30, 4.3, 42);
    assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
    assert_eq!(
        serialize_dimacs(&generate(&cfg).unwrap().instance),
        serialize_dimacs(&generate(&cfg).unwrap().instance)
    );
    assert_ne!(generate(&cfg).unwrap(), generate(&cfg.with_seed(43)).unwrap());
}

#[test]
fn dimacs_round_trip_on_generated_instances() {
    for seed in 0..100 {
        let n = 3 + (seed as usize * 7) % 60;
        let p = generate(&GeneratorConfig::new(n, 4.3, seed)).unwrap();
        let text = serialize_dimacs(&p.instance);
        assert_eq!(parse_dimacs(&text).unwrap(), p.instance);
    }
}

proptest! {
    #[test]
    fn planted_solution_always_satisfies(n in 3usize..80, ratio in 0.5f64..9.0, p0 in 0.078f64..0.249, seed: u64) {
        let cfg = GeneratorConfig { num_vars: n, ratio, p0, seed };
        prop_assume!(cfg.num_clauses() >= 1);
        let p = generate(&cfg).unwrap();
        prop_assert!(eval_oracle(&p.instance, &p.planted));
        prop_assert!(p.instance.evaluate(&p.planted).unwrap());
        prop_assert!(pre_flip_negations(&p).iter().all(|&k| k < 3));
        for c in p.instance.clauses() {
            let [a, b, d] = c.literals();
            prop_assert!(a.var != b.var && a.var != d.var && b.var != d.var);
        }
    }

    #[test]
    fn dimacs_round_trip(inst in instance_strategy(40, 120)) {
        let parsed = parse_dimacs(&serialize_dimacs(&inst)).unwrap();
        prop_assert_eq!(&parsed, &inst);
        prop_assert_eq!(parsed.total_occurrences(), 3 * inst.num_clauses());
    }

    #[test]
    fn evaluate_agrees_with_oracle(inst in instance_strategy(12, 40), bits: u64) {
        let a: Vec<bool> = (0..inst.num_vars()).map(|i| bits >> i & 1 == 1).collect();
        prop_assert_eq!(inst.evaluate(&a).unwrap(), eval_oracle(&inst, &a));
        prop_assert_eq!(inst.evaluate(&a).unwrap(), inst.evaluate(&a).unwrap());
    }

    #[test]
    fn occurrence_index_is_exact_inverse(inst in instance_strategy(25, 80)) {
        let mut seen = 0;
        for n in 0..inst.num_vars() {
            let occ = inst.occurrences(n);
            prop_assert!(occ.windows(2).all(|w| w[0].clause < w[1].clause));
            for o in occ {
                prop_assert_eq!(inst.clause(o.clause as usize).literals()[o.slot as usize].var, n);
            }
            seen += occ.len();
        }
        prop_assert_eq!(seen, 3 * inst.num_clauses());
    }
}
