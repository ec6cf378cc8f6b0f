//! Planted hard random 3-SAT instances.
//!
//! Clauses are drawn against the all-true assignment with 0, 1 or 2 negated
//! literals (never 3), weighted by `p0`, `3*p1`, `3*p2`. A random gauge flip
//! then hides the planted solution. All randomness comes from a
//! `ChaCha8Rng` seeded with `seed_from_u64`, which is portable across
//! platforms; only `u32` ranges, booleans and `f64` draws are used.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Clause, Instance, Literal};

pub const DEFAULT_P0: f64 = 0.08;
pub const P0_MIN: f64 = 0.077;
pub const P0_MAX: f64 = 0.25;

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("p0 = {0} outside the hard region (0.077, 0.25)")]
    P0OutOfRange(f64),
    #[error("need at least 3 variables for distinct-variable clauses, got {0}")]
    TooFewVariables(usize),
    #[error("clause ratio must be finite and positive, got {0}")]
    InvalidRatio(f64),
    #[error("ratio {ratio} x {num_vars} variables rounds to zero clauses")]
    NoClauses { num_vars: usize, ratio: f64 },
    #[error("batch count must be at least 1")]
    EmptyBatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub num_vars: usize,
    pub ratio: f64,
    pub p0: f64,
    pub seed: u64,
}

/// Probabilities of a single negation pattern with 0, 1 and 2 negations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternProbabilities {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
}

impl PatternProbabilities {
    pub fn from_p0(p0: f64) -> Self {
        let p = PatternProbabilities {
            p0,
            p1: (1.0 - 4.0 * p0) / 6.0,
            p2: (1.0 + 2.0 * p0) / 6.0,
        };
        debug_assert!((p.p0 + 3.0 * p.p1 + 3.0 * p.p2 - 1.0).abs() < 1e-12);
        p
    }

    /// Probability of a clause with exactly 0, 1, 2 negated literals.
    pub fn by_negations(&self) -> [f64; 3] {
        [self.p0, 3.0 * self.p1, 3.0 * self.p2]
    }
}

impl GeneratorConfig {
    pub fn new(num_vars: usize, ratio: f64, seed: u64) -> Self {
        GeneratorConfig {
            num_vars,
            ratio,
            p0: DEFAULT_P0,
            seed,
        }
    }

    /// M = round(ratio * N).
    pub fn num_clauses(&self) -> usize {
        (self.ratio * self.num_vars as f64).round() as usize
    }

    pub fn probabilities(&self) -> PatternProbabilities {
        PatternProbabilities::from_p0(self.p0)
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        if !(self.p0 > P0_MIN && self.p0 < P0_MAX) {
            return Err(GeneratorError::P0OutOfRange(self.p0));
        }
        if self.num_vars < 3 {
            return Err(GeneratorError::TooFewVariables(self.num_vars));
        }
        if !(self.ratio.is_finite() && self.ratio > 0.0) {
            return Err(GeneratorError::InvalidRatio(self.ratio));
        }
        if self.num_clauses() == 0 {
            return Err(GeneratorError::NoClauses {
                num_vars: self.num_vars,
                ratio: self.ratio,
            });
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorConfig { seed, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub instance: Instance,
    pub planted: Vec<bool>,
    pub seed: u64,
}

pub fn generate(config: &GeneratorConfig) -> Result<PlantedInstance, GeneratorError> {
    config.validate()?;
    let n = config.num_vars;
    let m = config.num_clauses();
    let probs = config.probabilities();
    let one_negation = probs.p0 + 3.0 * probs.p1;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut raw: Vec<[Literal; 3]> = Vec::with_capacity(m);
    for _ in 0..m {
        let vars = distinct_triple(&mut rng, n as u32);
        let mut negated = [false; 3];
        let u: f64 = rng.random();
        if u < probs.p0 {
            // all positive
        } else if u < one_negation {
            negated[rng.random_range(0..3u32) as usize] = true;
        } else {
            let kept = rng.random_range(0..3u32) as usize;
            for (slot, neg) in negated.iter_mut().enumerate() {
                *neg = slot != kept;
            }
        }
        raw.push([0, 1, 2].map(|s| Literal::new(vars[s] as usize, !negated[s])));
    }

    // gauge flip: negate variable i everywhere together with its planted value
    let planted: Vec<bool> = (0..n).map(|_| !rng.random_bool(0.5)).collect();
    let clauses = raw
        .into_iter()
        .map(|lits| {
            let lits = lits.map(|l| if planted[l.var] { l } else { l.negated() });
            Clause::new(lits).expect("distinct variables by construction")
        })
        .collect();
    let instance = Instance::new(n, clauses).expect("variables in range by construction");

    Ok(PlantedInstance {
        instance,
        planted,
        seed: config.seed,
    })
}

/// `count` instances from consecutive seeds `seed, seed+1, ...`, unfiltered.
pub fn batch(config: &GeneratorConfig, count: usize) -> Result<Vec<PlantedInstance>, GeneratorError> {
    if count == 0 {
        return Err(GeneratorError::EmptyBatch);
    }
    (0..count as u64)
        .map(|i| generate(&config.with_seed(config.seed.wrapping_add(i))))
        .collect()
}

fn distinct_triple<R: Rng>(rng: &mut R, n: u32) -> [u32; 3] {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n);
    while b == a {
        b = rng.random_range(0..n);
    }
    let mut c = rng.random_range(0..n);
    while c == a || c == b {
        c = rng.random_range(0..n);
    }
    [a, b, c]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_probabilities_for_default_p0() {
        let p = PatternProbabilities::from_p0(0.08);
        assert!((p.p1 - 0.113_333_333_333_333_33).abs() < 1e-15);
        assert!((p.p2 - 0.193_333_333_333_333_33).abs() < 1e-15);
        let [a, b, c] = p.by_negations();
        assert!((a - 0.08).abs() < 1e-15);
        assert!((b - 0.34).abs() < 1e-15);
        assert!((c - 0.58).abs() < 1e-15);
        assert!((a + b + c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clause_count_rounds() {
        for (n, m) in [(10, 43), (30, 129), (50, 215), (70, 301), (90, 387)] {
            assert_eq!(GeneratorConfig::new(n, 4.3, 0).num_clauses(), m);
            assert_eq!(GeneratorConfig::new(n, 7.0, 0).num_clauses(), 7 * n);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let base = GeneratorConfig::new(10, 4.3, 1);
        assert_eq!(
            generate(&GeneratorConfig { p0: 0.077, ..base }),
            Err(GeneratorError::P0OutOfRange(0.077))
        );
        assert!(generate(&GeneratorConfig { p0: 0.25, ..base }).is_err());
        assert!(generate(&GeneratorConfig { num_vars: 2, ..base }).is_err());
        assert!(generate(&GeneratorConfig { ratio: 0.01, ..base }).is_err());
        assert!(generate(&GeneratorConfig { ratio: f64::NAN, ..base }).is_err());
        assert_eq!(batch(&base, 0), Err(GeneratorError::EmptyBatch));
    }

    #[test]
    fn planted_assignment_satisfies() {
        for seed in 0..50 {
            let p = generate(&GeneratorConfig::new(20, 7.0, seed)).unwrap();
            assert!(p.instance.evaluate(&p.planted).unwrap());
        }
    }

    #[test]
    fn batch_is_consecutive_seeds() {
        let cfg = GeneratorConfig::new(10, 4.3, 99);
        let b = batch(&cfg, 10).unwrap();
        assert_eq!(b.len(), 10);
        assert_eq!(b[0], generate(&cfg).unwrap());
        for (i, p) in b.iter().enumerate() {
            assert_eq!(p.seed, 99 + i as u64);
        }
        assert_ne!(b[0].instance, b[1].instance);
        assert_eq!(batch(&cfg, 10).unwrap(), b);
    }
}
