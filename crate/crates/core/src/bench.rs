//! Scaling sweeps, allometric fits, hardware-time projection and the LUT
//! resource model.
//!
//! Projected hardware time is a model (`steps * (M + 1)` clock cycles at
//! 100 MHz), not a measurement. Host wall time is reported next to it so the
//! two can be compared per instance.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::Params;
use crate::generator::{batch, GeneratorConfig, GeneratorError, DEFAULT_P0};
use crate::hwemu::{solve_hw, HwConfig, HwError};
use crate::solver::{solve, Engine, Outcome, Precision, SolveConfig, DEFAULT_MAX_STEPS};

pub const DEFAULT_CLOCK_HZ: f64 = 1e8;
pub const DEFAULT_SIZES: [usize; 5] = [10, 30, 50, 70, 90];
pub const DEFAULT_RATIOS: [f64; 2] = [4.3, 7.0];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Hw(#[from] HwError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub sizes: Vec<usize>,
    pub ratios: Vec<f64>,
    pub instances: usize,
    pub engine: Engine,
    pub base_seed: u64,
    pub p0: f64,
    pub max_steps: u64,
    pub dt: f64,
    pub check_every: u64,
    pub precision: Precision,
    /// Used only by the `hw` engine.
    pub hw: HwConfig,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            sizes: DEFAULT_SIZES.to_vec(),
            ratios: DEFAULT_RATIOS.to_vec(),
            instances: 10,
            engine: Engine::Float,
            base_seed: 0,
            p0: DEFAULT_P0,
            max_steps: DEFAULT_MAX_STEPS,
            dt: crate::dynamics::DEFAULT_DT,
            check_every: 1,
            precision: Precision::Float64,
            hw: HwConfig::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.sizes.is_empty() || self.ratios.is_empty() {
            return Err(BenchError::Domain("sweep needs at least one size and one ratio".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) || self.sizes[0] == 0 {
            return Err(BenchError::Domain("sizes must be positive and strictly ascending".into()));
        }
        if self.instances == 0 {
            return Err(BenchError::Domain("instances per point must be at least 1".into()));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// First generator seed of the batch at sweep point `(n, ratio)`.
pub fn point_seed(base_seed: u64, n: usize, ratio: f64) -> u64 {
    splitmix64(base_seed ^ splitmix64((n as u64) ^ ratio.to_bits().rotate_left(17)))
}

/// Initial-condition seed used to solve the instance generated from `instance_seed`.
pub fn solver_seed(instance_seed: u64) -> u64 {
    splitmix64(instance_seed)
}

/// One solved instance; field order is the export column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub ratio: f64,
    pub seed: u64,
    pub steps: u64,
    pub wall_s: f64,
    pub cycles: Option<u64>,
    pub projected_hw_s: f64,
    pub outcome: Outcome,
}

impl SweepRow {
    /// Host wall time over modeled hardware time.
    pub fn host_to_hw_ratio(&self) -> Option<f64> {
        (self.projected_hw_s > 0.0).then(|| self.wall_s / self.projected_hw_s)
    }
}

/// Generates every point's batch and solves it on the rayon pool.
///
/// Rows come back sorted by `(N, ratio, seed)`. Every SAT row has been
/// verified against its instance.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, BenchError> {
    spec.validate()?;
    let mut jobs = Vec::new();
    for &ratio in &spec.ratios {
        for &n in &spec.sizes {
            let cfg = GeneratorConfig {
                num_vars: n,
                ratio,
                p0: spec.p0,
                seed: point_seed(spec.base_seed, n, ratio),
            };
            for planted in batch(&cfg, spec.instances)? {
                jobs.push((n, ratio, planted));
            }
        }
    }

    let mut rows = jobs
        .par_iter()
        .map(|(n, ratio, planted)| {
            let inst = &planted.instance;
            let mut params = Params::for_instance(inst);
            params.dt = spec.dt;
            let config = SolveConfig {
                params,
                max_steps: spec.max_steps,
                check_every: spec.check_every,
                seed: solver_seed(planted.seed),
                precision: spec.precision,
            };
            let record = match spec.engine {
                Engine::Float => solve(inst, &config),
                Engine::Hw => solve_hw(inst, &config, &spec.hw)?,
            };
            if record.is_sat() && !record.verify(inst) {
                return Err(BenchError::Domain(format!(
                    "unverified SAT claim for N={n} seed={}",
                    planted.seed
                )));
            }
            Ok(SweepRow {
                n: *n,
                ratio: *ratio,
                seed: planted.seed,
                steps: record.steps,
                wall_s: record.wall_time_s,
                cycles: record.cycles,
                projected_hw_s: project_hw_time(
                    record.steps,
                    inst.num_clauses(),
                    DEFAULT_CLOCK_HZ,
                    spec.hw.cycles_per_interval,
                ),
                outcome: record.outcome,
            })
        })
        .collect::<Result<Vec<_>, BenchError>>()?;
    sort_rows(&mut rows);
    Ok(rows)
}

pub fn sort_rows(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| {
        (a.n, a.ratio, a.seed)
            .partial_cmp(&(b.n, b.ratio, b.seed))
            .expect("finite ratios")
    });
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let mid = values.len() / 2;
    Some(if values.len().is_multiple_of(2) {
        0.5 * (values[mid - 1] + values[mid])
    } else {
        values[mid]
    })
}

/// Which per-row quantity the medians are taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Steps,
    ProjectedHwSeconds,
    WallSeconds,
}

impl Metric {
    fn of(&self, row: &SweepRow) -> f64 {
        match self {
            Metric::Steps => row.steps as f64,
            Metric::ProjectedHwSeconds => row.projected_hw_s,
            Metric::WallSeconds => row.wall_s,
        }
    }
}

/// `(N, median)` pairs for one ratio, ascending in N.
pub fn medians(rows: &[SweepRow], ratio: f64, metric: Metric) -> Vec<(f64, f64)> {
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.ratio == ratio) {
        groups.entry(row.n).or_default().push(metric.of(row));
    }
    groups
        .into_iter()
        .filter_map(|(n, mut vals)| median(&mut vals).map(|m| (n as f64, m)))
        .collect()
}

/// Distinct ratios in first-seen order.
pub fn ratios_in(rows: &[SweepRow]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for r in rows {
        if !out.contains(&r.ratio) {
            out.push(r.ratio);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub exponent: f64,
    pub prefactor: f64,
    pub exponent_stderr: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

/// Least-squares line through `(ln N, ln median)`; `median ~ prefactor * N^exponent`.
pub fn fit_allometric(points: &[(f64, f64)]) -> Result<FitResult, BenchError> {
    if points.len() < 3 {
        return Err(BenchError::Domain(format!(
            "allometric fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(n, y)) = points.iter().find(|(n, y)| !(*n > 0.0 && *y > 0.0)) {
        return Err(BenchError::Domain(format!(
            "allometric fit needs positive values, got ({n}, {y})"
        )));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(BenchError::Domain("allometric fit needs at least two distinct N".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (k - 2.0) / sxx).sqrt();
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Ok(FitResult {
        exponent: slope,
        prefactor: intercept.exp(),
        exponent_stderr: stderr,
        r_squared,
        points: points.to_vec(),
    })
}

/// `steps * (M + 1) * cycles_per_interval / clock_hz` seconds.
pub fn project_hw_time(steps: u64, num_clauses: usize, clock_hz: f64, cycles_per_interval: u64) -> f64 {
    let cycles = steps as u128 * (num_clauses as u128 + 1) * cycles_per_interval as u128;
    cycles as f64 / clock_hz
}

/// Piecewise-linear LUT usage: `f1` below the crossover, `f2` from it on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceModel {
    pub f1_intercept: f64,
    pub f1_slope: f64,
    pub f2_intercept: f64,
    pub f2_slope: f64,
    pub boards: BTreeMap<String, u64>,
}

impl Default for ResourceModel {
    fn default() -> Self {
        let boards = [
            ("XC7A100T", 63_400),
            ("VU9P", 1_182_000),
            ("VU19P", 4_086_000),
            ("GX10M", 10_000_000),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        ResourceModel {
            f1_intercept: 5226.0,
            f1_slope: 582.0,
            f2_intercept: 134_147.0,
            f2_slope: 132.0,
            boards,
        }
    }
}

impl ResourceModel {
    pub fn f1(&self, n: f64) -> f64 {
        self.f1_intercept + self.f1_slope * n
    }

    pub fn f2(&self, n: f64) -> f64 {
        self.f2_intercept + self.f2_slope * n
    }

    /// N* with f1(N*) = f2(N*).
    pub fn crossover(&self) -> f64 {
        (self.f2_intercept - self.f1_intercept) / (self.f1_slope - self.f2_slope)
    }

    pub fn estimate_luts(&self, n: usize) -> f64 {
        let x = n as f64;
        if x < self.crossover() {
            self.f1(x)
        } else {
            self.f2(x)
        }
    }

    /// Largest N whose estimate fits in `capacity` LUTs.
    pub fn max_vars(&self, capacity: u64) -> Option<usize> {
        let cap = capacity as f64;
        let cross = self.crossover();
        let below = ((cap - self.f1_intercept) / self.f1_slope).floor();
        let below = below.min(cross.ceil() - 1.0);
        let above = ((cap - self.f2_intercept) / self.f2_slope).floor();
        let above = (above >= cross.ceil()).then_some(above);
        let best = match above {
            Some(a) => a,
            None => below,
        };
        (best >= 1.0).then_some(best as usize)
    }

    pub fn board(&self, name: &str) -> Option<u64> {
        self.boards
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| *v)
    }
}

pub fn estimate_luts(n: usize, model: &ResourceModel) -> f64 {
    model.estimate_luts(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Json,
}

pub fn export_results(rows: &[SweepRow], format: ExportFormat) -> Result<String, BenchError> {
    if rows.is_empty() {
        return Err(BenchError::Domain("nothing to export".into()));
    }
    match format {
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            let bytes = w.into_inner().map_err(|e| BenchError::Domain(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| BenchError::Domain(e.to_string()))
        }
        ExportFormat::Json => Ok(serde_json::to_string_pretty(rows)?),
    }
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, BenchError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<Vec<SweepRow>, _>>()?)
}

pub fn parse_json(text: &str) -> Result<Vec<SweepRow>, BenchError> {
    Ok(serde_json::from_str(text)?)
}
