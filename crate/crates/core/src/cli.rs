//! Command-line front end: `generate`, `solve`, `bench`, `fit`, `estimate-luts`.
//!
//! Exit codes: 0 success, 1 solve ended with the budget exhausted, 2 usage,
//! parse or I/O errors. Machine-readable output goes to stdout (or `--out`),
//! human summaries to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bench::{
    self, export_results, fit_allometric, medians, parse_csv, parse_json, ratios_in, run_sweep,
    ExportFormat, Metric, ResourceModel, SweepSpec,
};
use crate::cnf::{read_dimacs, Instance};
use crate::dynamics::{Params, RigidityMode};
use crate::generator::{generate, GeneratorConfig, DEFAULT_P0};
use crate::hwemu::{solve_hw, HwConfig, DEFAULT_FRAC_BITS, DEFAULT_VALUE_INT_BITS};
use crate::solver::{solve, solve_traced, Engine, Precision, RunRecord, SolveConfig, TraceRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BUDGET: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "memsat", version, about = "Digital memcomputing 3-SAT solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a planted hard 3-SAT instance (DIMACS + JSON sidecar).
    Generate(GenerateArgs),
    /// Solve a DIMACS instance with the float or fixed-point engine.
    Solve(SolveArgs),
    /// Run a scaling sweep and export per-instance records.
    Bench(BenchArgs),
    /// Fit median-vs-N power laws to an exported sweep.
    Fit(FitArgs),
    /// Estimate LUT usage for N variables.
    EstimateLuts(LutArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(short = 'N', long = "num-vars")]
    pub num_vars: usize,
    /// Clause-to-variable ratio M/N.
    #[arg(short = 'r', long, default_value_t = 4.3)]
    pub ratio: f64,
    #[arg(long, default_value_t = DEFAULT_P0)]
    pub p0: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// DIMACS output path; stdout when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Sidecar path; defaults to the DIMACS path with a `.json` extension.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum EngineArg {
    Float,
    Hw,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum PrecisionArg {
    F32,
    F64,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum RigidityArg {
    All,
    First,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum MetricArg {
    Steps,
    HwTime,
    WallTime,
}

#[derive(Debug, Args, Default)]
pub struct ParamOverrides {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub xl_max: Option<f64>,
    #[arg(long, value_enum)]
    pub rigidity: Option<RigidityArg>,
}

impl ParamOverrides {
    fn apply(&self, mut p: Params) -> Params {
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut p.alpha, self.alpha);
        set(&mut p.beta, self.beta);
        set(&mut p.gamma, self.gamma);
        set(&mut p.delta, self.delta);
        set(&mut p.epsilon, self.epsilon);
        set(&mut p.zeta, self.zeta);
        set(&mut p.dt, self.dt);
        set(&mut p.xl_max, self.xl_max);
        if let Some(r) = self.rigidity {
            p.rigidity = match r {
                RigidityArg::All => RigidityMode::AllMinima,
                RigidityArg::First => RigidityMode::FirstMinimum,
            };
        }
        p
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// DIMACS instance; may be omitted with --replay.
    pub instance: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::solver::DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    #[arg(long, default_value_t = 1)]
    pub check_every: u64,
    #[arg(long, value_enum, default_value_t = PrecisionArg::F64)]
    pub precision: PrecisionArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Float)]
    pub engine: EngineArg,
    /// Integer bits of the hw value format (sign bit excluded).
    #[arg(long, default_value_t = DEFAULT_VALUE_INT_BITS)]
    pub int_bits: u32,
    #[arg(long, default_value_t = DEFAULT_FRAC_BITS)]
    pub frac_bits: u32,
    #[arg(long, default_value_t = 1)]
    pub cycles_per_interval: u64,
    #[command(flatten)]
    pub params: ParamOverrides,
    /// Write a CSV trace of (t, unsat, max_c, max_xl); float engine only.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub trace_every: u64,
    /// Re-run the resolved configuration stored in a previous solve output.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_SIZES.to_vec())]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_RATIOS.to_vec())]
    pub ratios: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::Float)]
    pub engine: EngineArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_P0)]
    pub p0: f64,
    #[arg(long, default_value_t = crate::solver::DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    #[arg(long, default_value_t = crate::dynamics::DEFAULT_DT)]
    pub dt: f64,
    #[arg(long, default_value_t = 1)]
    pub check_every: u64,
    #[arg(long, default_value_t = DEFAULT_VALUE_INT_BITS)]
    pub int_bits: u32,
    #[arg(long, default_value_t = DEFAULT_FRAC_BITS)]
    pub frac_bits: u32,
    /// JSON sweep spec; overrides all sweep flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Exported sweep (CSV, or JSON when the name ends in `.json`).
    pub results: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricArg::Steps)]
    pub metric: MetricArg,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LutArgs {
    #[arg(value_name = "N")]
    pub num_vars: usize,
    #[arg(long)]
    pub board: Option<String>,
}

/// Resolved `solve` configuration, echoed into the output for replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSolve {
    pub instance: PathBuf,
    pub engine: Engine,
    pub solve: SolveConfig,
    pub hw: Option<HwConfig>,
    pub trace_every: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveOutput {
    pub command: String,
    pub config: ResolvedSolve,
    pub record: RunRecord,
    pub projected_hw_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub generator: GeneratorConfig,
    pub num_clauses: usize,
    pub planted: Vec<bool>,
    pub instance_digest: String,
}

#[derive(Debug)]
pub struct CliError(pub String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

/// Parses `argv` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Fit(a) => cmd_fit(a),
        Command::EstimateLuts(a) => cmd_luts(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    read_dimacs(file).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn cmd_generate(a: GenerateArgs) -> Result<i32, CliError> {
    let cfg = GeneratorConfig {
        num_vars: a.num_vars,
        ratio: a.ratio,
        p0: a.p0,
        seed: a.seed,
    };
    let planted = generate(&cfg)?;
    let sidecar = Sidecar {
        generator: cfg,
        num_clauses: planted.instance.num_clauses(),
        planted: planted.planted.clone(),
        instance_digest: planted.instance.digest(),
    };
    let sidecar_text = serde_json::to_string_pretty(&sidecar)?;
    emit(a.out.as_deref(), &planted.instance.to_dimacs())?;
    let sidecar_path = a
        .sidecar
        .or_else(|| a.out.as_ref().map(|p| p.with_extension("json")));
    match sidecar_path {
        Some(p) => fs::write(p, sidecar_text)?,
        None => eprintln!("{sidecar_text}"),
    }
    eprintln!(
        "generated N={} M={} seed={}",
        cfg.num_vars,
        planted.instance.num_clauses(),
        cfg.seed
    );
    Ok(EXIT_OK)
}

fn write_trace(path: &Path, rows: &[TraceRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> Result<i32, CliError> {
    let resolved = match &a.replay {
        Some(path) => {
            let prev: SolveOutput = serde_json::from_str(&fs::read_to_string(path)?)?;
            let mut cfg = prev.config;
            if let Some(p) = &a.instance {
                cfg.instance = p.clone();
            }
            cfg
        }
        None => {
            let path = a
                .instance
                .clone()
                .ok_or_else(|| CliError("solve needs an instance path or --replay".into()))?;
            let instance = load_instance(&path)?;
            let params = a.params.apply(Params::for_instance(&instance));
            let engine = match a.engine {
                EngineArg::Float => Engine::Float,
                EngineArg::Hw => Engine::Hw,
            };
            let hw = match engine {
                Engine::Hw => {
                    let mut hw = HwConfig::with_bits(a.int_bits, a.frac_bits)?;
                    hw.cycles_per_interval = a.cycles_per_interval;
                    Some(hw)
                }
                Engine::Float => None,
            };
            ResolvedSolve {
                instance: path,
                engine,
                solve: SolveConfig {
                    params,
                    max_steps: a.max_steps,
                    check_every: a.check_every,
                    seed: a.seed,
                    precision: match a.precision {
                        PrecisionArg::F32 => Precision::Float32,
                        PrecisionArg::F64 => Precision::Float64,
                    },
                },
                hw,
                trace_every: a
                    .trace
                    .as_ref()
                    .filter(|_| engine == Engine::Float)
                    .map(|_| a.trace_every),
            }
        }
    };

    let instance = load_instance(&resolved.instance)?;
    resolved.solve.validate()?;
    if a.trace.is_some() && resolved.engine == Engine::Hw {
        eprintln!("warning: --trace is only supported by the float engine; ignoring");
    }
    let cycles_per_interval = resolved.hw.map_or(1, |h| h.cycles_per_interval);
    let record = match (resolved.engine, resolved.hw) {
        (Engine::Hw, Some(hw)) => solve_hw(&instance, &resolved.solve, &hw)?,
        (Engine::Hw, None) => return Err(CliError("hw engine without a fixed-point format".into())),
        (Engine::Float, _) => match (&a.trace, resolved.trace_every) {
            (Some(path), Some(every)) => {
                let (record, rows) = solve_traced(&instance, &resolved.solve, every);
                write_trace(path, &rows)?;
                record
            }
            _ => solve(&instance, &resolved.solve),
        },
    };
    if record.is_sat() && !record.verify(&instance) {
        return Err(CliError("internal error: unverified SAT assignment".into()));
    }

    let projected = bench::project_hw_time(
        record.steps,
        instance.num_clauses(),
        bench::DEFAULT_CLOCK_HZ,
        cycles_per_interval,
    );
    eprintln!(
        "{:?} after {} steps ({:.3} s host, {:.3e} s projected hardware)",
        record.outcome, record.steps, record.wall_time_s, projected
    );
    let code = if record.is_sat() { EXIT_OK } else { EXIT_BUDGET };
    let output = SolveOutput {
        command: "solve".into(),
        config: resolved,
        record,
        projected_hw_s: projected,
    };
    emit(a.out.as_deref(), &serde_json::to_string_pretty(&output)?)?;
    Ok(code)
}

fn cmd_bench(a: BenchArgs) -> Result<i32, CliError> {
    let spec = match &a.config {
        Some(path) => serde_json::from_str::<SweepSpec>(&fs::read_to_string(path)?)?,
        None => SweepSpec {
            sizes: a.sizes.clone(),
            ratios: a.ratios.clone(),
            instances: a.instances,
            engine: match a.engine {
                EngineArg::Float => Engine::Float,
                EngineArg::Hw => Engine::Hw,
            },
            base_seed: a.seed,
            p0: a.p0,
            max_steps: a.max_steps,
            dt: a.dt,
            check_every: a.check_every,
            precision: Precision::Float64,
            hw: HwConfig::with_bits(a.int_bits, a.frac_bits)?,
        },
    };
    let rows = run_sweep(&spec)?;
    let format = match a.format {
        FormatArg::Csv => ExportFormat::Csv,
        FormatArg::Json => ExportFormat::Json,
    };
    emit(a.out.as_deref(), &export_results(&rows, format)?)?;
    eprintln!("resolved sweep: {}", serde_json::to_string(&spec)?);
    let solved = rows.iter().filter(|r| r.outcome == crate::solver::Outcome::Sat).count();
    eprintln!("solved {solved}/{}", rows.len());
    for ratio in ratios_in(&rows) {
        for metric in [Metric::Steps, Metric::ProjectedHwSeconds] {
            if let Ok(fit) = fit_allometric(&medians(&rows, ratio, metric)) {
                eprintln!(
                    "M/N={ratio}: median {metric:?} ~ N^{:.3} (stderr {:.3})",
                    fit.exponent, fit.exponent_stderr
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_fit(a: FitArgs) -> Result<i32, CliError> {
    let text = fs::read_to_string(&a.results)?;
    let rows = if a.results.extension().is_some_and(|e| e == "json") {
        parse_json(&text)?
    } else {
        parse_csv(&text)?
    };
    let metric = match a.metric {
        MetricArg::Steps => Metric::Steps,
        MetricArg::HwTime => Metric::ProjectedHwSeconds,
        MetricArg::WallTime => Metric::WallSeconds,
    };
    let mut fits = Vec::new();
    for ratio in ratios_in(&rows) {
        let fit = fit_allometric(&medians(&rows, ratio, metric))?;
        eprintln!(
            "M/N={ratio}: exponent {:.3} +- {:.3}, prefactor {:.4e}",
            fit.exponent, fit.exponent_stderr, fit.prefactor
        );
        fits.push(json!({ "ratio": ratio, "metric": metric, "fit": fit }));
    }
    emit(a.out.as_deref(), &serde_json::to_string_pretty(&fits)?)?;
    Ok(EXIT_OK)
}

fn cmd_luts(a: LutArgs) -> Result<i32, CliError> {
    if a.num_vars == 0 {
        return Err(CliError("N must be at least 1".into()));
    }
    let model = ResourceModel::default();
    let luts = model.estimate_luts(a.num_vars);
    let regime = if (a.num_vars as f64) < model.crossover() { "f1" } else { "f2" };
    let mut out = json!({
        "N": a.num_vars,
        "luts": luts,
        "regime": regime,
        "crossover_n": model.crossover(),
    });
    if let Some(name) = &a.board {
        let capacity = model
            .board(name)
            .ok_or_else(|| CliError(format!("unknown board `{name}` (known: {:?})", model.boards.keys())))?;
        out["board"] = json!(name);
        out["capacity"] = json!(capacity);
        out["fits"] = json!(luts <= capacity as f64);
        out["max_vars"] = json!(model.max_vars(capacity));
    }
    emit(None, &serde_json::to_string_pretty(&out)?)?;
    Ok(EXIT_OK)
}
