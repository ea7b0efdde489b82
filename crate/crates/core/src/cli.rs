//! Command-line front end.
//!
//! Exit codes: 0 success, 2 capacity guard, 3 invariant violation,
//! 64 usage error, 65 contradictory configuration.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds;
use crate::dist::{self, ScanStrategy};
use crate::mc::{self, Projection, SampleBatch, Sampler};
use crate::model::{HeavyRule, InitialState, ModelParams, ParamFamily, RateRule};
use crate::negdep;
use crate::phase::{self, ClassifyMode, DeclaredLimits, Regime};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CAPACITY: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_CONTRADICTION: i32 = 65;
const EXIT_FAILURE: i32 = 1;

/// Slack allowed between certified bounds and the exact distance.
pub const SANDWICH_TOLERANCE: f64 = 1e-9;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "urnlab", version, about = "Exact mixing curves for the two-species Ehrenfest urn")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Worst-case distance to stationarity on a time grid.
    Curve(CurveArgs),
    /// Certified lower and upper bounds next to the exact distance.
    Bounds(BoundsArgs),
    /// Regime labels for a parameter family.
    Classify(ClassifyArgs),
    /// Joint versus product moments of the coupling indicators.
    Negdep(NegdepArgs),
    /// Monte Carlo draws of the urn at a fixed time.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args, Serialize)]
struct InstanceArgs {
    /// Total number of balls N.
    #[arg(long)]
    n_balls: usize,
    /// Number of heavy balls m.
    #[arg(long)]
    heavy: usize,
    /// Heavy-ball rate α in (0, 1].
    #[arg(long)]
    alpha: f64,
}

impl InstanceArgs {
    fn params(&self) -> Result<ModelParams, CliError> {
        ModelParams::new(self.n_balls, self.heavy, self.alpha).map_err(CliError::usage)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
enum Initial {
    State { regular_left: usize, heavy_left: usize },
    Corners,
    Scan,
}

fn parse_initial(s: &str) -> Result<Initial, String> {
    match s {
        "corners" => Ok(Initial::Corners),
        "scan" => Ok(Initial::Scan),
        _ => {
            let (r, h) = s
                .split_once(',')
                .ok_or_else(|| format!("expected 'r,h', 'corners' or 'scan', got '{s}'"))?;
            Ok(Initial::State {
                regular_left: r.trim().parse().map_err(|e| format!("bad r: {e}"))?,
                heavy_left: h.trim().parse().map_err(|e| format!("bad h: {e}"))?,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.0)]
    t_start: f64,
    #[arg(long)]
    t_stop: Option<f64>,
    /// Defaults to 50 with `--t-stop`, otherwise 1.
    #[arg(long)]
    t_points: Option<usize>,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    t_spacing: Spacing,
}

impl GridArgs {
    fn resolved(&self) -> (f64, f64, usize) {
        let points = self.t_points.unwrap_or(if self.t_stop.is_some() { 50 } else { 1 });
        (self.t_start, self.t_stop.unwrap_or(self.t_start), points)
    }

    fn times(&self) -> Result<Vec<f64>, CliError> {
        let (start, stop, points) = self.resolved();
        if points == 0 {
            return Err(CliError::Usage("the time grid is empty (--t-points 0)".into()));
        }
        if !(start.is_finite() && stop.is_finite() && start >= 0.0) {
            return Err(CliError::Usage("grid times must be finite and non-negative".into()));
        }
        if points == 1 {
            return Ok(vec![start]);
        }
        if stop <= start {
            return Err(CliError::Usage("--t-stop must exceed --t-start for more than one point".into()));
        }
        let last = (points - 1) as f64;
        Ok(match self.t_spacing {
            Spacing::Linear => (0..points).map(|i| start + (stop - start) * i as f64 / last).collect(),
            Spacing::Geometric => {
                if start <= 0.0 {
                    return Err(CliError::Usage("a geometric grid needs --t-start > 0".into()));
                }
                let ratio = stop / start;
                (0..points).map(|i| start * ratio.powf(i as f64 / last)).collect()
            }
        })
    }
}

/// Echoes the grid with defaults filled in.
impl Serialize for GridArgs {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (start, stop, points) = self.resolved();
        let mut st = serializer.serialize_struct("GridArgs", 4)?;
        st.serialize_field("t_start", &start)?;
        st.serialize_field("t_stop", &stop)?;
        st.serialize_field("t_points", &points)?;
        st.serialize_field("t_spacing", &self.t_spacing)?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this path instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct CurveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    instance: InstanceArgs,
    /// `r,h`, `corners` or `scan`.
    #[arg(long, value_parser = parse_initial, default_value = "corners")]
    initial: Initial,
    #[command(flatten)]
    #[serde(flatten)]
    grid: GridArgs,
    /// Add the full-chain distance column.
    #[arg(long)]
    chain: bool,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    instance: InstanceArgs,
    /// `corners` or `scan`; worst case for the exact column.
    #[arg(long, value_parser = parse_initial, default_value = "corners")]
    initial: Initial,
    #[command(flatten)]
    #[serde(flatten)]
    grid: GridArgs,
    /// Add the exact distance and check it against the bounds.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModeArg {
    Extrapolate,
    Declared,
}

#[derive(Debug, Args, Serialize)]
struct ClassifyArgs {
    /// `const:M`, `pow:B` or `sqrt:C,ELL`.
    #[arg(long)]
    m_rule: String,
    /// `const:A` or `overlog:A`.
    #[arg(long)]
    alpha_rule: String,
    /// Comma-separated increasing sizes N.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Extrapolate)]
    mode: ModeArg,
    #[arg(long, allow_hyphen_values = true)]
    gamma_inf: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tilde_gamma_inf: Option<f64>,
    /// Limit of `(2β - 1) log N`; omit or pass `inf` for +∞.
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<f64>,
    #[arg(long)]
    m_diverges: Option<bool>,
    #[arg(long)]
    expect_observable: Option<String>,
    #[arg(long)]
    expect_chain: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct NegdepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    time: f64,
    /// Largest subset size; defaults to N.
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum SamplerArg {
    Coupled,
    Ctmc,
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    instance: InstanceArgs,
    /// Starting state `r,h`.
    #[arg(long, value_parser = parse_initial, default_value = "0,0")]
    initial: Initial,
    #[arg(long)]
    time: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::Coupled)]
    sampler: SamplerArg,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Capacity(String),
    Invariant(String),
    Contradiction(String),
    Other(String),
}

impl CliError {
    fn usage(e: Error) -> Self {
        CliError::from(e).into_usage()
    }

    fn into_usage(self) -> Self {
        match self {
            CliError::Other(msg) => CliError::Usage(msg),
            other => other,
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Capacity(_) => EXIT_CAPACITY,
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Contradiction(_) => EXIT_CONTRADICTION,
            CliError::Other(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Capacity(m) => m.clone(),
            CliError::Invariant(m) => format!("INVARIANT VIOLATION (a bug or a counterexample): {m}"),
            CliError::Contradiction(m) => m.clone(),
            CliError::Other(m) => m.clone(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Domain(_) => CliError::Usage(msg),
            Error::Capacity { .. } => CliError::Capacity(msg),
            Error::InvalidPmf(_) => CliError::Invariant(msg),
            Error::Contradiction(_) => CliError::Contradiction(msg),
            Error::NoCrossing { .. } => CliError::Other(msg),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Other(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(format!("json error: {e}"))
    }
}

type CliResult = Result<(), CliError>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Curve(a) => cmd_curve(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Negdep(a) => cmd_negdep(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("urnlab: {}", e.message());
            e.exit_code()
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Serialize)]
struct Header<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
}

fn header<C: Serialize>(command: &str, config: &C) -> Result<String, CliError> {
    Ok(serde_json::to_string(&Header {
        tool: "urnlab",
        version: VERSION,
        command,
        config,
    })?)
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a `#` header line followed by CSV records.
fn write_csv(
    out: &mut dyn Write,
    header_line: &str,
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> CliResult {
    writeln!(out, "# {header_line}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonOutput<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
    result: R,
}

fn write_json<C: Serialize, R: Serialize>(out: &mut dyn Write, command: &str, config: &C, result: R) -> CliResult {
    let doc = JsonOutput {
        tool: "urnlab",
        version: VERSION,
        command,
        config,
        result,
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn strategy(initial: Initial) -> Option<ScanStrategy> {
    match initial {
        Initial::Corners => Some(ScanStrategy::Corners),
        Initial::Scan => Some(ScanStrategy::FullScan),
        Initial::State { .. } => None,
    }
}

fn resolve_state(params: &ModelParams, initial: Initial) -> Result<InitialState, CliError> {
    match initial {
        Initial::State { regular_left, heavy_left } => {
            InitialState::new(params, regular_left, heavy_left).map_err(CliError::usage)
        }
        _ => Err(CliError::Usage("a single starting state 'r,h' is required here".into())),
    }
}

#[derive(Serialize)]
struct CurveRow {
    t: f64,
    d_obs: f64,
    d_chain: Option<f64>,
}

fn cmd_curve(a: &CurveArgs) -> CliResult {
    let params = a.instance.params()?;
    let times = a.grid.times()?;
    let scan = strategy(a.initial);
    let state = match scan {
        Some(s) => {
            // Probe the capacity guard before any output is produced.
            dist::initial_states(&params, s)?;
            None
        }
        None => Some(resolve_state(&params, a.initial)?),
    };
    let rows = times
        .iter()
        .map(|&t| {
            let (d_obs, d_chain) = match (scan, state) {
                (Some(s), _) => (
                    dist::observed_tv(&params, t, s)?,
                    if a.chain { Some(dist::chain_tv(&params, t, s)?) } else { None },
                ),
                (None, Some(init)) => (
                    dist::tv(&dist::observed_law(&params, init, t), &dist::stationary_observed(&params)),
                    a.chain.then(|| {
                        dist::tv_product(&dist::chain_law(&params, init, t), &dist::stationary_chain(&params))
                    }),
                ),
                (None, None) => unreachable!("initial state resolved above"),
            };
            Ok(CurveRow { t, d_obs, d_chain })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut out = open_output(&a.output.out)?;
    match a.output.format {
        Format::Csv => {
            let mut columns = vec!["t", "D_obs"];
            if a.chain {
                columns.push("D_chain");
            }
            let records = rows.iter().map(|r| {
                let mut rec = vec![real(r.t), real(r.d_obs)];
                rec.extend(r.d_chain.map(real));
                rec
            });
            write_csv(&mut *out, &header("curve", a)?, &columns, records)
        }
        Format::Json => write_json(&mut *out, "curve", a, rows),
    }
}

#[derive(Serialize)]
struct BoundsRow {
    t: f64,
    lb_cheb: f64,
    lb_kolm: f64,
    lb_clt: f64,
    exact: Option<f64>,
    ub_l2: f64,
    ub_coupling_raw: f64,
}

impl BoundsRow {
    fn check(&self) -> CliResult {
        let Some(exact) = self.exact else {
            return Ok(());
        };
        let tol = SANDWICH_TOLERANCE;
        let violations = [
            ("lb_cheb <= exact", self.lb_cheb <= exact + tol),
            ("lb_kolm <= exact", self.lb_kolm <= exact + tol),
            ("exact <= ub_l2", exact <= self.ub_l2 + tol),
            ("exact <= ub_coupling_raw", exact <= self.ub_coupling_raw + tol),
        ];
        match violations.iter().find(|(_, ok)| !ok) {
            None => Ok(()),
            Some((what, _)) => Err(CliError::Invariant(format!(
                "bound sandwich {what} fails at t = {}: lb_cheb {}, lb_kolm {}, exact {}, ub_l2 {}, ub_coupling {}",
                self.t, self.lb_cheb, self.lb_kolm, exact, self.ub_l2, self.ub_coupling_raw
            ))),
        }
    }
}

fn cmd_bounds(a: &BoundsArgs) -> CliResult {
    let params = a.instance.params()?;
    let times = a.grid.times()?;
    let scan = strategy(a.initial)
        .ok_or_else(|| CliError::Usage("bounds compare against the worst case; use 'corners' or 'scan'".into()))?;
    if a.exact {
        dist::initial_states(&params, scan)?;
    }
    let rows = times
        .iter()
        .map(|&t| {
            let row = BoundsRow {
                t,
                lb_cheb: bounds::chebyshev_lower_bound(&params, t),
                lb_kolm: bounds::kolmogorov_lower_bound(&params, t),
                lb_clt: bounds::clt_lower_bound(&params, t),
                exact: if a.exact { Some(dist::observed_tv(&params, t, scan)?) } else { None },
                ub_l2: bounds::l2_upper_bound(&params, t),
                ub_coupling_raw: bounds::coupling_union_bound(&params, t),
            };
            row.check()?;
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut out = open_output(&a.output.out)?;
    match a.output.format {
        Format::Csv => {
            let mut columns = vec!["t", "lb_cheb", "lb_kolm", "lb_clt"];
            if a.exact {
                columns.push("exact");
            }
            columns.extend(["ub_l2", "ub_coupling_raw"]);
            let records = rows.iter().map(|r| {
                let mut rec = vec![real(r.t), real(r.lb_cheb), real(r.lb_kolm), real(r.lb_clt)];
                rec.extend(r.exact.map(real));
                rec.extend([real(r.ub_l2), real(r.ub_coupling_raw)]);
                rec
            });
            write_csv(&mut *out, &header("bounds", a)?, &columns, records)
        }
        Format::Json => write_json(&mut *out, "bounds", a, rows),
    }
}

fn parse_regime(s: &Option<String>) -> Result<Option<Regime>, CliError> {
    s.as_deref().map(|v| v.parse::<Regime>().map_err(CliError::usage)).transpose()
}

fn cmd_classify(a: &ClassifyArgs) -> CliResult {
    let heavy: HeavyRule = a.m_rule.parse().map_err(CliError::usage)?;
    let rate: RateRule = a.alpha_rule.parse().map_err(CliError::usage)?;
    let family = ParamFamily::new(heavy, rate, a.sizes.clone()).map_err(CliError::usage)?;
    let mode = match a.mode {
        ModeArg::Extrapolate => ClassifyMode::Extrapolate,
        ModeArg::Declared => {
            let (Some(gamma_inf), Some(tilde_gamma_inf), Some(m_diverges)) =
                (a.gamma_inf, a.tilde_gamma_inf, a.m_diverges)
            else {
                return Err(CliError::Usage(
                    "--mode declared needs --gamma-inf, --tilde-gamma-inf and --m-diverges".into(),
                ));
            };
            ClassifyMode::Declared(DeclaredLimits {
                gamma_inf,
                tilde_gamma_inf,
                ell: a.ell.filter(|l| l.is_finite()),
                m_diverges,
                expected_observable: parse_regime(&a.expect_observable)?,
                expected_chain: parse_regime(&a.expect_chain)?,
            })
        }
    };
    let report = phase::classify(&family, mode)?;
    let mut out = open_output(&a.out)?;
    write_json(&mut *out, "classify", a, report)
}

fn cmd_negdep(a: &NegdepArgs) -> CliResult {
    let params = a.instance.params()?;
    if !(a.time >= 0.0) {
        return Err(CliError::Usage(format!("--time {} must be non-negative", a.time)));
    }
    let max_size = a.max_size.unwrap_or(params.total_balls());
    let report = negdep::verify_negative_dependence(&params, a.time, max_size)?;
    let mut out = open_output(&a.out)?;
    write_json(&mut *out, "negdep", a, &report)?;
    if !report.pass {
        return Err(CliError::Invariant(format!(
            "joint moment exceeds the product of means: min slack {:e}",
            report.min_slack
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct SimulationSummary {
    count: usize,
    empirical_mean: f64,
    empirical_variance: f64,
    standard_error: f64,
    exact_mean: f64,
    exact_variance: f64,
    empirical_tv_to_exact: f64,
    empirical_tv_to_stationary: f64,
    bias_note: String,
}

fn cmd_simulate(a: &SimulateArgs) -> CliResult {
    let params = a.instance.params()?;
    let init = resolve_state(&params, a.initial)?;
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    if !(a.time >= 0.0) {
        return Err(CliError::Usage(format!("--time {} must be non-negative", a.time)));
    }
    let sampler = match a.sampler {
        SamplerArg::Coupled => Sampler::Coupled,
        SamplerArg::Ctmc => Sampler::Ctmc,
    };
    let batch = SampleBatch::generate(&params, init, a.time, a.seed, a.samples, sampler)?;
    let mut out = open_output(&a.output.out)?;
    match a.output.format {
        Format::Csv => {
            let records = batch
                .outcomes
                .iter()
                .enumerate()
                .map(|(i, &(r, h))| vec![i.to_string(), r.to_string(), h.to_string(), (r + h).to_string()]);
            write_csv(&mut *out, &header("simulate", a)?, &["draw", "R", "H", "W"], records)
        }
        Format::Json => {
            let moments = mc::batch_moments(&batch);
            let empirical = mc::empirical_pmf(&batch, Projection::W)?;
            let law = dist::observed_law(&params, init, a.time);
            let (exact_mean, exact_variance) = (law.mean(), law.variance());
            let bias = ((params.total_balls() + 1) as f64 / a.samples as f64).sqrt();
            let summary = SimulationSummary {
                count: batch.count(),
                empirical_mean: moments.mean,
                empirical_variance: moments.variance,
                standard_error: moments.standard_error,
                exact_mean,
                exact_variance,
                empirical_tv_to_exact: dist::tv(&empirical, &law),
                empirical_tv_to_stationary: dist::tv(&empirical, &dist::stationary_observed(&params)),
                bias_note: format!(
                    "plug-in TV estimates are biased upwards, by up to about sqrt((N+1)/count) = {bias:.3e}"
                ),
            };
            write_json(&mut *out, "simulate", a, summary)
        }
    }
}
