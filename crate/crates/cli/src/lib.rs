//! Command-line front end: construction, graph analysis, EXIT charts,
//! thresholds, degree optimization, decoding and simulation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use feclab::basecode::{ldpc_base_from_degrees, make_block_tldpc_base, BaseTransfer};
use feclab::decode::{decode, DecoderConfig};
use feclab::ensemble::{BaseFamily, EnsembleSpec};
use feclab::exit::{self, area_report, base_curve_from, base_transfer, variable_curve};
use feclab::fraction::{format_fraction, to_f64};
use feclab::gf2::min_distance_exhaustive;
use feclab::graphgen::{build_random_ldpc, build_random_over_base, build_structured, extract_parity_matrix, CodeInstance};
use feclab::sim::{simulate, ChannelPoint, SimResult, StopRule};
use feclab::wt2graph::check_necessary_condition;

/// Largest length accepted by `dmin-brute`.
pub const DMIN_BRUTE_MAX_N: usize = 28;

#[derive(Debug, Parser)]
#[command(name = "feclab", version, about = "Sparse-graph codes with degree-one bits")]
pub struct Cli {
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code instance from an ensemble
    Construct(ConstructArgs),
    /// Partial-weight-2 graph analysis and the average-degree test
    AnalyzeG(AnalyzeArgs),
    /// EXIT curves and area bookkeeping on the erasure channel
    Exit(ExitArgs),
    /// Erasure-channel density-evolution threshold
    Threshold(EnsembleArg),
    /// Rate-maximizing degree distribution for a base code
    Optimize(OptimizeArgs),
    /// Decode one vector of channel LLRs
    Decode(DecodeArgs),
    /// Monte Carlo error rates
    Simulate(SimulateArgs),
    /// Exhaustive minimum distance of a short instance
    DminBrute(CodeArg),
}

#[derive(Debug, Args)]
pub struct EnsembleArg {
    /// Ensemble JSON file
    #[arg(long)]
    pub ensemble: PathBuf,
}

#[derive(Debug, Args)]
pub struct CodeArg {
    /// Code instance JSON file
    #[arg(long)]
    pub code: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// Degree-2 nodes placed as a forest of clusters (block base only)
    Structured,
    /// Configuration model over the ensemble's base
    Random,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long, value_enum, default_value_t = Construction::Structured)]
    pub method: Construction,
    /// Number of clusters (structured) or base components (random block/custom)
    #[arg(long)]
    pub clusters: Option<usize>,
    /// Number of variable nodes (random parity-check base)
    #[arg(long)]
    pub n: Option<usize>,
    /// Output code JSON; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the parity-check matrix in alist format
    #[arg(long)]
    pub alist: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Nominal ensemble for the closed-form checks
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExitArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
    /// Channel erasure probability
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseChoice {
    /// The 6-bit rate-1/2 block with two degree-one positions
    Block,
    /// Single parity checks, see --check-degree
    Ldpc,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Take the base code from this ensemble instead of --base
    #[arg(long, conflicts_with = "base")]
    pub ensemble: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub base: Option<BaseChoice>,
    /// Check degree for --base ldpc
    #[arg(long, default_value_t = 6)]
    pub check_degree: usize,
    /// Target channel erasure probability
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 20)]
    pub max_degree: u32,
    /// Upper bound on the normalized degree-2 fraction
    #[arg(long, default_value_t = 0.5)]
    pub lambda2_cap: f64,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// CSV of channel LLRs (one per field; `inf`/`-inf` allowed)
    #[arg(long)]
    pub llrs: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    /// Keep iterating after the syndrome is satisfied
    #[arg(long)]
    pub no_early_stop: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    Awgn,
    Bec,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum, default_value_t = ChannelKind::Awgn)]
    pub channel: ChannelKind,
    /// Eb/N0 sweep in dB as `start:step:stop` or a single value
    #[arg(long, allow_hyphen_values = true)]
    pub ebn0: Option<String>,
    /// Erasure probability sweep as `start:step:stop` or a single value
    #[arg(long)]
    pub p: Option<String>,
    /// Code rate for the Eb/N0 mapping; defaults to the design rate
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub min_frame_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_frames: u64,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    /// Results CSV; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the full result with confidence intervals as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let seed = cli.seed;
    match cli.command {
        Command::Construct(a) => construct(a, seed, out),
        Command::AnalyzeG(a) => {
            let instance = read_code(&a.code)?;
            let nominal = a.ensemble.as_deref().map(read_ensemble).transpose()?;
            let report = check_necessary_condition(&instance, nominal.as_ref())?;
            write_json(out, &report.to_json())
        }
        Command::Exit(a) => exit_chart(a, out),
        Command::Threshold(a) => {
            let spec = read_ensemble(&a.ensemble)?;
            let threshold = exit::bec_threshold(&spec)?;
            let rate = to_f64(&spec.design_rate()?);
            write_json(
                out,
                &json!({ "threshold": threshold, "design_rate": rate, "capacity_gap": 1.0 - rate - threshold }),
            )
        }
        Command::Optimize(a) => optimize(a, out),
        Command::Decode(a) => decode_file(a, out),
        Command::Simulate(a) => simulate_cmd(a, seed, out),
        Command::DminBrute(a) => {
            let instance = read_code(&a.code)?;
            if instance.n() > DMIN_BRUTE_MAX_N {
                bail!("dmin-brute needs n <= {DMIN_BRUTE_MAX_N}, got {}", instance.n());
            }
            let h = extract_parity_matrix(&instance);
            let d = min_distance_exhaustive(&h, DMIN_BRUTE_MAX_N)?;
            write_json(out, &json!({ "n": instance.n(), "dimension": instance.n() - h.rank(), "dmin": d }))
        }
    }
}

fn read_ensemble(path: &Path) -> Result<EnsembleSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(EnsembleSpec::from_json_str(&text)?)
}

fn read_code(path: &Path) -> Result<CodeInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(CodeInstance::from_json(&value)?)
}

fn write_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn construct(a: ConstructArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let spec = read_ensemble(&a.ensemble)?;
    let instance = match (a.method, &spec.base) {
        (Construction::Structured, _) => {
            let clusters = a.clusters.context("--clusters is required for the structured construction")?;
            build_structured(&spec, clusters, seed)?
        }
        (Construction::Random, BaseFamily::Ldpc { rho }) => {
            let n = a.n.context("--n is required for a parity-check base")?;
            build_random_ldpc(&spec.distribution, rho, n, seed)?
        }
        (Construction::Random, _) => {
            let copies = a.clusters.context("--clusters is required for a block or custom base")?;
            build_random_over_base(&spec, copies, seed)?
        }
    };
    if let Some(path) = &a.alist {
        fs::write(path, extract_parity_matrix(&instance).to_alist())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let value = instance.to_json();
    match &a.out {
        Some(path) => {
            let text = serde_json::to_string(&value)?;
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            write_json(
                out,
                &json!({ "n": instance.n(), "m": instance.m(), "seed": instance.seed(), "design_rate": instance.design_rate() }),
            )
        }
        None => write_json(out, &value),
    }
}

fn exit_chart(a: ExitArgs, out: &mut dyn Write) -> Result<()> {
    let spec = read_ensemble(&a.ensemble)?;
    let transfer = base_transfer(&spec)?;
    let variable = variable_curve(&spec.normalized()?, a.p, a.samples)?;
    let base = base_curve_from(&transfer, a.p, a.samples)?;
    let report = area_report(&spec, a.p, a.samples)?;
    let pairs = |pts: &[(f64, f64)]| pts.iter().map(|&(h, v)| json!([h, v])).collect::<Vec<_>>();
    write_json(
        out,
        &json!({
            "p": a.p,
            "variable_curve": pairs(&variable.points),
            "base_curve": pairs(&base.points),
            "area_variable": report.area_variable,
            "area_base": report.area_base,
            "delta_area": report.delta_area,
            "delta_area_closed_form": report.closed_form_delta,
            "rate": report.rate,
            "capacity": 1.0 - a.p,
        }),
    )
}

fn optimize(a: OptimizeArgs, out: &mut dyn Write) -> Result<()> {
    let transfer = match (&a.ensemble, a.base) {
        (Some(path), _) => base_transfer(&read_ensemble(path)?)?,
        (None, Some(BaseChoice::Block)) | (None, None) => BaseTransfer::from_base(&make_block_tldpc_base(1)?)?,
        (None, Some(BaseChoice::Ldpc)) => BaseTransfer::from_base(&ldpc_base_from_degrees(&[a.check_degree])?)?,
    };
    let tilde = exit::optimize_degrees_with(&transfer, a.p, a.max_degree, a.lambda2_cap)?;
    let threshold = exit::threshold_for(&transfer, &tilde);
    write_json(
        out,
        &json!({
            "lambda_tilde": tilde.to_json(),
            "threshold": threshold,
            "nodes_per_edge": format_fraction(&tilde.nodes_per_edge()),
        }),
    )
}

/// Every field of a headerless CSV as an LLR.
pub fn parse_llrs(text: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for record in reader.records() {
        for field in record?.iter().filter(|f| !f.is_empty()) {
            let v: f64 = field.parse().with_context(|| format!("bad LLR {field:?}"))?;
            values.push(v);
        }
    }
    Ok(values)
}

fn decode_file(a: DecodeArgs, out: &mut dyn Write) -> Result<()> {
    let instance = read_code(&a.code)?;
    let text = fs::read_to_string(&a.llrs).with_context(|| format!("reading {}", a.llrs.display()))?;
    let llrs = parse_llrs(&text)?;
    let cfg = DecoderConfig { max_iterations: a.max_iters, stop_on_valid: !a.no_early_stop, ..Default::default() };
    let result = decode(&instance, &llrs, &cfg)?;
    write_json(
        out,
        &json!({
            "hard_decisions": result.hard_decisions,
            "iterations_used": result.iterations_used,
            "converged": result.converged,
            "residual_erasures": result.residual_erasures,
        }),
    )
}

/// `start:step:stop` (inclusive) or a single value.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad number {s:?} in sweep {text:?}")))
        .collect::<Result<_>>()?;
    match parts[..] {
        [v] => Ok(vec![v]),
        [start, step, stop] => {
            if !(step > 0.0) || stop < start {
                bail!("sweep {text:?} needs a positive step and stop >= start");
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| round_grid(start + i as f64 * step)).collect())
        }
        _ => bail!("sweep {text:?} must be a value or start:step:stop"),
    }
}

/// Removes accumulation noise such as 0.30000000000000004.
fn round_grid(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

fn simulate_cmd(a: SimulateArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let instance = read_code(&a.code)?;
    let points = match a.channel {
        ChannelKind::Awgn => {
            let sweep = a.ebn0.as_deref().context("--ebn0 is required for the AWGN channel")?;
            let rate = a.rate.unwrap_or_else(|| instance.design_rate());
            parse_sweep(sweep)?
                .into_iter()
                .map(|db| ChannelPoint::awgn(db, rate))
                .collect::<feclab::Result<Vec<_>>>()?
        }
        ChannelKind::Bec => {
            let sweep = a.p.as_deref().context("--p is required for the erasure channel")?;
            parse_sweep(sweep)?.into_iter().map(ChannelPoint::bec).collect::<feclab::Result<Vec<_>>>()?
        }
    };
    let stop = StopRule { min_frame_errors: a.min_frame_errors, max_frames: a.max_frames };
    let cfg = DecoderConfig { max_iterations: a.max_iters, ..Default::default() };
    let result = simulate(&instance, &points, stop, &cfg, seed)?;
    if let Some(path) = &a.json {
        fs::write(path, serde_json::to_string_pretty(&result)?).with_context(|| format!("writing {}", path.display()))?;
    }
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
            write_csv(file, &result)
        }
        None => write_csv(out, &result),
    }
}

pub fn write_csv<W: Write>(writer: W, result: &SimResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SimResult::CSV_HEADER)?;
    for row in result.csv_rows() {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
