//! Command-line pipeline: `ingest`, `estimate`, `metrics`, `synth`.
//!
//! Each command takes an optional flat TOML `--config` whose keys mirror the
//! long flags (with `_` for `-`). Flags override the file. The resolved
//! settings are written next to every output as `config.toml`, and as
//! comment lines in network files.

pub mod settings;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::{estimate, EstimationResult, PeriodInfo};
use crate::ingest::{
    apply_aliases, build_citation, build_coauthorship, parse_records, AliasMap, CitationOptions,
};
use crate::metrics::{build_series, rank_by_fitness, ranking_csv};
use crate::synth::generate;
use crate::temporal_net::{read_network, write_network, NodeKind, TemporalNetwork};
use settings::{
    echo, resolve, resolve_periods, EstimateSettings, IngestSettings, MetricsSettings, NetworkKind,
    SynthSettings,
};

#[derive(Debug, Parser)]
#[command(
    name = "pagrowth",
    version,
    about = "Preferential attachment and fitness in growing networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a co-authorship or citation network from a record file.
    Ingest(IngestArgs),
    /// Estimate the attachment function and fitnesses per period.
    Estimate(EstimateArgs),
    /// Competitiveness series and fitness rankings from estimation results.
    Metrics(MetricsArgs),
    /// Generate a network with a known kernel and known fitnesses.
    Synth(SynthArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct IngestArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aliases: Option<PathBuf>,
    #[arg(long, value_parser = ["coauthorship", "citation"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Keep only cited names that author some record.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restrict: Option<bool>,
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drop_self_citations: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    /// `start:end`, repeatable.
    #[arg(long = "period")]
    #[serde(rename = "periods", skip_serializing_if = "Vec::is_empty")]
    pub periods: Vec<String>,
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carry_degrees: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitness_shape: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binning: Option<String>,
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate_fitness: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hist_bin_width: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricsArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top_n: Option<usize>,
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchored: Option<bool>,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newcomers: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Comma-separated `A_0,A_1,...`.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub kernel_table: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitness: Option<String>,
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directed: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn run() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match execute(cli.command, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Ingest(a) => cmd_ingest(&resolve(a.config.as_deref(), &a)?, out),
        Command::Estimate(a) => cmd_estimate(&resolve(a.config.as_deref(), &a)?, out),
        Command::Metrics(a) => cmd_metrics(&resolve(a.config.as_deref(), &a)?, out),
        Command::Synth(a) => cmd_synth(&resolve(a.config.as_deref(), &a)?, out),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Network text with the settings echoed as comment lines after the header.
fn network_with_echo(net: &TemporalNetwork, config: &str) -> String {
    let text = write_network(net);
    let (header, body) = text.split_once('\n').unwrap_or((&text, ""));
    let mut out = format!("{header}\n");
    for line in config.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(body);
    out
}

fn report(out: &mut dyn Write, line: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::io("<stdout>", e))
}

pub fn cmd_ingest(s: &IngestSettings, out: &mut dyn Write) -> Result<()> {
    let mut records = parse_records(s.records()?)?;
    if let Some(path) = &s.aliases {
        records = apply_aliases(&records, &AliasMap::from_file(path)?);
    }
    let net = match s.kind {
        NetworkKind::Coauthorship => build_coauthorship(&records)?,
        NetworkKind::Citation => build_citation(
            &records,
            CitationOptions {
                restrict: s.restrict,
                drop_self_citations: s.drop_self_citations,
            },
        )?,
    };
    let target = s.out()?;
    if let Some(parent) = target.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    write_file(target, &network_with_echo(&net, &echo(s)?))?;
    let sources = net.node_count() - net.member_count();
    report(out, format_args!("records\t{}", records.len()))?;
    report(out, format_args!("nodes\t{}", net.member_count()))?;
    if sources > 0 {
        report(out, format_args!("sources\t{sources}"))?;
    }
    report(out, format_args!("events\t{}", net.events().len()))
}

fn pa_csv(result: &EstimationResult) -> String {
    let mut s = String::from("bin_lo,bin_hi,k,A,sigma,lower,upper,selections,estimated\n");
    for b in &result.a {
        let k = if b.bin_lo == 0 {
            0.0
        } else {
            geometric_mean(b.bin_lo, b.bin_hi)
        };
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let band = b.two_sigma_band();
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            b.bin_lo,
            b.bin_hi,
            k,
            b.value,
            opt(b.sigma),
            opt(band.map(|x| x.0)),
            opt(band.map(|x| x.1)),
            b.selections,
            u8::from(b.estimated)
        ));
    }
    s
}

fn geometric_mean(lo: u32, hi: u32) -> f64 {
    let sum: f64 = (lo..=hi).map(|k| (k as f64).ln()).sum();
    (sum / (hi - lo + 1) as f64).exp()
}

fn fitness_histogram(result: &EstimationResult, width: f64) -> String {
    let mut counts: Vec<usize> = Vec::new();
    for e in result.eta.iter().filter(|e| e.exposed) {
        let i = (e.value / width).floor() as usize;
        if counts.len() <= i {
            counts.resize(i + 1, 0);
        }
        counts[i] += 1;
    }
    let mut s = String::from("bin_lo,bin_hi,count\n");
    for (i, c) in counts.iter().enumerate() {
        s.push_str(&format!(
            "{},{},{c}\n",
            i as f64 * width,
            (i + 1) as f64 * width
        ));
    }
    s
}

fn fmt3(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into())
}

pub fn cmd_estimate(s: &EstimateSettings, out: &mut dyn Write) -> Result<()> {
    let cfg = s.estimation_config()?;
    let net = read_network(s.network()?)?;
    let periods = resolve_periods(&s.periods, &net)?;
    let dir = s.out_dir()?;
    create_dir(dir)?;

    let results: Vec<Result<EstimationResult>> = periods
        .par_iter()
        .map(|p| {
            let slice = net.slice_period(p.t_start, p.t_end, s.carry_degrees)?;
            let mut r = estimate(&slice, &cfg)?;
            r.period = Some(PeriodInfo {
                label: p.label.clone(),
                t_start: p.t_start,
                t_end: p.t_end,
                carry_degrees: s.carry_degrees,
            });
            Ok(r)
        })
        .collect();

    let mut summary =
        String::from("period,t_start,t_end,alpha,alpha_stderr,iterations,converged\n");
    report(
        out,
        format_args!(
            "{:<12} {:>8} {:>8} {:>10} {:>9}",
            "period", "alpha", "stderr", "iterations", "converged"
        ),
    )?;
    for (p, r) in periods.iter().zip(results) {
        let r = r.map_err(|e| {
            log::error!("period {}: {e}", p.label);
            e
        })?;
        if !r.converged {
            log::warn!(
                "period {} did not converge in {} iterations",
                p.label,
                r.iterations
            );
        }
        write_file(&dir.join(format!("result_{}.json", p.label)), &r.to_json()?)?;
        write_file(&dir.join(format!("pa_{}.csv", p.label)), &pa_csv(&r))?;
        write_file(
            &dir.join(format!("fitness_hist_{}.csv", p.label)),
            &fitness_histogram(&r, s.hist_bin_width),
        )?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        summary.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            p.label,
            p.t_start,
            p.t_end,
            opt(r.alpha),
            opt(r.alpha_stderr),
            r.iterations,
            r.converged
        ));
        report(
            out,
            format_args!(
                "{:<12} {:>8} {:>8} {:>10} {:>9}",
                p.label,
                fmt3(r.alpha),
                fmt3(r.alpha_stderr),
                r.iterations,
                if r.converged { "yes" } else { "no" }
            ),
        )?;
    }
    write_file(&dir.join("summary.csv"), &summary)?;
    write_file(&dir.join("config.toml"), &echo(s)?)
}

fn result_files(path: &Path) -> Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| Error::io(path, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("result_") && n.ends_with(".json"))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Config(format!(
            "no result_*.json files in {}",
            path.display()
        )));
    }
    Ok(files)
}

/// Every member node of the network must appear in the result under the
/// same label.
fn check_coverage(net: &TemporalNetwork, result: &EstimationResult) -> Result<()> {
    for n in net.nodes().iter().filter(|n| n.kind == NodeKind::Member) {
        match result.fitness_entry(n.id) {
            Some(e) if e.label == n.label => {}
            _ => return Err(Error::Coverage(n.id)),
        }
    }
    Ok(())
}

pub fn cmd_metrics(s: &MetricsSettings, out: &mut dyn Write) -> Result<()> {
    let net = read_network(s.network()?)?;
    let dir = s.out_dir()?;
    create_dir(dir)?;
    for path in result_files(s.results()?)? {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let result = EstimationResult::from_json(&text)?;
        check_coverage(&net, &result)?;
        let (label, lo, hi, carry) = match &result.period {
            Some(p) => (p.label.clone(), p.t_start, p.t_end, p.carry_degrees),
            None => {
                let (lo, hi) = net
                    .time_span()
                    .ok_or_else(|| Error::Config("network is empty".into()))?;
                ("all".to_string(), lo, hi, true)
            }
        };
        let slice = net.slice_period(lo, hi, carry)?;
        let series = build_series(&slice, &result, lo, hi, s.anchored)?;
        write_file(&dir.join(format!("series_{label}.csv")), &series.to_csv())?;
        let ranking = rank_by_fitness(&result, s.top_n)?;
        write_file(
            &dir.join(format!("ranking_{label}.csv")),
            &ranking_csv(&ranking)?,
        )?;
        report(
            out,
            format_args!(
                "{label}: {} time points, top {} ranked",
                series.len(),
                ranking.len()
            ),
        )?;
    }
    write_file(&dir.join("config.toml"), &echo(s)?)
}

pub fn cmd_synth(s: &SynthSettings, out: &mut dyn Write) -> Result<()> {
    let cfg = s.generator_config()?;
    let dir = s.out_dir()?;
    let (net, truth) = generate(&cfg)?;
    create_dir(dir)?;
    let config = echo(s)?;
    write_file(&dir.join("network.tsv"), &network_with_echo(&net, &config))?;
    write_file(&dir.join("truth.json"), &truth.to_json()?)?;
    write_file(&dir.join("config.toml"), &config)?;
    report(out, format_args!("nodes\t{}", net.node_count()))?;
    report(out, format_args!("events\t{}", net.events().len()))
}
