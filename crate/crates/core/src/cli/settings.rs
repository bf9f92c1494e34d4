//! Flat TOML settings per command. Flags are serialized the same way and
//! laid over the file, so a flag always wins over the file.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{BinningScheme, EstimationConfig};
use crate::synth::{FitnessDist, GeneratorConfig, Kernel};
use crate::temporal_net::{Resolution, TemporalNetwork, Time};

/// Reads `file` (if any), overlays `flags`, and deserializes the result.
pub fn resolve<F: Serialize, S: DeserializeOwned>(file: Option<&Path>, flags: &F) -> Result<S> {
    let mut table = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            toml::from_str::<toml::Table>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => toml::Table::new(),
    };
    let overrides = toml::Table::try_from(flags).map_err(|e| Error::Config(e.to_string()))?;
    table.extend(overrides);
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))
}

pub fn echo<S: Serialize>(settings: &S) -> Result<String> {
    toml::to_string(settings).map_err(|e| Error::Config(e.to_string()))
}

fn required<'a>(value: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    value
        .as_deref()
        .ok_or_else(|| Error::Config(format!("missing `{key}`")))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    #[default]
    Coauthorship,
    Citation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestSettings {
    pub records: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub kind: NetworkKind,
    pub restrict: bool,
    pub drop_self_citations: bool,
    pub out: Option<PathBuf>,
}

impl Default for IngestSettings {
    fn default() -> Self {
        IngestSettings {
            records: None,
            aliases: None,
            kind: NetworkKind::Coauthorship,
            restrict: true,
            drop_self_citations: false,
            out: None,
        }
    }
}

impl IngestSettings {
    pub fn records(&self) -> Result<&Path> {
        required(&self.records, "records")
    }

    pub fn out(&self) -> Result<&Path> {
        required(&self.out, "out")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateSettings {
    pub network: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    /// `"start:end"`, inclusive; calendar years when the network knows its
    /// origin year, step indices otherwise.
    pub periods: Vec<String>,
    pub carry_degrees: bool,
    pub smoothing: f64,
    pub fitness_shape: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    /// `per-degree`, `log:<base>` or `hybrid:<linear_until>:<base>`.
    pub binning: String,
    pub estimate_fitness: bool,
    pub hist_bin_width: f64,
}

impl Default for EstimateSettings {
    fn default() -> Self {
        let est = EstimationConfig::default();
        EstimateSettings {
            network: None,
            out_dir: None,
            periods: Vec::new(),
            carry_degrees: true,
            smoothing: est.smoothing,
            fitness_shape: est.fitness_shape,
            max_iterations: est.max_iterations,
            tolerance: est.tolerance,
            binning: binning_to_string(&est.binning),
            estimate_fitness: est.estimate_fitness,
            hist_bin_width: 0.1,
        }
    }
}

impl EstimateSettings {
    pub fn network(&self) -> Result<&Path> {
        required(&self.network, "network")
    }

    pub fn out_dir(&self) -> Result<&Path> {
        required(&self.out_dir, "out_dir")
    }

    pub fn estimation_config(&self) -> Result<EstimationConfig> {
        let cfg = EstimationConfig {
            smoothing: self.smoothing,
            fitness_shape: self.fitness_shape,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            binning: parse_binning(&self.binning)?,
            estimate_fitness: self.estimate_fitness,
        };
        cfg.validate()?;
        if !(self.hist_bin_width > 0.0 && self.hist_bin_width.is_finite()) {
            return Err(Error::Config(format!(
                "hist_bin_width must be positive, got {}",
                self.hist_bin_width
            )));
        }
        Ok(cfg)
    }
}

pub fn parse_binning(s: &str) -> Result<BinningScheme> {
    let bad = || {
        Error::Config(format!(
            "bad binning {s:?}: use per-degree, log:<base> or hybrid:<k>:<base>"
        ))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let scheme = match parts.as_slice() {
        ["per-degree"] => BinningScheme::PerDegree,
        ["log", base] => BinningScheme::Logarithmic {
            base: base.parse().map_err(|_| bad())?,
        },
        ["hybrid", k, base] => BinningScheme::Hybrid {
            linear_until: k.parse().map_err(|_| bad())?,
            base: base.parse().map_err(|_| bad())?,
        },
        _ => return Err(bad()),
    };
    scheme.validate()?;
    Ok(scheme)
}

pub fn binning_to_string(b: &BinningScheme) -> String {
    match b {
        BinningScheme::PerDegree => "per-degree".into(),
        BinningScheme::Logarithmic { base } => format!("log:{base}"),
        BinningScheme::Hybrid { linear_until, base } => format!("hybrid:{linear_until}:{base}"),
    }
}

/// A period mapped onto the network's time axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Period {
    pub label: String,
    pub t_start: Time,
    pub t_end: Time,
}

/// Maps `"start:end"` specs to time ranges. Without specs the whole span of
/// the network is one period labelled `all`.
pub fn resolve_periods(specs: &[String], net: &TemporalNetwork) -> Result<Vec<Period>> {
    if specs.is_empty() {
        let (lo, hi) = net
            .time_span()
            .ok_or_else(|| Error::Config("network is empty".into()))?;
        return Ok(vec![Period {
            label: "all".into(),
            t_start: lo,
            t_end: hi,
        }]);
    }
    let calendar = match (net.origin_year(), net.resolution()) {
        (Some(origin), Resolution::Monthly) => Some((origin, 12)),
        (Some(origin), Resolution::Yearly) => Some((origin, 1)),
        _ => None,
    };
    let mut out: Vec<Period> = Vec::with_capacity(specs.len());
    for spec in specs {
        let bad = || Error::Config(format!("bad period {spec:?}: expected start:end"));
        let (a, b) = spec.split_once(':').ok_or_else(bad)?;
        let (a, b): (i64, i64) = (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        );
        if a > b {
            return Err(Error::Config(format!(
                "period {spec:?} ends before it starts"
            )));
        }
        let (lo, hi) = match calendar {
            Some((origin, per_year)) => (
                (a - origin as i64) * per_year,
                (b - origin as i64) * per_year + per_year - 1,
            ),
            None => (a, b),
        };
        if hi < 0 {
            return Err(Error::Config(format!(
                "period {spec:?} ends before the network starts"
            )));
        }
        let period = Period {
            label: format!("{a}-{b}"),
            t_start: lo.max(0) as Time,
            t_end: hi.min(Time::MAX as i64) as Time,
        };
        if let Some(prev) = out.last() {
            if period.t_start <= prev.t_end {
                return Err(Error::Config(format!(
                    "period {spec:?} overlaps or precedes {}",
                    prev.label
                )));
            }
        }
        out.push(period);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsSettings {
    pub network: Option<PathBuf>,
    /// A result JSON file, or a directory of `result_*.json` files.
    pub results: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub top_n: usize,
    pub anchored: bool,
}

impl Default for MetricsSettings {
    fn default() -> Self {
        MetricsSettings {
            network: None,
            results: None,
            out_dir: None,
            top_n: 10,
            anchored: true,
        }
    }
}

impl MetricsSettings {
    pub fn network(&self) -> Result<&Path> {
        required(&self.network, "network")
    }

    pub fn results(&self) -> Result<&Path> {
        required(&self.results, "results")
    }

    pub fn out_dir(&self) -> Result<&Path> {
        required(&self.out_dir, "out_dir")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSettings {
    pub out_dir: Option<PathBuf>,
    pub steps: u32,
    pub newcomers: u32,
    pub edges: u32,
    pub alpha: f64,
    /// Explicit `A_0, A_1, ...`; overrides `alpha` when non-empty.
    pub kernel_table: Vec<f64>,
    /// `constant`, `lognormal:<mu>:<sigma>` or `two-point:<low>:<high>:<p>`.
    pub fitness: String,
    pub directed: bool,
    pub seed: u64,
}

impl Default for SynthSettings {
    fn default() -> Self {
        let g = GeneratorConfig::default();
        let alpha = match g.kernel {
            Kernel::Exponent { alpha } => alpha,
            Kernel::Table { .. } => unreachable!(),
        };
        SynthSettings {
            out_dir: None,
            steps: g.n_steps,
            newcomers: g.newcomers_per_step,
            edges: g.edges_per_newcomer,
            alpha,
            kernel_table: Vec::new(),
            fitness: fitness_to_string(&g.fitness),
            directed: g.directed,
            seed: g.seed,
        }
    }
}

impl SynthSettings {
    pub fn out_dir(&self) -> Result<&Path> {
        required(&self.out_dir, "out_dir")
    }

    pub fn generator_config(&self) -> Result<GeneratorConfig> {
        let kernel = if self.kernel_table.is_empty() {
            Kernel::Exponent { alpha: self.alpha }
        } else {
            Kernel::Table {
                values: self.kernel_table.clone(),
            }
        };
        let cfg = GeneratorConfig {
            n_steps: self.steps,
            newcomers_per_step: self.newcomers,
            edges_per_newcomer: self.edges,
            kernel,
            fitness: parse_fitness(&self.fitness)?,
            directed: self.directed,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn parse_fitness(s: &str) -> Result<FitnessDist> {
    let bad = || {
        Error::Config(format!(
            "bad fitness {s:?}: use constant, lognormal:<mu>:<sigma> or two-point:<low>:<high>:<p>"
        ))
    };
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = s.split(':').collect();
    Ok(match parts.as_slice() {
        ["constant"] => FitnessDist::Constant,
        ["lognormal", mu, sigma] => FitnessDist::LogNormal {
            mu: num(mu)?,
            sigma: num(sigma)?,
        },
        ["two-point", low, high, p] => FitnessDist::TwoPoint {
            low: num(low)?,
            high: num(high)?,
            p: num(p)?,
        },
        _ => return Err(bad()),
    })
}

pub fn fitness_to_string(f: &FitnessDist) -> String {
    match f {
        FitnessDist::Constant => "constant".into(),
        FitnessDist::LogNormal { mu, sigma } => format!("lognormal:{mu}:{sigma}"),
        FitnessDist::TwoPoint { low, high, p } => format!("two-point:{low}:{high}:{p}"),
    }
}
