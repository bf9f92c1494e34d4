//! Joint penalized maximum-likelihood estimation of the attachment function
//! and node fitnesses.
//!
//! The model: at each step, a node at risk is selected with probability
//! proportional to `A_{k} · η`, where `k` is its degree at the start of the
//! step. `A` is nonparametric over degree bins, `η` is per node. The fit
//! alternates minorize-maximize updates of `A` and `η` from `A ≡ 1, η ≡ 1`
//! until the relative change of the penalized objective drops below the
//! tolerance, then normalizes so that `A` at degree 0 is 1 and the mean
//! fitness over exposed nodes is 1.

mod binning;
mod exponent;
mod objective;
mod stats;
mod uncertainty;
mod update;

use serde::{Deserialize, Serialize};

pub use binning::{BinningScheme, DegreeBinning};
pub use exponent::{fit_attachment_exponent, ExponentFit};
pub use objective::{
    curvature_penalty, fitness_prior, gradient, log_likelihood, penalized_objective, Gradient,
};
pub use stats::{build_sufficient_stats, Segment, SufficientStats};
pub use uncertainty::{information_matrix, standard_errors, BinSigmas};
pub use update::{update_A, update_fitness};

use crate::error::{Error, Result};
use crate::temporal_net::{NodeId, NodeKind, TemporalNetwork, Time};
use objective::{objective_with, Occupancy};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimationConfig {
    /// Weight λ of the curvature penalty on `log A`.
    pub smoothing: f64,
    /// Shape `s > 1` of the mean-one fitness prior.
    pub fitness_shape: f64,
    pub max_iterations: usize,
    /// Stop once the relative change of the penalized objective is below this.
    pub tolerance: f64,
    pub binning: BinningScheme,
    /// `false` fixes every fitness at 1 (attachment-only estimation).
    pub estimate_fitness: bool,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        EstimationConfig {
            smoothing: 1.0,
            fitness_shape: 10.0,
            max_iterations: 2000,
            tolerance: 1e-14,
            binning: BinningScheme::default(),
            estimate_fitness: true,
        }
    }
}

impl EstimationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.smoothing >= 0.0 && self.smoothing.is_finite()) {
            return Err(Error::Config(format!(
                "smoothing must be >= 0, got {}",
                self.smoothing
            )));
        }
        if !(self.fitness_shape > 1.0 && self.fitness_shape.is_finite()) {
            return Err(Error::Config(format!(
                "fitness shape must be > 1, got {}",
                self.fitness_shape
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        self.binning.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinEstimate {
    pub bin_lo: u32,
    pub bin_hi: u32,
    pub value: f64,
    /// Standard deviation of `log A` for this bin.
    pub sigma: Option<f64>,
    pub selections: f64,
    /// `false` when the value was interpolated from neighbouring bins.
    pub estimated: bool,
}

impl BinEstimate {
    /// `exp(log A ± 2σ)`.
    pub fn two_sigma_band(&self) -> Option<(f64, f64)> {
        self.sigma
            .map(|s| (self.value * (-2.0 * s).exp(), self.value * (2.0 * s).exp()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeFitness {
    pub node_id: NodeId,
    pub label: String,
    pub value: f64,
    /// The node was at risk during at least one selection step. Unexposed
    /// nodes carry `value = 1` and are not identifiable.
    pub exposed: bool,
    pub selections: f64,
}

/// Slice of the network an estimation was run on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodInfo {
    pub label: String,
    pub t_start: Time,
    pub t_end: Time,
    pub carry_degrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    #[serde(rename = "A")]
    pub a: Vec<BinEstimate>,
    pub eta: Vec<NodeFitness>,
    pub alpha: Option<f64>,
    pub alpha_stderr: Option<f64>,
    pub objective_trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub sigma_fallback: bool,
    pub config: EstimationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<PeriodInfo>,
}

impl EstimationResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Attachment value for degree `k`; degrees past the last bin use it.
    pub fn attachment(&self, k: u32) -> f64 {
        let idx = self.a.partition_point(|b| b.bin_lo <= k).saturating_sub(1);
        self.a.get(idx).map_or(1.0, |b| b.value)
    }

    pub fn fitness(&self, node: NodeId) -> Option<f64> {
        self.fitness_entry(node).map(|f| f.value)
    }

    pub fn fitness_entry(&self, node: NodeId) -> Option<&NodeFitness> {
        self.eta
            .binary_search_by_key(&node, |f| f.node_id)
            .ok()
            .map(|i| &self.eta[i])
    }

    pub fn a_values(&self) -> Vec<f64> {
        self.a.iter().map(|b| b.value).collect()
    }

    pub fn binning(&self) -> Result<DegreeBinning> {
        DegreeBinning::from_bounds(self.a.iter().map(|b| (b.bin_lo, b.bin_hi)).collect())
    }

    /// Mean fitness over exposed nodes.
    pub fn mean_exposed_fitness(&self) -> f64 {
        let (sum, n) = self
            .eta
            .iter()
            .filter(|f| f.exposed)
            .fold((0.0, 0usize), |(s, n), f| (s + f.value, n + 1));
        sum / n as f64
    }
}

/// Raw output of the alternating updates, before normalization.
#[derive(Clone, Debug)]
pub struct Fit {
    pub a: Vec<f64>,
    pub eta: Vec<f64>,
    pub trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Initial scale of `A` and `η`. The normalized output does not depend on it.
#[derive(Copy, Clone, Debug)]
pub struct Start {
    pub a_scale: f64,
    pub eta_scale: f64,
}

impl Default for Start {
    fn default() -> Self {
        Start {
            a_scale: 1.0,
            eta_scale: 1.0,
        }
    }
}

/// Largest change of any `log A_b` or `log η_i` in a converged iteration.
/// Flat directions of the objective can still be moving when its relative
/// change is already at the rounding level.
const STEP_TOLERANCE: f64 = 1e-8;

/// Alternates `update_A` and `update_fitness` until the relative change of
/// the penalized objective falls below the tolerance and no log-parameter
/// moves by more than [`STEP_TOLERANCE`].
///
/// Each iteration takes two MM steps and then tries a squared extrapolation
/// (SQUAREM) through them in log space. The extrapolated point is kept only
/// if one MM step from it beats the plain double step, so every iteration is
/// an ascent step.
pub fn fit(stats: &SufficientStats, config: &EstimationConfig, start: Start) -> Result<Fit> {
    config.validate()?;
    if stats.total_selections() == 0.0 {
        return Err(Error::NoSelections);
    }
    let mut a = vec![start.a_scale; stats.bin_count()];
    let mut eta: Vec<f64> = (0..stats.node_count())
        .map(|i| {
            if config.estimate_fitness && stats.is_exposed(NodeId(i as u32)) {
                start.eta_scale
            } else {
                1.0
            }
        })
        .collect();

    let objective = |a: &[f64], eta: &[f64]| {
        let z = Occupancy::new(stats, eta).normalizers(a);
        objective_with(stats, a, eta, &z, config)
    };
    let step = |a: &[f64], eta: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let a = update_A(stats, a, eta, config)?;
        let eta = update_fitness(stats, &a, eta, config)?;
        Ok((a, eta))
    };

    let mut current = objective(&a, &eta);
    let mut trace = vec![current];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let plain = step(&a, &eta).and_then(|(a1, e1)| step(&a1, &e1).map(|p2| (a1, e1, p2)));
        let (a1, e1, (a2, e2)) = match plain {
            Ok(p) => p,
            Err(Error::Domain(msg)) => {
                // Some parameter ran off to 0 or infinity: the maximum is at
                // the boundary. Keep the last representable point.
                log::warn!("stopping at iteration {iterations}: {msg}");
                break;
            }
            Err(e) => return Err(e),
        };
        let mut best = (objective(&a2, &e2), a2, e2);
        if let Some((ax, ex)) = extrapolate([&a, &a1, &best.1], [&eta, &e1, &best.2]) {
            if let Ok((a3, e3)) = step(&ax, &ex) {
                let v = objective(&a3, &e3);
                if v > best.0 {
                    best = (v, a3, e3);
                }
            }
        }
        let (next, a_next, e_next) = best;
        let moved = a
            .iter()
            .zip(&a_next)
            .chain(eta.iter().zip(&e_next))
            .map(|(x, y)| (y.ln() - x.ln()).abs())
            .fold(0.0, f64::max);

        if next < current - 1e-9 {
            log::warn!(
                "objective decreased by {:e} at iteration {iterations}",
                current - next
            );
        }
        a = a_next;
        eta = e_next;
        trace.push(next);
        let change = (next - current).abs() / current.abs().max(f64::MIN_POSITIVE);
        current = next;
        if change < config.tolerance && moved < STEP_TOLERANCE {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("estimation stopped after {iterations} iterations without converging");
    }
    Ok(Fit {
        a,
        eta,
        trace,
        converged,
        iterations,
    })
}

/// SQUAREM point `x0 − 2γr + γ²v` in log coordinates, with
/// `r = x1 − x0`, `v = x2 − 2x1 + x0` and `γ = −|r|/|v|` capped at −1.
fn extrapolate(a: [&[f64]; 3], eta: [&[f64]; 3]) -> Option<(Vec<f64>, Vec<f64>)> {
    let logs = |x: [&[f64]; 3]| -> Vec<[f64; 3]> {
        (0..x[0].len())
            .map(|i| [x[0][i].ln(), x[1][i].ln(), x[2][i].ln()])
            .collect()
    };
    let la = logs(a);
    let le = logs(eta);
    let (mut rr, mut vv) = (0.0, 0.0);
    for p in la.iter().chain(&le) {
        let r = p[1] - p[0];
        let v = p[2] - 2.0 * p[1] + p[0];
        rr += r * r;
        vv += v * v;
    }
    if !(vv > 0.0) {
        return None;
    }
    let gamma = (-(rr / vv).sqrt()).min(-1.0);
    let apply = |x: &[[f64; 3]]| -> Vec<f64> {
        x.iter()
            .map(|p| {
                let r = p[1] - p[0];
                let v = p[2] - 2.0 * p[1] + p[0];
                (p[0] - 2.0 * gamma * r + gamma * gamma * v).exp()
            })
            .collect()
    };
    let (ax, ex) = (apply(&la), apply(&le));
    let ok = ax.iter().chain(&ex).all(|v| v.is_finite() && *v > 0.0);
    ok.then_some((ax, ex))
}

/// Fills bins that are not free parameters by log-linear interpolation
/// between the nearest free bins; outside them the boundary value is held.
fn interpolate_bins(a: &[f64], free: &[bool]) -> Vec<f64> {
    let known: Vec<usize> = (0..a.len()).filter(|&b| free[b]).collect();
    if known.is_empty() {
        return a.to_vec();
    }
    (0..a.len())
        .map(|b| {
            if free[b] {
                return a[b];
            }
            let above = known.partition_point(|&k| k < b);
            match (
                above.checked_sub(1).map(|i| known[i]),
                known.get(above).copied(),
            ) {
                (Some(lo), Some(hi)) => {
                    let w = (b - lo) as f64 / (hi - lo) as f64;
                    ((1.0 - w) * a[lo].ln() + w * a[hi].ln()).exp()
                }
                (Some(lo), None) => a[lo],
                (None, Some(hi)) => a[hi],
                (None, None) => unreachable!(),
            }
        })
        .collect()
}

/// Divides `A` by its degree-0 value, multiplies the exposed fitnesses by the
/// same factor, then rescales them to mean 1.
fn normalize(a: &mut [f64], eta: &mut [f64], exposed: &[bool], anchor_value: f64) {
    for v in a.iter_mut() {
        *v /= anchor_value;
    }
    let mut sum = 0.0;
    let mut n = 0usize;
    for (e, _) in eta.iter_mut().zip(exposed).filter(|(_, x)| **x) {
        *e *= anchor_value;
        sum += *e;
        n += 1;
    }
    if n > 0 {
        let mean = sum / n as f64;
        for (e, _) in eta.iter_mut().zip(exposed).filter(|(_, x)| **x) {
            *e /= mean;
        }
    }
}

pub fn estimate(net: &TemporalNetwork, config: &EstimationConfig) -> Result<EstimationResult> {
    estimate_from(net, config, Start::default())
}

pub fn estimate_from(
    net: &TemporalNetwork,
    config: &EstimationConfig,
    start: Start,
) -> Result<EstimationResult> {
    config.validate()?;
    let stats = build_sufficient_stats(net, &config.binning)?;
    let raw = fit(&stats, config, start)?;
    let free = update::free_bins(&stats, config);
    let exposed: Vec<bool> = (0..stats.node_count())
        .map(|i| stats.is_exposed(NodeId(i as u32)))
        .collect();

    let mut a_out = interpolate_bins(&raw.a, &free);
    let anchor = a_out[0];
    let mut eta_out = raw.eta.clone();
    normalize(&mut a_out, &mut eta_out, &exposed, anchor);

    // Report the trace on the normalized scale: only the fitness prior
    // changes under the rescaling, and it changes by a constant.
    let mut a_fit = raw.a.clone();
    let mut eta_fit = raw.eta.clone();
    normalize(&mut a_fit, &mut eta_fit, &exposed, anchor);
    let shift =
        penalized_objective(&stats, &a_fit, &eta_fit, config)? - raw.trace[raw.trace.len() - 1];
    let objective_trace: Vec<f64> = raw.trace.iter().map(|v| v + shift).collect();

    let (alpha, alpha_stderr) =
        match fit_attachment_exponent(stats.binning(), &a_out, stats.bin_selections()) {
            Ok(f) => (Some(f.alpha), f.stderr),
            Err(Error::InsufficientData(msg)) => {
                log::warn!("attachment exponent not fitted: {msg}");
                (None, None)
            }
            Err(e) => return Err(e),
        };
    let sigmas = standard_errors(&stats, &a_out, &eta_out, config)?;

    let a = (0..stats.bin_count())
        .map(|b| {
            let (bin_lo, bin_hi) = stats.binning().bounds(b);
            BinEstimate {
                bin_lo,
                bin_hi,
                value: a_out[b],
                sigma: sigmas.sigma[b],
                selections: stats.bin_selections()[b],
                estimated: free[b],
            }
        })
        .collect();
    let eta = net
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Member)
        .map(|n| NodeFitness {
            node_id: n.id,
            label: n.label.clone(),
            value: eta_out[n.id.index()],
            exposed: exposed[n.id.index()],
            selections: stats.node_selections()[n.id.index()],
        })
        .collect();

    Ok(EstimationResult {
        a,
        eta,
        alpha,
        alpha_stderr,
        objective_trace,
        converged: raw.converged,
        iterations: raw.iterations,
        sigma_fallback: sigmas.fallback,
        config: config.clone(),
        period: None,
    })
}
