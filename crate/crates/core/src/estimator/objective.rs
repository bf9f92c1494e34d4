//! Log-likelihood, penalties, and the per-step sums they share.

use super::stats::SufficientStats;
use super::EstimationConfig;
use crate::error::{Error, Result};

/// Per-step occupancy weighted by fitness: `S_b(t) = Σ_{j at risk, bin b} η_j`.
///
/// Stored bin-major: `occupancy[b * steps + s]`.
pub(crate) struct Occupancy {
    pub steps: usize,
    pub values: Vec<f64>,
}

impl Occupancy {
    pub fn new(stats: &SufficientStats, eta: &[f64]) -> Occupancy {
        let steps = stats.steps.len();
        let bins = stats.bin_count();
        // Difference arrays per bin, one spare slot for the exclusive end.
        // The head count resets the running sum whenever a bin empties, so
        // an empty bin reads exactly zero instead of a rounding residue.
        let mut diff = vec![0.0; bins * (steps + 1)];
        let mut heads = vec![0i32; bins * (steps + 1)];
        for seg in &stats.segments {
            let row = seg.bin as usize * (steps + 1);
            let w = eta[seg.node.index()];
            diff[row + seg.start as usize] += w;
            diff[row + seg.end as usize] -= w;
            heads[row + seg.start as usize] += 1;
            heads[row + seg.end as usize] -= 1;
        }
        let mut values = vec![0.0; bins * steps];
        for b in 0..bins {
            let (mut acc, mut count) = (0.0, 0i32);
            for s in 0..steps {
                acc += diff[b * (steps + 1) + s];
                count += heads[b * (steps + 1) + s];
                if count == 0 {
                    acc = 0.0;
                }
                values[b * steps + s] = acc;
            }
        }
        Occupancy { steps, values }
    }

    #[inline]
    pub fn row(&self, bin: usize) -> &[f64] {
        &self.values[bin * self.steps..(bin + 1) * self.steps]
    }

    /// `Z(t) = Σ_b A_b S_b(t)`.
    pub fn normalizers(&self, a: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.steps];
        for (b, &ab) in a.iter().enumerate() {
            for (zs, &sv) in z.iter_mut().zip(self.row(b)) {
                *zs += ab * sv;
            }
        }
        z
    }
}

pub(crate) fn check_params(stats: &SufficientStats, a: &[f64], eta: &[f64]) -> Result<()> {
    if a.len() != stats.bin_count() {
        return Err(Error::Domain(format!(
            "expected {} attachment values, got {}",
            stats.bin_count(),
            a.len()
        )));
    }
    if eta.len() != stats.node_count() {
        return Err(Error::Domain(format!(
            "expected {} fitness values, got {}",
            stats.node_count(),
            eta.len()
        )));
    }
    if let Some((b, v)) = a
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v > 0.0))
    {
        return Err(Error::Domain(format!("A[{b}] = {v} is not positive")));
    }
    if let Some((i, v)) = eta
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v > 0.0))
    {
        return Err(Error::Domain(format!("eta[{i}] = {v} is not positive")));
    }
    Ok(())
}

/// `Σ_b m_b log A_b + Σ_i c_i log η_i − Σ_t m(t) log Z(t)`.
pub fn log_likelihood(stats: &SufficientStats, a: &[f64], eta: &[f64]) -> Result<f64> {
    check_params(stats, a, eta)?;
    let occ = Occupancy::new(stats, eta);
    Ok(log_likelihood_with(stats, a, eta, &occ.normalizers(a)))
}

/// Neumaier-compensated running sum. The objective is a difference of large
/// sums and its per-iteration change gets tiny near convergence.
#[derive(Default)]
pub(crate) struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub(crate) fn log_likelihood_with(
    stats: &SufficientStats,
    a: &[f64],
    eta: &[f64],
    z: &[f64],
) -> f64 {
    let mut ll = Accumulator::default();
    for (&m, &ab) in stats.bin_selections.iter().zip(a) {
        if m > 0.0 {
            ll.add(m * ab.ln());
        }
    }
    for (&c, &e) in stats.node_selections.iter().zip(eta) {
        if c > 0.0 {
            ll.add(c * e.ln());
        }
    }
    for (&m, &zs) in stats.step_selections.iter().zip(z) {
        ll.add(-m * zs.ln());
    }
    ll.value()
}

/// Sum of squared second differences of `log A` over consecutive exposed bins.
pub fn curvature_penalty(stats: &SufficientStats, a: &[f64]) -> f64 {
    let theta: Vec<f64> = stats.exposed_bins().iter().map(|&b| a[b].ln()).collect();
    second_difference_sq(&theta)
}

pub(crate) fn second_difference_sq(theta: &[f64]) -> f64 {
    theta
        .windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]).powi(2))
        .sum()
}

/// Mean-one-mode prior on fitness, summed over exposed nodes.
pub fn fitness_prior(stats: &SufficientStats, eta: &[f64], shape: f64) -> f64 {
    let k = shape - 1.0;
    let mut acc = Accumulator::default();
    for i in
        (0..stats.node_count()).filter(|&i| stats.node_segments[i].1 > stats.node_segments[i].0)
    {
        acc.add(k * (eta[i].ln() - eta[i]));
    }
    acc.value()
}

/// Log-likelihood minus `λ` times the curvature penalty, plus the fitness
/// prior when fitness is estimated.
pub fn penalized_objective(
    stats: &SufficientStats,
    a: &[f64],
    eta: &[f64],
    config: &EstimationConfig,
) -> Result<f64> {
    config.validate()?;
    let ll = log_likelihood(stats, a, eta)?;
    Ok(ll + penalty_terms(stats, a, eta, config))
}

pub(crate) fn penalty_terms(
    stats: &SufficientStats,
    a: &[f64],
    eta: &[f64],
    config: &EstimationConfig,
) -> f64 {
    let mut v = 0.0;
    if config.smoothing > 0.0 {
        v -= config.smoothing * curvature_penalty(stats, a);
    }
    if config.estimate_fitness {
        v += fitness_prior(stats, eta, config.fitness_shape);
    }
    v
}

pub(crate) fn objective_with(
    stats: &SufficientStats,
    a: &[f64],
    eta: &[f64],
    z: &[f64],
    config: &EstimationConfig,
) -> f64 {
    log_likelihood_with(stats, a, eta, z) + penalty_terms(stats, a, eta, config)
}

/// Range sums of the rates `m(t) / Z(t)`.
///
/// A disjoint sparse table: every range is covered by at most two stored
/// partial sums of its own terms, so no large total is ever subtracted. A
/// step where `Z(t)` is tiny carries a huge rate, and plain prefix-sum
/// differences would lose every smaller range after it to cancellation.
pub(crate) struct RateSums {
    levels: Vec<Vec<f64>>,
    rates: Vec<f64>,
}

impl RateSums {
    /// Sum over the half-open step range `[start, end)`.
    pub(crate) fn sum(&self, start: usize, end: usize) -> f64 {
        if end <= start {
            return 0.0;
        }
        let (l, r) = (start, end - 1);
        if l == r {
            return self.rates[l];
        }
        let level = (usize::BITS - 1 - (l ^ r).leading_zeros()) as usize;
        self.levels[level][l] + self.levels[level][r]
    }
}

pub(crate) fn rate_sums(stats: &SufficientStats, z: &[f64]) -> RateSums {
    RateSums::new(
        stats
            .step_selections
            .iter()
            .zip(z)
            .map(|(&m, &zs)| m / zs)
            .collect(),
    )
}

impl RateSums {
    pub(crate) fn new(rates: Vec<f64>) -> RateSums {
        let n = rates.len().next_power_of_two().max(2);
        let depth = n.trailing_zeros() as usize;
        let at = |i: usize| rates.get(i).copied().unwrap_or(0.0);
        let mut levels = Vec::with_capacity(depth);
        for h in 0..depth {
            // Blocks of 2^(h+1) split at their midpoint: suffix sums to the left
            // of it, prefix sums from it onwards.
            let half = 1usize << h;
            let mut row = vec![0.0; n];
            for mid in (half..n).step_by(2 * half) {
                let mut acc = 0.0;
                for i in (mid - half..mid).rev() {
                    acc += at(i);
                    row[i] = acc;
                }
                acc = 0.0;
                for i in mid..mid + half {
                    acc += at(i);
                    row[i] = acc;
                }
            }
            levels.push(row);
        }
        RateSums { levels, rates }
    }
}

/// `D_b = Σ_t m(t) S_b(t) / Z(t)`: the expected-selection denominator per bin.
pub(crate) fn bin_exposure(stats: &SufficientStats, occ: &Occupancy, z: &[f64]) -> Vec<f64> {
    (0..stats.bin_count())
        .map(|b| {
            occ.row(b)
                .iter()
                .zip(z)
                .zip(&stats.step_selections)
                .map(|((&sv, &zs), &m)| if sv > 0.0 { m * sv / zs } else { 0.0 })
                .sum()
        })
        .collect()
}

/// `E_i = Σ_{t: i at risk} m(t) A_{bin(i,t)} / Z(t)`.
pub(crate) fn node_exposure(stats: &SufficientStats, a: &[f64], w: &RateSums) -> Vec<f64> {
    (0..stats.node_count())
        .map(|i| {
            stats
                .node_segments(i)
                .iter()
                .map(|seg| a[seg.bin as usize] * w.sum(seg.start as usize, seg.end as usize))
                .sum()
        })
        .collect()
}

/// Derivative of the curvature penalty with respect to `log A` of each
/// exposed bin (indexed by position in the exposed list).
pub(crate) fn curvature_gradient(theta: &[f64]) -> Vec<f64> {
    let n = theta.len();
    let mut g = vec![0.0; n];
    for c in 1..n.saturating_sub(1) {
        let d = theta[c + 1] - 2.0 * theta[c] + theta[c - 1];
        g[c - 1] += 2.0 * d;
        g[c] -= 4.0 * d;
        g[c + 1] += 2.0 * d;
    }
    g
}

/// Gradient of the penalized objective with respect to `log A_b` (per bin)
/// and `log η_i` (per node).
#[derive(Clone, Debug)]
pub struct Gradient {
    pub log_a: Vec<f64>,
    pub log_eta: Vec<f64>,
    /// Gross magnitude of the terms that cancel at a stationary point, per
    /// coordinate; used to express the gradient in relative terms.
    pub scale_a: Vec<f64>,
    pub scale_eta: Vec<f64>,
}

impl Gradient {
    /// Largest `|g_j| / scale_j` over all coordinates.
    pub fn max_relative(&self) -> f64 {
        self.log_a
            .iter()
            .zip(&self.scale_a)
            .chain(self.log_eta.iter().zip(&self.scale_eta))
            .filter(|(_, s)| **s > 0.0)
            .map(|(g, s)| g.abs() / s)
            .fold(0.0, f64::max)
    }
}

pub fn gradient(
    stats: &SufficientStats,
    a: &[f64],
    eta: &[f64],
    config: &EstimationConfig,
) -> Result<Gradient> {
    check_params(stats, a, eta)?;
    let occ = Occupancy::new(stats, eta);
    let z = occ.normalizers(a);
    let d = bin_exposure(stats, &occ, &z);
    let w = rate_sums(stats, &z);
    let e = node_exposure(stats, a, &w);

    let mut log_a: Vec<f64> = (0..a.len())
        .map(|b| stats.bin_selections[b] - a[b] * d[b])
        .collect();
    let mut scale_a: Vec<f64> = (0..a.len())
        .map(|b| stats.bin_selections[b] + a[b] * d[b])
        .collect();
    if config.smoothing > 0.0 {
        let exposed = stats.exposed_bins();
        let theta: Vec<f64> = exposed.iter().map(|&b| a[b].ln()).collect();
        let pg = curvature_gradient(&theta);
        for (j, &b) in exposed.iter().enumerate() {
            log_a[b] -= config.smoothing * pg[j];
            scale_a[b] += config.smoothing * pg[j].abs();
        }
    }

    if config.smoothing == 0.0 {
        // Bins never selected are held fixed when unpenalized.
        for b in 0..a.len() {
            if stats.bin_selections[b] == 0.0 {
                scale_a[b] = 0.0;
            }
        }
    }

    let mut log_eta = vec![0.0; eta.len()];
    let mut scale_eta = vec![0.0; eta.len()];
    for i in 0..eta.len() {
        if !config.estimate_fitness || !stats.is_exposed(crate::temporal_net::NodeId(i as u32)) {
            continue;
        }
        log_eta[i] = stats.node_selections[i] - eta[i] * e[i];
        scale_eta[i] = stats.node_selections[i] + eta[i] * e[i];
        let k = config.fitness_shape - 1.0;
        log_eta[i] += k * (1.0 - eta[i]);
        scale_eta[i] += k * (1.0 + eta[i]);
    }
    Ok(Gradient {
        log_a,
        log_eta,
        scale_a,
        scale_eta,
    })
}
