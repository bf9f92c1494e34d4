//! Minorize-maximize updates for the attachment values and the fitnesses.
//!
//! Both updates replace `−log Z(t)` by its tangent at the current point,
//! which is a lower bound. Any increase of the resulting surrogate is an
//! increase of the penalized objective, so each step is an ascent step.

use nalgebra::{DMatrix, DVector};

use super::objective::{
    bin_exposure, check_params, curvature_gradient, node_exposure, rate_sums, second_difference_sq,
    Occupancy,
};
use super::stats::SufficientStats;
use super::EstimationConfig;
use crate::error::{Error, Result};
use crate::temporal_net::NodeId;

const MAX_NEWTON: usize = 100;
const MAX_LOG_STEP: f64 = 5.0;

/// Which bins carry free attachment values.
///
/// With smoothing every exposed bin is a parameter: the penalty keeps even an
/// unselected bin finite. Without smoothing an unselected bin would run to
/// zero, so it is held at its current value.
pub(crate) fn free_bins(stats: &SufficientStats, config: &EstimationConfig) -> Vec<bool> {
    (0..stats.bin_count())
        .map(|b| {
            stats.is_bin_exposed(b) && (config.smoothing > 0.0 || stats.bin_selections[b] > 0.0)
        })
        .collect()
}

/// One ascent step on the attachment values with the fitnesses fixed.
#[allow(non_snake_case)]
pub fn update_A(
    stats: &SufficientStats,
    a: &[f64],
    eta: &[f64],
    config: &EstimationConfig,
) -> Result<Vec<f64>> {
    check_params(stats, a, eta)?;
    let occ = Occupancy::new(stats, eta);
    let z = occ.normalizers(a);
    let d = bin_exposure(stats, &occ, &z);
    let free = free_bins(stats, config);
    for b in 0..a.len() {
        if free[b] && !(d[b] > 0.0) {
            return Err(Error::DegenerateBin { bin: b });
        }
    }

    let mut out = a.to_vec();
    if config.smoothing == 0.0 {
        for b in 0..a.len() {
            if free[b] {
                out[b] = stats.bin_selections[b] / d[b];
            }
        }
        return Ok(out);
    }

    // The surrogate Σ_b [m_b θ_b − D_b e^θ_b] − λ P(θ) is strictly concave in
    // θ = log A. Maximize it by damped Newton steps.
    let exposed = stats.exposed_bins();
    let m: Vec<f64> = exposed.iter().map(|&b| stats.bin_selections[b]).collect();
    let dd: Vec<f64> = exposed.iter().map(|&b| d[b]).collect();
    let mut theta: Vec<f64> = exposed.iter().map(|&b| a[b].ln()).collect();
    let lambda = config.smoothing;
    let n = theta.len();

    let surrogate = |theta: &[f64]| -> f64 {
        let mut v = 0.0;
        for j in 0..n {
            v += m[j] * theta[j] - dd[j] * theta[j].exp();
        }
        v - lambda * second_difference_sq(theta)
    };

    let mut value = surrogate(&theta);
    for _ in 0..MAX_NEWTON {
        let pg = curvature_gradient(&theta);
        let mut grad = DVector::<f64>::zeros(n);
        let mut neg_hess = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            grad[j] = m[j] - dd[j] * theta[j].exp() - lambda * pg[j];
            neg_hess[(j, j)] = dd[j] * theta[j].exp();
        }
        for c in 1..n.saturating_sub(1) {
            let idx = [c - 1, c, c + 1];
            let coef = [1.0, -2.0, 1.0];
            for u in 0..3 {
                for v in 0..3 {
                    neg_hess[(idx[u], idx[v])] += 2.0 * lambda * coef[u] * coef[v];
                }
            }
        }
        let Some(chol) = neg_hess.cholesky() else {
            break;
        };
        let mut step = chol.solve(&grad);
        let biggest = step.amax();
        if biggest > MAX_LOG_STEP {
            step *= MAX_LOG_STEP / biggest;
        }
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, s)| t + s).collect();
            let v = surrogate(&trial);
            if v >= value {
                accepted = Some((trial, v));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, v)) = accepted else {
            break;
        };
        let moved = step.amax();
        theta = trial;
        value = v;
        if moved < 1e-13 {
            break;
        }
    }
    for (j, &b) in exposed.iter().enumerate() {
        out[b] = theta[j].exp();
    }
    Ok(out)
}

/// One ascent step on the fitnesses with the attachment values fixed:
/// `η_i ← (c_i + s − 1) / (E_i + s − 1)`. Nodes never at risk keep `η = 1`.
pub fn update_fitness(
    stats: &SufficientStats,
    a: &[f64],
    eta: &[f64],
    config: &EstimationConfig,
) -> Result<Vec<f64>> {
    check_params(stats, a, eta)?;
    if !config.estimate_fitness {
        return Ok(eta.to_vec());
    }
    let occ = Occupancy::new(stats, eta);
    let z = occ.normalizers(a);
    let w = rate_sums(stats, &z);
    let e = node_exposure(stats, a, &w);
    let k = config.fitness_shape - 1.0;
    Ok((0..eta.len())
        .map(|i| {
            if stats.is_exposed(NodeId(i as u32)) {
                (stats.node_selections[i] + k) / (e[i] + k)
            } else {
                1.0
            }
        })
        .collect())
}
