//! Curvature-based uncertainty for `log A`.
//!
//! With the fitnesses held at their estimates, the observed information of
//! the penalized objective in `θ = log A` is
//!
//! > I = Σ_t m(t) (diag p(t) − p(t) p(t)ᵀ) + λ ∇²P
//!
//! where `p_b(t) = A_b S_b(t) / Z(t)`. Rescaling every `A_b` by one constant
//! leaves the likelihood unchanged, so `I` is singular along that direction.
//! The anchor bin (the normalization reference) is fixed, and its row and
//! column are dropped before inversion.

use nalgebra::DMatrix;

use super::objective::Occupancy;
use super::stats::SufficientStats;
use super::update::free_bins;
use super::EstimationConfig;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct BinSigmas {
    /// Per bin; `None` for bins that are not free parameters.
    pub sigma: Vec<Option<f64>>,
    /// The information matrix was not positive definite and per-bin
    /// curvature reciprocals were used instead.
    pub fallback: bool,
}

/// Index of the bin every other bin is measured against: bin 0 when it is a
/// free parameter, otherwise the lowest free bin.
pub(crate) fn anchor_bin(free: &[bool]) -> Option<usize> {
    if free.first() == Some(&true) {
        Some(0)
    } else {
        free.iter().position(|&f| f)
    }
}

/// Observed information over the free bins other than the anchor, with the
/// bin index of each row.
pub fn information_matrix(
    stats: &SufficientStats,
    a: &[f64],
    eta: &[f64],
    config: &EstimationConfig,
) -> Result<(Vec<usize>, DMatrix<f64>)> {
    super::objective::check_params(stats, a, eta)?;
    let free = free_bins(stats, config);
    let anchor = anchor_bin(&free);
    let params: Vec<usize> = (0..a.len())
        .filter(|&b| free[b] && Some(b) != anchor)
        .collect();
    let mut pos = vec![usize::MAX; a.len()];
    for (j, &b) in params.iter().enumerate() {
        pos[b] = j;
    }
    let n = params.len();
    let mut info = DMatrix::<f64>::zeros(n, n);

    let occ = Occupancy::new(stats, eta);
    let z = occ.normalizers(a);
    let mut p = vec![0.0; n];
    for s in 0..z.len() {
        let m = stats.step_selections[s];
        for (j, &b) in params.iter().enumerate() {
            p[j] = a[b] * occ.row(b)[s] / z[s];
        }
        for j in 0..n {
            if p[j] == 0.0 {
                continue;
            }
            info[(j, j)] += m * p[j];
            for k in 0..n {
                info[(j, k)] -= m * p[j] * p[k];
            }
        }
    }

    if config.smoothing > 0.0 {
        // P = Σ_c (θ_{c+1} − 2θ_c + θ_{c−1})² over consecutive exposed bins.
        let exposed = stats.exposed_bins();
        for c in 1..exposed.len().saturating_sub(1) {
            let idx = [exposed[c - 1], exposed[c], exposed[c + 1]];
            let coef = [1.0, -2.0, 1.0];
            for u in 0..3 {
                for v in 0..3 {
                    let (ju, jv) = (pos[idx[u]], pos[idx[v]]);
                    if ju != usize::MAX && jv != usize::MAX {
                        info[(ju, jv)] += config.smoothing * 2.0 * coef[u] * coef[v];
                    }
                }
            }
        }
    }
    Ok((params, info))
}

/// Standard deviation of `log Â_b` per bin. The anchor bin gets 0.
pub fn standard_errors(
    stats: &SufficientStats,
    a: &[f64],
    eta: &[f64],
    config: &EstimationConfig,
) -> Result<BinSigmas> {
    let (params, info) = information_matrix(stats, a, eta, config)?;
    let free = free_bins(stats, config);
    let mut sigma = vec![None; a.len()];
    if let Some(anchor) = anchor_bin(&free) {
        sigma[anchor] = Some(0.0);
    }
    let mut fallback = false;
    match info.clone().cholesky() {
        Some(chol) => {
            let inv = chol.inverse();
            for (j, &b) in params.iter().enumerate() {
                sigma[b] = Some(inv[(j, j)].sqrt());
            }
        }
        None => {
            fallback = true;
            log::warn!("information matrix is not positive definite; using per-bin curvature");
            for (j, &b) in params.iter().enumerate() {
                let d = info[(j, j)];
                sigma[b] = (d > 0.0).then(|| 1.0 / d.sqrt());
            }
        }
    }
    Ok(BinSigmas { sigma, fallback })
}
