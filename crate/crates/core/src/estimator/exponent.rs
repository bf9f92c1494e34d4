use serde::{Deserialize, Serialize};

use super::binning::DegreeBinning;
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub alpha: f64,
    /// `None` when the fit has no residual degrees of freedom.
    pub stderr: Option<f64>,
    pub bins_used: usize,
}

/// Weighted least squares of `log A_b` on `log k̄_b`, where `k̄_b` is the
/// geometric mean of the bin's degrees. The bin `{0}` and bins with zero
/// weight are skipped.
pub fn fit_attachment_exponent(
    binning: &DegreeBinning,
    a: &[f64],
    weights: &[f64],
) -> Result<ExponentFit> {
    if a.len() != binning.len() || weights.len() != binning.len() {
        return Err(Error::Domain(
            "attachment values and weights must match the binning".into(),
        ));
    }
    let pts: Vec<(f64, f64, f64)> = (0..binning.len())
        .filter(|&b| binning.bounds(b).0 >= 1 && weights[b] > 0.0 && a[b] > 0.0 && a[b].is_finite())
        .map(|b| (binning.representative(b).ln(), a[b].ln(), weights[b]))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "exponent fit needs 2 bins with degree >= 1 and positive weight, found {}",
            pts.len()
        )));
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData(
            "exponent fit needs at least two distinct degrees".into(),
        ));
    }
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    let alpha = sxy / sxx;
    let stderr = (pts.len() > 2).then(|| {
        let rss: f64 = pts
            .iter()
            .map(|p| p.2 * (p.1 - my - alpha * (p.0 - mx)).powi(2))
            .sum();
        (rss / (pts.len() - 2) as f64 / sxx).sqrt()
    });
    Ok(ExponentFit {
        alpha,
        stderr,
        bins_used: pts.len(),
    })
}
