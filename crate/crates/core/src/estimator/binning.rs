use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How degrees are grouped into bins that share one attachment value.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BinningScheme {
    /// One bin per degree.
    PerDegree,
    /// Degree 0 alone, then bins whose width grows geometrically by `base`.
    Logarithmic { base: f64 },
    /// One bin per degree up to `linear_until`, logarithmic bins above it.
    Hybrid { linear_until: u32, base: f64 },
}

impl Default for BinningScheme {
    fn default() -> Self {
        BinningScheme::Hybrid {
            linear_until: 50,
            base: 1.25,
        }
    }
}

impl BinningScheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BinningScheme::PerDegree => Ok(()),
            BinningScheme::Logarithmic { base } | BinningScheme::Hybrid { base, .. } => {
                if base.is_finite() && base > 1.0 {
                    Ok(())
                } else {
                    Err(Error::Config(format!(
                        "binning base must be > 1, got {base}"
                    )))
                }
            }
        }
    }

    /// Concrete bins covering `[0, k_max]`.
    pub fn build(&self, k_max: u32) -> DegreeBinning {
        let mut bins = vec![(0u32, 0u32)];
        let mut lo = 1u32;
        while lo <= k_max {
            let hi = match *self {
                BinningScheme::PerDegree => lo,
                BinningScheme::Hybrid { linear_until, .. } if lo <= linear_until => lo,
                BinningScheme::Logarithmic { base } | BinningScheme::Hybrid { base, .. } => {
                    let next = ((lo as f64) * base).ceil() as u32;
                    next.max(lo + 1) - 1
                }
            };
            let hi = hi.min(k_max);
            bins.push((lo, hi));
            lo = hi + 1;
        }
        DegreeBinning {
            bins,
            scheme: *self,
        }
    }
}

/// Disjoint, ascending degree bins. Bin 0 is always `{0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeBinning {
    bins: Vec<(u32, u32)>,
    scheme: BinningScheme,
}

impl DegreeBinning {
    pub fn from_bounds(bins: Vec<(u32, u32)>) -> Result<Self> {
        if bins.first() != Some(&(0, 0)) {
            return Err(Error::Config(
                "degree bins must start with the bin {0}".into(),
            ));
        }
        for w in bins.windows(2) {
            if w[1].0 != w[0].1 + 1 || w[1].1 < w[1].0 {
                return Err(Error::Config(format!(
                    "degree bins {:?} and {:?} do not tile",
                    w[0], w[1]
                )));
            }
        }
        Ok(DegreeBinning {
            bins,
            scheme: BinningScheme::PerDegree,
        })
    }

    pub fn scheme(&self) -> BinningScheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn bounds(&self, bin: usize) -> (u32, u32) {
        self.bins[bin]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.bins.iter().copied()
    }

    pub fn k_max(&self) -> u32 {
        self.bins.last().map_or(0, |b| b.1)
    }

    /// Bin holding degree `k`; degrees past the last bin map to the last bin.
    pub fn bin_of(&self, k: u32) -> usize {
        let idx = self.bins.partition_point(|&(lo, _)| lo <= k);
        idx.saturating_sub(1)
    }

    /// Geometric mean of the integer degrees in the bin. Zero for bin `{0}`.
    pub fn representative(&self, bin: usize) -> f64 {
        let (lo, hi) = self.bins[bin];
        if lo == 0 {
            return 0.0;
        }
        let n = (hi - lo + 1) as f64;
        let mean_log: f64 = (lo..=hi).map(|k| (k as f64).ln()).sum::<f64>() / n;
        mean_log.exp()
    }
}
