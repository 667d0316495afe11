//! Fixed relevance model over a reference target column.
//!
//! The model bins the reference targets once; the relevance of a value is
//! one minus the relative density of its bin, so values from sparsely
//! populated target regions score near 1 and values from the densest
//! region score 0. Default binning is equal-width. An equal-frequency mode
//! exists for comparison, but by construction it makes every bin roughly
//! equally populated, which drives all relevances toward 0.

use super::{bin_of, relative_density_of, DensityError};

/// Default number of relevance bins.
pub const DEFAULT_RELEVANCE_BINS: usize = 20;

/// How the reference targets are binned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelevanceBinning {
    /// Bins of equal width over [min, max]. The default.
    EqualWidth,
    /// Bins holding roughly equal counts (quantile boundaries). Degenerate
    /// for relevance scoring; see the module docs.
    EqualFrequency,
}

/// Immutable histogram mapping target values to a relevance score in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct RelevanceModel {
    breaks: Vec<f64>,
    counts: Vec<u64>,
}

/// Build an equal-width relevance model. See [`build_relevance_binned`].
pub fn build_relevance(targets: &[f64], k_bins: usize) -> Result<RelevanceModel, DensityError> {
    build_relevance_binned(targets, k_bins, RelevanceBinning::EqualWidth)
}

/// Build a relevance model from a reference target column.
///
/// Requires at least two bins, finite targets, and a non-degenerate range
/// (min strictly below max).
pub fn build_relevance_binned(
    targets: &[f64],
    k_bins: usize,
    binning: RelevanceBinning,
) -> Result<RelevanceModel, DensityError> {
    if k_bins < 2 {
        return Err(DensityError::InvalidConfig(format!(
            "relevance model needs at least 2 bins, got {k_bins}"
        )));
    }
    if targets.is_empty() {
        return Err(DensityError::InvalidConfig("relevance targets are empty".into()));
    }
    if let Some(bad) = targets.iter().find(|t| !t.is_finite()) {
        return Err(DensityError::NonFinite(*bad));
    }
    let min = targets.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = targets.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min >= max {
        return Err(DensityError::DegenerateRange);
    }

    let breaks = match binning {
        RelevanceBinning::EqualWidth => {
            let width = (max - min) / k_bins as f64;
            let mut breaks: Vec<f64> = (0..=k_bins).map(|i| min + i as f64 * width).collect();
            *breaks.last_mut().expect("non-empty breaks") = max;
            breaks
        }
        RelevanceBinning::EqualFrequency => {
            let mut sorted = targets.to_vec();
            sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite targets"));
            let n = sorted.len();
            let mut breaks = vec![min];
            for i in 1..k_bins {
                let boundary = sorted[i * n / k_bins];
                if boundary > *breaks.last().expect("non-empty breaks") && boundary < max {
                    breaks.push(boundary);
                }
            }
            breaks.push(max);
            breaks
        }
    };
    if breaks.len() < 3 || breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DensityError::DegenerateRange);
    }

    let mut counts = vec![0u64; breaks.len() - 1];
    for t in targets {
        let j = bin_of(&breaks, *t).expect("targets lie inside [min, max]");
        counts[j] += 1;
    }
    Ok(RelevanceModel { breaks, counts })
}

impl RelevanceModel {
    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    /// Bin boundaries (one more entry than bins).
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Bin of `y`; values outside the model's range map to the end bins.
    pub fn bin_of_clamped(&self, y: f64) -> usize {
        bin_of(&self.breaks, y).unwrap_or_else(|| {
            if y < self.breaks[0] {
                0
            } else {
                self.counts.len() - 1
            }
        })
    }

    /// Count of bin `j` divided by the largest bin count.
    pub fn relative_density(&self, j: usize) -> Result<f64, DensityError> {
        relative_density_of(&self.counts, j)
    }

    /// Relevance of `y`: one minus the relative density of its bin.
    pub fn phi(&self, y: f64) -> f64 {
        let j = self.bin_of_clamped(y);
        let rho = relative_density_of(&self.counts, j)
            .expect("a built model holds at least one observation");
        1.0 - rho
    }
}
