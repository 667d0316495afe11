//! Target-density estimation: an incremental histogram maintained online
//! while streaming, and a fixed relevance model built once from a reference
//! target column.

mod pid;
mod relevance;

pub use pid::{PidConfig, PidHistogram};
pub use relevance::{
    build_relevance, build_relevance_binned, RelevanceBinning, RelevanceModel,
    DEFAULT_RELEVANCE_BINS,
};

use thiserror::Error;

/// Errors from histogram construction and queries.
#[derive(Debug, Error)]
pub enum DensityError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("value {0} is not finite")]
    NonFinite(f64),
    #[error("histogram is not primed yet (needs two distinct values)")]
    NotPrimed,
    #[error("bin index {index} out of range for {bins} bins")]
    BinOutOfRange { index: usize, bins: usize },
    #[error("all bins are empty")]
    AllBinsEmpty,
    #[error("target column has no spread (min equals max)")]
    DegenerateRange,
}

/// Count of bin `j` divided by the largest bin count.
pub(crate) fn relative_density_of(counts: &[u64], j: usize) -> Result<f64, DensityError> {
    if j >= counts.len() {
        return Err(DensityError::BinOutOfRange { index: j, bins: counts.len() });
    }
    let max = *counts.iter().max().expect("non-empty counts");
    if max == 0 {
        return Err(DensityError::AllBinsEmpty);
    }
    Ok(counts[j] as f64 / max as f64)
}

/// Bin of `y` in a boundary sequence `breaks` (strictly increasing, one more
/// entry than there are bins). Bins are half-open `[b_j, b_{j+1})` except the
/// last, which includes its top boundary. Returns `None` outside the range.
pub(crate) fn bin_of(breaks: &[f64], y: f64) -> Option<usize> {
    let k = breaks.len() - 1;
    if y < breaks[0] || y > breaks[k] {
        return None;
    }
    let idx = breaks.partition_point(|b| *b <= y);
    Some(idx.saturating_sub(1).min(k - 1))
}
