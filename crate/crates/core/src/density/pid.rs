//! Single-pass incremental histogram.
//!
//! The histogram primes itself from the stream: values are buffered until
//! two distinct ones have been seen, then `initial_bins` equal-width bins
//! are laid over the buffered range and the buffer is replayed. From then
//! on each value lands in a bin (extending the range with step-width bins
//! when it falls outside) and a bin holding more than `split_threshold` of
//! the total mass is split at its midpoint. Memory is bounded by
//! `max_bins`: splits are suppressed at the cap and range extensions merge
//! the outermost bin pair on the extended side — or, when step-width
//! extension cannot fit at all, add one wide covering bin.

use super::{bin_of, relative_density_of, DensityError};

/// Construction parameters for [`PidHistogram`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidConfig {
    initial_bins: usize,
    split_threshold: f64,
    max_bins: usize,
}

impl Default for PidConfig {
    fn default() -> Self {
        PidConfig { initial_bins: 10, split_threshold: 0.15, max_bins: 400 }
    }
}

impl PidConfig {
    /// Requires `initial_bins ≥ 2`, `split_threshold` in (0, 1), and
    /// `max_bins ≥ initial_bins`.
    pub fn new(
        initial_bins: usize,
        split_threshold: f64,
        max_bins: usize,
    ) -> Result<Self, DensityError> {
        if initial_bins < 2 {
            return Err(DensityError::InvalidConfig(format!(
                "initial_bins must be at least 2, got {initial_bins}"
            )));
        }
        if !(split_threshold > 0.0 && split_threshold < 1.0) {
            return Err(DensityError::InvalidConfig(format!(
                "split_threshold must lie in (0, 1), got {split_threshold}"
            )));
        }
        if max_bins < initial_bins {
            return Err(DensityError::InvalidConfig(format!(
                "max_bins ({max_bins}) must be at least initial_bins ({initial_bins})"
            )));
        }
        Ok(PidConfig { initial_bins, split_threshold, max_bins })
    }

    pub fn initial_bins(&self) -> usize {
        self.initial_bins
    }

    pub fn split_threshold(&self) -> f64 {
        self.split_threshold
    }

    pub fn max_bins(&self) -> usize {
        self.max_bins
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
struct Bins {
    /// Strictly increasing boundaries; one more entry than bins.
    breaks: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
    /// Width used for range extensions, fixed at priming time.
    step: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum State {
    Buffering(Vec<f64>),
    Primed(Bins),
}

/// Online density histogram over a single real variable.
#[derive(Debug, Clone, PartialEq)]
pub struct PidHistogram {
    config: PidConfig,
    state: State,
}

impl PidHistogram {
    pub fn new(config: PidConfig) -> Self {
        PidHistogram { config, state: State::Buffering(Vec::new()) }
    }

    pub fn with_defaults() -> Self {
        Self::new(PidConfig::default())
    }

    pub fn config(&self) -> &PidConfig {
        &self.config
    }

    /// False until two distinct values have been observed.
    pub fn is_primed(&self) -> bool {
        matches!(self.state, State::Primed(_))
    }

    /// Number of observed values (buffered values count).
    pub fn total(&self) -> u64 {
        match &self.state {
            State::Buffering(buffer) => buffer.len() as u64,
            State::Primed(bins) => bins.total,
        }
    }

    /// Number of bins; 0 while unprimed.
    pub fn bin_count(&self) -> usize {
        match &self.state {
            State::Buffering(_) => 0,
            State::Primed(bins) => bins.counts.len(),
        }
    }

    /// Bin boundaries; empty while unprimed.
    pub fn breaks(&self) -> &[f64] {
        match &self.state {
            State::Buffering(_) => &[],
            State::Primed(bins) => &bins.breaks,
        }
    }

    /// Per-bin counts; empty while unprimed.
    pub fn counts(&self) -> &[u64] {
        match &self.state {
            State::Buffering(_) => &[],
            State::Primed(bins) => &bins.counts,
        }
    }

    /// Observe one value.
    pub fn update(&mut self, y: f64) -> Result<(), DensityError> {
        if !y.is_finite() {
            return Err(DensityError::NonFinite(y));
        }
        match &mut self.state {
            State::Buffering(buffer) => {
                buffer.push(y);
                let first = buffer[0];
                if buffer.iter().any(|v| *v != first) {
                    if let Some(mut bins) = Bins::prime(buffer, self.config.initial_bins) {
                        for v in std::mem::take(buffer) {
                            bins.insert_raw(v);
                        }
                        self.state = State::Primed(bins);
                    }
                }
            }
            State::Primed(bins) => bins.insert(y, &self.config),
        }
        Ok(())
    }

    /// Bin containing `y` (0-based, half-open bins, inclusive top boundary),
    /// or `None` when `y` lies outside the current range.
    pub fn bin_index(&self, y: f64) -> Result<Option<usize>, DensityError> {
        match &self.state {
            State::Buffering(_) => Err(DensityError::NotPrimed),
            State::Primed(bins) => Ok(bin_of(&bins.breaks, y)),
        }
    }

    /// Like [`bin_index`](Self::bin_index) but out-of-range values map to
    /// the nearest end bin.
    pub fn clamped_bin_index(&self, y: f64) -> Result<usize, DensityError> {
        match &self.state {
            State::Buffering(_) => Err(DensityError::NotPrimed),
            State::Primed(bins) => Ok(bin_of(&bins.breaks, y).unwrap_or_else(|| {
                if y < bins.breaks[0] {
                    0
                } else {
                    bins.counts.len() - 1
                }
            })),
        }
    }

    /// Count of bin `j` divided by the largest bin count.
    pub fn relative_density(&self, j: usize) -> Result<f64, DensityError> {
        match &self.state {
            State::Buffering(_) => Err(DensityError::NotPrimed),
            State::Primed(bins) => relative_density_of(&bins.counts, j),
        }
    }
}

impl Bins {
    /// Equal-width bins over the buffered range; `None` when the range is
    /// too narrow to produce strictly increasing boundaries.
    fn prime(buffer: &[f64], initial_bins: usize) -> Option<Bins> {
        let min = buffer.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = buffer.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let step = (max - min) / initial_bins as f64;
        if !(step > 0.0 && step.is_finite()) {
            return None;
        }
        let mut breaks: Vec<f64> =
            (0..=initial_bins).map(|i| min + i as f64 * step).collect();
        *breaks.last_mut().expect("non-empty breaks") = max;
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        Some(Bins { breaks, counts: vec![0; initial_bins], total: 0, step })
    }

    /// Increment the bin of an in-range value without split checks (used to
    /// replay the priming buffer, whose values all lie inside the range).
    fn insert_raw(&mut self, y: f64) {
        let j = bin_of(&self.breaks, y).expect("buffered value inside primed range");
        self.counts[j] += 1;
        self.total += 1;
    }

    fn insert(&mut self, y: f64, config: &PidConfig) {
        if y < self.breaks[0] {
            self.extend(Side::Below, y, config.max_bins);
        } else if y > *self.breaks.last().expect("non-empty breaks") {
            self.extend(Side::Above, y, config.max_bins);
        }
        let j = bin_of(&self.breaks, y).expect("extension covers the value");
        self.counts[j] += 1;
        self.total += 1;
        self.maybe_split(j, config);
    }

    /// Grow the range on one side until it covers `y`, preferring step-width
    /// bins and staying within the bin cap.
    fn extend(&mut self, side: Side, y: f64, max_bins: usize) {
        let edge = match side {
            Side::Below => self.breaks[0],
            Side::Above => *self.breaks.last().expect("non-empty breaks"),
        };
        let gap = match side {
            Side::Below => edge - y,
            Side::Above => y - edge,
        };
        // Even merging everything down to one bin frees at most max_bins − 1
        // slots, so larger extensions go straight to a single wide bin.
        let max_extension = max_bins - 1;
        let mut m = ((gap / self.step).ceil() as usize).max(1);
        while m <= max_extension && !self.reaches(side, edge, m, y) {
            m += 1;
        }
        if m > max_extension {
            if self.counts.len() == max_bins {
                self.merge_edge_pair(side);
            }
            self.push_wide_bin(side, y);
            return;
        }
        while self.counts.len() + m > max_bins {
            self.merge_edge_pair(side);
        }
        if !self.push_step_bins(side, edge, m) {
            self.push_wide_bin(side, y);
        }
    }

    fn reaches(&self, side: Side, edge: f64, m: usize, y: f64) -> bool {
        match side {
            Side::Below => edge - m as f64 * self.step <= y,
            Side::Above => edge + m as f64 * self.step >= y,
        }
    }

    /// Append or prepend `m` empty step-width bins. Returns false (leaving
    /// the histogram unchanged) if floating-point absorption would produce
    /// non-increasing boundaries.
    fn push_step_bins(&mut self, side: Side, edge: f64, m: usize) -> bool {
        let offsets = 1..=m;
        let fresh: Vec<f64> = match side {
            Side::Below => offsets.rev().map(|i| edge - i as f64 * self.step).collect(),
            Side::Above => offsets.map(|i| edge + i as f64 * self.step).collect(),
        };
        let junction_ok = match side {
            Side::Below => *fresh.last().expect("m >= 1") < self.breaks[0],
            Side::Above => fresh[0] > *self.breaks.last().expect("non-empty breaks"),
        };
        if !junction_ok || fresh.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        match side {
            Side::Below => {
                self.breaks.splice(0..0, fresh);
                self.counts.splice(0..0, std::iter::repeat_n(0, m));
            }
            Side::Above => {
                self.breaks.extend(fresh);
                self.counts.extend(std::iter::repeat_n(0, m));
            }
        }
        true
    }

    /// Add a single empty bin whose outer boundary is exactly `y`.
    fn push_wide_bin(&mut self, side: Side, y: f64) {
        match side {
            Side::Below => {
                self.breaks.insert(0, y);
                self.counts.insert(0, 0);
            }
            Side::Above => {
                self.breaks.push(y);
                self.counts.push(0);
            }
        }
    }

    /// Merge the outermost pair of bins on one side, freeing one bin slot.
    fn merge_edge_pair(&mut self, side: Side) {
        debug_assert!(self.counts.len() >= 2);
        match side {
            Side::Below => {
                let absorbed = self.counts.remove(1);
                self.counts[0] += absorbed;
                self.breaks.remove(1);
            }
            Side::Above => {
                let absorbed = self.counts.pop().expect("at least two bins");
                *self.counts.last_mut().expect("at least one bin") += absorbed;
                let top = self.breaks.pop().expect("non-empty breaks");
                *self.breaks.last_mut().expect("non-empty breaks") = top;
            }
        }
    }

    /// Split bin `j` at its midpoint when it holds more than the threshold
    /// share of the total mass; odd counts give the extra unit to the lower
    /// child. At the bin cap, or when the midpoint would not be strictly
    /// between the boundaries, the bin is left alone.
    fn maybe_split(&mut self, j: usize, config: &PidConfig) {
        if self.counts.len() >= config.max_bins {
            return;
        }
        let c = self.counts[j];
        if c as f64 <= config.split_threshold * self.total as f64 {
            return;
        }
        let lo = self.breaks[j];
        let hi = self.breaks[j + 1];
        let mid = lo + (hi - lo) / 2.0;
        if !(lo < mid && mid < hi) {
            return;
        }
        self.breaks.insert(j + 1, mid);
        self.counts[j] = c.div_ceil(2);
        self.counts.insert(j + 1, c / 2);
    }
}
