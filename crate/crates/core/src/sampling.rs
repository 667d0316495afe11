//! Rarity-driven selection and replication rules.
//!
//! The histogram-based rules map the relative density ρ of an incoming
//! target's bin to a probability `p = exp(−β·ρ)` — near 1 for rare targets,
//! small for dense ones — and either keep the instance with probability `p`
//! (undersampling) or train extra times while a single uniform draw stays
//! under a geometrically shrinking `p` (oversampling). The Chebyshev rules
//! are distribution-free baselines that score rarity by the standardized
//! distance from the running target mean instead of a histogram.
//!
//! All decision functions are pure given explicit uniform draws, so runs
//! can be replayed deterministically.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::{DensityError, PidHistogram};

/// Errors from sampling configuration and decision rules.
#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("replication draw must come from the open interval (0, 1); got 0")]
    ZeroDraw,
    #[error("running statistics need at least 2 observations, have {0}")]
    InsufficientStats(u64),
}

/// Training-selection strategy for the prequential harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Train on every instance.
    Baseline,
    /// Keep an instance for training with probability exp(−β·ρ).
    HistUs,
    /// Train once, then replicate while one draw stays under the decaying
    /// probability.
    HistOs,
    /// Keep an instance if it is far from the running mean (plus a second
    /// chance for rejected ones).
    ChebyUs,
    /// Train a number of times growing with the distance from the running
    /// mean.
    ChebyOs,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Baseline,
        Strategy::HistUs,
        Strategy::HistOs,
        Strategy::ChebyUs,
        Strategy::ChebyOs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Baseline => "baseline",
            Strategy::HistUs => "hist-us",
            Strategy::HistOs => "hist-os",
            Strategy::ChebyUs => "cheby-us",
            Strategy::ChebyOs => "cheby-os",
        }
    }

    /// Whether the rule consults the running Chebyshev statistics.
    pub fn uses_cheby_stats(&self) -> bool {
        matches!(self, Strategy::ChebyUs | Strategy::ChebyOs)
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = SamplingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .iter()
            .find(|v| v.name() == s)
            .copied()
            .ok_or_else(|| {
                SamplingError::InvalidConfig(format!(
                    "unknown strategy {s:?} (expected baseline, hist-us, hist-os, cheby-us, or cheby-os)"
                ))
            })
    }
}

/// Parameters shared by the sampling rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    beta: f64,
    alpha: f64,
    second_chance: f64,
    max_replications: u32,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { beta: 4.0, alpha: 1.02, second_chance: 0.15, max_replications: 1000 }
    }
}

impl SamplerConfig {
    /// Requires `beta ≥ 0`, `alpha > 1` (the replication loop must shrink
    /// its probability), `second_chance` in [0, 1], and a positive
    /// replication cap.
    pub fn new(
        beta: f64,
        alpha: f64,
        second_chance: f64,
        max_replications: u32,
    ) -> Result<Self, SamplingError> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(SamplingError::InvalidConfig(format!(
                "beta must be a finite non-negative number, got {beta}"
            )));
        }
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(SamplingError::InvalidConfig(format!(
                "alpha must be a finite number above 1, got {alpha}"
            )));
        }
        if !(0.0..=1.0).contains(&second_chance) || !second_chance.is_finite() {
            return Err(SamplingError::InvalidConfig(format!(
                "second_chance must lie in [0, 1], got {second_chance}"
            )));
        }
        if max_replications == 0 {
            return Err(SamplingError::InvalidConfig(
                "max_replications must be at least 1".into(),
            ));
        }
        Ok(SamplerConfig { beta, alpha, second_chance, max_replications })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn second_chance(&self) -> f64 {
        self.second_chance
    }

    pub fn max_replications(&self) -> u32 {
        self.max_replications
    }
}

/// Selection probability for a relative density: `exp(−beta · rho)`.
pub fn probability_from_density(rho: f64, beta: f64) -> f64 {
    (-beta * rho).exp()
}

/// Selection probability of `y` given the current histogram. Out-of-range
/// values use the nearest end bin's density.
pub fn sampling_probability(
    hist: &PidHistogram,
    y: f64,
    beta: f64,
) -> Result<f64, SamplingError> {
    let j = hist.clamped_bin_index(y)?;
    let rho = hist.relative_density(j)?;
    Ok(probability_from_density(rho, beta))
}

/// Undersampling rule: keep the instance when the uniform draw `r` does not
/// exceed `p`.
pub fn histus_decide(p: f64, r: f64) -> bool {
    r <= p
}

/// Oversampling rule: number of extra trainings beyond the unconditional
/// one — how many times `p`, divided by `alpha` after each step, stays at or
/// above the single uniform draw `r`. Capped at `max_replications`.
///
/// `r` must come from the open interval (0, 1): the loop would not
/// terminate for `r = 0`.
pub fn histos_replications(
    p: f64,
    alpha: f64,
    r: f64,
    max_replications: u32,
) -> Result<u32, SamplingError> {
    // Negated so that a NaN draw is rejected alongside zero and negatives.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(r > 0.0) {
        return Err(SamplingError::ZeroDraw);
    }
    let mut k = 0u32;
    let mut prob = p;
    while prob >= r && k < max_replications {
        k += 1;
        prob /= alpha;
    }
    Ok(k)
}

/// Running target statistics: count, mean, variance, and mean absolute
/// deviation, all updated online in a numerically stable way.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChebyStats {
    count: u64,
    mean: f64,
    m2: f64,
    abs_dev_mean: f64,
}

impl ChebyStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, y: f64) {
        self.count += 1;
        let delta = y - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (y - self.mean);
        if self.count >= 2 {
            let dev = (y - self.mean).abs();
            self.abs_dev_mean += (dev - self.abs_dev_mean) / (self.count - 1) as f64;
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance (denominator count − 1); 0 before two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Running mean absolute deviation from the mean.
    pub fn abs_dev_mean(&self) -> f64 {
        self.abs_dev_mean
    }
}

/// Chebyshev undersampling: an instance within `t` standard deviations of
/// the running mean is frequent with probability at least `1 − 1/t²`, so it
/// is kept when `r1 ≤ 1 − min(1, 1/t²)`, or — failing that — when the second
/// uniform draw grants the second chance.
pub fn chebyus_decide(
    stats: &ChebyStats,
    y: f64,
    second_chance: f64,
    r1: f64,
    r2: f64,
) -> Result<bool, SamplingError> {
    if stats.count() < 2 {
        return Err(SamplingError::InsufficientStats(stats.count()));
    }
    let s = stats.std_dev();
    let t = if s > 0.0 { (y - stats.mean()).abs() / s } else { 0.0 };
    let p_cheby = (1.0 / (t * t)).min(1.0);
    Ok(r1 <= 1.0 - p_cheby || r2 <= second_chance)
}

/// Chebyshev oversampling: total number of trainings, growing with the
/// distance from the running mean in units of the mean absolute deviation.
/// Always at least 1; capped at `max_replications`.
pub fn chebyos_replications(
    stats: &ChebyStats,
    y: f64,
    max_replications: u32,
) -> Result<u32, SamplingError> {
    if stats.count() < 2 {
        return Err(SamplingError::InsufficientStats(stats.count()));
    }
    let tbar = stats.abs_dev_mean();
    if tbar <= 0.0 {
        return Ok(1);
    }
    let k = ((y - stats.mean()).abs() / tbar).ceil();
    // f64 → u32 casts saturate, so absurd ratios land on the cap.
    Ok((k as u32).clamp(1, max_replications))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::PidHistogram;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn primed_two_spike_hist() -> PidHistogram {
        // Priming with 0 and 1 yields ten bins with counts 1 at both ends.
        let mut hist = PidHistogram::with_defaults();
        hist.update(0.0).unwrap();
        hist.update(1.0).unwrap();
        hist
    }

    #[test]
    fn default_config_matches_documented_values() {
        let config = SamplerConfig::default();
        assert_eq!(config.beta(), 4.0);
        assert_eq!(config.alpha(), 1.02);
        assert_eq!(config.second_chance(), 0.15);
        assert_eq!(config.max_replications(), 1000);
    }

    #[test]
    fn config_validation_rejects_bad_values() {
        assert!(SamplerConfig::new(-1.0, 1.02, 0.15, 1000).is_err());
        assert!(SamplerConfig::new(4.0, 1.0, 0.15, 1000).is_err());
        assert!(SamplerConfig::new(4.0, 0.99, 0.15, 1000).is_err());
        assert!(SamplerConfig::new(4.0, 1.02, 1.5, 1000).is_err());
        assert!(SamplerConfig::new(4.0, 1.02, 0.15, 0).is_err());
        assert!(SamplerConfig::new(0.0, 1.02, 0.0, 1).is_ok());
    }

    #[test]
    fn strategy_names_round_trip() {
        for strategy in Strategy::ALL {
            let parsed: Strategy = strategy.name().parse().unwrap();
            assert_eq!(parsed, strategy);
        }
        assert!("nope".parse::<Strategy>().is_err());
    }

    #[test]
    fn max_density_at_beta_four_gives_e_to_minus_four() {
        let p = probability_from_density(1.0, 4.0);
        assert!((p - 0.018316).abs() < 1e-6, "got {p}");
    }

    #[test]
    fn zero_beta_always_selects() {
        for rho in [0.0, 0.3, 0.7, 1.0] {
            assert_eq!(probability_from_density(rho, 0.0), 1.0);
        }
    }

    #[test]
    fn empty_bin_has_probability_one() {
        let hist = primed_two_spike_hist();
        // The middle of the range is an empty bin: rho = 0, p = 1.
        assert_eq!(sampling_probability(&hist, 0.55, 4.0).unwrap(), 1.0);
        // The end bins hold the maximum count: rho = 1.
        let p = sampling_probability(&hist, 0.01, 4.0).unwrap();
        assert!((p - (-4.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_values_use_the_nearest_end_bin() {
        let hist = primed_two_spike_hist();
        let inside = sampling_probability(&hist, 0.99, 4.0).unwrap();
        let outside = sampling_probability(&hist, 42.0, 4.0).unwrap();
        assert_eq!(inside, outside);
    }

    #[test]
    fn unprimed_histogram_is_a_state_error() {
        let hist = PidHistogram::with_defaults();
        assert!(matches!(
            sampling_probability(&hist, 0.5, 4.0),
            Err(SamplingError::Density(DensityError::NotPrimed))
        ));
    }

    #[test]
    fn probability_is_monotone_in_density_and_beta() {
        let rhos = [0.0, 0.1, 0.25, 0.5, 0.75, 1.0];
        for pair in rhos.windows(2) {
            assert!(
                probability_from_density(pair[1], 2.0) < probability_from_density(pair[0], 2.0)
            );
        }
        for rho in [0.1, 0.5, 1.0] {
            assert!(probability_from_density(rho, 6.0) < probability_from_density(rho, 2.0));
        }
        assert_eq!(
            probability_from_density(0.0, 6.0),
            probability_from_density(0.0, 2.0)
        );
    }

    #[test]
    fn undersampling_edge_probabilities() {
        assert!(histus_decide(1.0, 0.999999));
        assert!(!histus_decide(0.0, 0.5));
        assert!(histus_decide(0.0, 0.0));
    }

    #[test]
    fn undersampling_keep_rate_matches_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let p = 0.5;
        let kept = (0..10_000)
            .filter(|_| histus_decide(p, rng.gen::<f64>()))
            .count();
        let rate = kept as f64 / 10_000.0;
        assert!((rate - 0.5).abs() < 0.02, "keep rate {rate}");
    }

    #[test]
    fn replication_count_follows_the_decay_loop() {
        assert_eq!(histos_replications(0.9, 1.02, 0.5, 1000).unwrap(), 30);
        assert_eq!(histos_replications(1.0, 1.02, 0.999, 1000).unwrap(), 1);
        assert_eq!(histos_replications(0.3, 1.02, 0.5, 1000).unwrap(), 0);
    }

    #[test]
    fn replication_rejects_a_zero_draw() {
        assert!(matches!(
            histos_replications(0.9, 1.02, 0.0, 1000),
            Err(SamplingError::ZeroDraw)
        ));
    }

    #[test]
    fn replication_respects_the_cap() {
        let k = histos_replications(1.0, 1.0 + 1e-9, 1e-300, 1000).unwrap();
        assert_eq!(k, 1000);
        let k = histos_replications(1.0, 1.02, 0.5, 7).unwrap();
        assert_eq!(k, 7);
    }

    #[test]
    fn huge_alpha_bounds_replications_by_one() {
        let k = histos_replications(1.0, 1e12, 0.999, 1000).unwrap();
        assert_eq!(k, 1);
    }

    #[test]
    fn replication_loop_matches_the_counting_form() {
        // Independent arithmetic: count k with p ≥ r·alpha^k, accumulating
        // alpha^k by multiplication instead of dividing p.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p: f64 = rng.gen();
            let alpha: f64 = 1.0 + rng.gen::<f64>();
            let r: f64 = rng.gen_range(1e-6..1.0);
            let mut expected = 0u32;
            let mut threshold = r;
            while p >= threshold && expected < 10_000 {
                expected += 1;
                threshold *= alpha;
            }
            let got = histos_replications(p, alpha, r, 10_000).unwrap();
            assert_eq!(got, expected, "p={p}, alpha={alpha}, r={r}");
        }
    }

    #[test]
    fn mean_replications_shrink_as_alpha_grows() {
        let mut means = Vec::new();
        for alpha in [1.01, 1.02, 1.05, 1.1] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let total: u64 = (0..5_000)
                .map(|_| {
                    let r = rng.gen_range(f64::MIN_POSITIVE..1.0);
                    histos_replications(0.9, alpha, r, 100_000).unwrap() as u64
                })
                .sum();
            means.push(total as f64 / 5_000.0);
        }
        for pair in means.windows(2) {
            assert!(pair[1] <= pair[0], "means not monotone: {means:?}");
        }
    }

    #[test]
    fn running_stats_match_hand_arithmetic() {
        let mut stats = ChebyStats::new();
        stats.update(1.0);
        assert_eq!(stats.mean(), 1.0);
        assert_eq!(stats.variance(), 0.0);
        assert_eq!(stats.abs_dev_mean(), 0.0);
        stats.update(3.0);
        assert_eq!(stats.mean(), 2.0);
        assert_eq!(stats.variance(), 2.0);
        assert_eq!(stats.abs_dev_mean(), 1.0);
    }

    #[test]
    fn constant_stream_has_zero_spread() {
        let mut stats = ChebyStats::new();
        for _ in 0..3 {
            stats.update(0.0);
        }
        assert_eq!(stats.mean(), 0.0);
        assert_eq!(stats.variance(), 0.0);
        assert_eq!(stats.abs_dev_mean(), 0.0);
    }

    #[test]
    fn chebyshev_undersampling_needs_two_observations() {
        let mut stats = ChebyStats::new();
        stats.update(1.0);
        assert!(matches!(
            chebyus_decide(&stats, 1.0, 0.15, 0.5, 0.5),
            Err(SamplingError::InsufficientStats(1))
        ));
    }

    #[test]
    fn mean_values_survive_only_through_the_second_chance() {
        let mut stats = ChebyStats::new();
        stats.update(1.0);
        stats.update(3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let kept = (0..10_000)
            .filter(|_| {
                chebyus_decide(&stats, 2.0, 0.15, rng.gen(), rng.gen()).unwrap()
            })
            .count();
        let rate = kept as f64 / 10_000.0;
        assert!((rate - 0.15).abs() < 0.02, "keep rate {rate}");
    }

    #[test]
    fn far_outliers_are_almost_always_kept() {
        let mut stats = ChebyStats::new();
        stats.update(1.0);
        stats.update(3.0);
        // t = 10 → keep chance 0.99 plus 0.15 of the remaining 1%.
        let y = stats.mean() + 10.0 * stats.std_dev();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let kept = (0..20_000)
            .filter(|_| {
                chebyus_decide(&stats, y, 0.15, rng.gen(), rng.gen()).unwrap()
            })
            .count();
        let rate = kept as f64 / 20_000.0;
        let expected = 0.99 + 0.01 * 0.15;
        assert!((rate - expected).abs() < 0.01, "keep rate {rate}");
    }

    #[test]
    fn full_second_chance_always_keeps() {
        let mut stats = ChebyStats::new();
        stats.update(1.0);
        stats.update(3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert!(chebyus_decide(&stats, 2.0, 1.0, rng.gen(), rng.gen()).unwrap());
        }
    }

    #[test]
    fn chebyshev_replications_grow_with_deviation() {
        let mut stats = ChebyStats::new();
        stats.update(1.0);
        stats.update(3.0);
        // mean 2, mean absolute deviation 1.
        assert_eq!(chebyos_replications(&stats, 2.0, 1000).unwrap(), 1);
        assert_eq!(chebyos_replications(&stats, 5.0, 1000).unwrap(), 3);
        assert_eq!(chebyos_replications(&stats, 5.0, 2).unwrap(), 2);
    }

    #[test]
    fn constant_history_replicates_once() {
        let mut stats = ChebyStats::new();
        stats.update(4.0);
        stats.update(4.0);
        assert_eq!(chebyos_replications(&stats, 100.0, 1000).unwrap(), 1);
    }
}
