//! Synthetic stream generator with controlled rare/frequent target regions.
//!
//! Targets lie in [0, 1000]. A configurable share of instances is "frequent"
//! and drawn from two dense y-intervals; the rest is "rare" and drawn from
//! the three complementary intervals (the lower tail, the middle gap, and
//! the upper tail). Each region generates `y` from a monotone polynomial of
//! a region-local coordinate `x'` drawn uniformly over exactly the interval
//! that maps onto the region's y-interval, so the (x, y) relation is a
//! single-valued continuous curve once regions are laid out side by side on
//! the global x axis.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DataError, Dataset, Instance};

/// Whether a region belongs to the dense or the rare part of the target
/// distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rarity {
    Frequent,
    Rare,
}

/// Monotone generating curve `y = scale·(x − x_shift)^exponent + y_offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    pub scale: f64,
    pub exponent: u32,
    pub x_shift: f64,
    pub y_offset: f64,
}

impl Curve {
    pub fn y_at(&self, x_local: f64) -> f64 {
        self.scale * (x_local - self.x_shift).powi(self.exponent as i32) + self.y_offset
    }

    /// Local x producing the given y (the curve is increasing for x ≥ x_shift).
    fn x_at(&self, y: f64) -> f64 {
        self.x_shift + ((y - self.y_offset) / self.scale).powf(1.0 / self.exponent as f64)
    }
}

/// One generating region: a y-interval plus the curve that fills it.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub label: String,
    pub rarity: Rarity,
    pub y_lo: f64,
    pub y_hi: f64,
    pub curve: Curve,
}

impl Region {
    /// The local-x interval that the curve maps onto `[y_lo, y_hi]`.
    pub fn x_interval(&self) -> (f64, f64) {
        (self.curve.x_at(self.y_lo), self.curve.x_at(self.y_hi))
    }

    fn width(&self) -> f64 {
        let (lo, hi) = self.x_interval();
        hi - lo
    }
}

/// The ordered set of generating regions plus their placement on the global
/// x axis (disjoint intervals, in ascending-y order).
#[derive(Debug, Clone, PartialEq)]
pub struct RegionLayout {
    regions: Vec<Region>,
}

impl Default for RegionLayout {
    fn default() -> Self {
        RegionLayout::standard()
    }
}

impl RegionLayout {
    /// Two dense quadratic segments over [150, 350] and [650, 850], cubic
    /// tails over [0, 150] and [850, 1000], and a cubic bridge over
    /// [350, 650]; continuous at every boundary.
    pub fn standard() -> Self {
        let region = |label: &str, rarity, y_lo, y_hi, curve| Region {
            label: label.to_string(),
            rarity,
            y_lo,
            y_hi,
            curve,
        };
        RegionLayout {
            regions: vec![
                region(
                    "rare-low",
                    Rarity::Rare,
                    0.0,
                    150.0,
                    Curve { scale: 1e-4, exponent: 3, x_shift: 0.0, y_offset: 0.0 },
                ),
                region(
                    "frequent-1",
                    Rarity::Frequent,
                    150.0,
                    350.0,
                    Curve { scale: 1e-3, exponent: 2, x_shift: 0.0, y_offset: 150.0 },
                ),
                region(
                    "rare-mid",
                    Rarity::Rare,
                    350.0,
                    650.0,
                    Curve { scale: 1e-5, exponent: 3, x_shift: 350.0, y_offset: 350.0 },
                ),
                region(
                    "frequent-2",
                    Rarity::Frequent,
                    650.0,
                    850.0,
                    Curve { scale: 1e-3, exponent: 2, x_shift: 0.0, y_offset: 650.0 },
                ),
                region(
                    "rare-high",
                    Rarity::Rare,
                    850.0,
                    1000.0,
                    Curve { scale: 1e-4, exponent: 3, x_shift: 0.0, y_offset: 850.0 },
                ),
            ],
        }
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Global x offset of each region (cumulative widths; regions are laid
    /// out contiguously in declaration order).
    pub fn offsets(&self) -> Vec<f64> {
        let mut offsets = Vec::with_capacity(self.regions.len());
        let mut acc = 0.0;
        for r in &self.regions {
            offsets.push(acc);
            acc += r.width();
        }
        offsets
    }

    fn validate(&self) -> Result<(), DataError> {
        if self.regions.is_empty() {
            return Err(DataError::InvalidConfig("region layout has no regions".into()));
        }
        for r in &self.regions {
            let numbers =
                [r.y_lo, r.y_hi, r.curve.scale, r.curve.x_shift, r.curve.y_offset];
            if numbers.iter().any(|v| !v.is_finite()) {
                return Err(DataError::InvalidConfig(format!(
                    "region {:?}: all curve and interval parameters must be finite",
                    r.label
                )));
            }
            if r.curve.scale <= 0.0 || r.curve.exponent == 0 {
                return Err(DataError::InvalidConfig(format!(
                    "region {:?}: curve must have positive scale and exponent",
                    r.label
                )));
            }
            if r.y_lo >= r.y_hi || r.y_lo < r.curve.y_offset {
                return Err(DataError::InvalidConfig(format!(
                    "region {:?}: y-interval [{}, {}] is not increasing from the curve offset {}",
                    r.label, r.y_lo, r.y_hi, r.curve.y_offset
                )));
            }
        }
        Ok(())
    }

    /// Locate the region containing a global x and return `(region index,
    /// region-local x')`. `None` when x lies outside every region.
    pub fn recover(&self, x_global: f64) -> Option<(usize, f64)> {
        let offsets = self.offsets();
        for (i, r) in self.regions.iter().enumerate() {
            let (lo, _) = r.x_interval();
            let start = offsets[i];
            let end = start + r.width();
            if x_global >= start && x_global <= end {
                return Some((i, x_global - start + lo));
            }
        }
        None
    }

    /// Per-region instance counts for a set of instances generated from this
    /// layout (by global-x membership).
    pub fn tally(&self, instances: &[Instance]) -> Vec<usize> {
        let mut counts = vec![0usize; self.regions.len()];
        for inst in instances {
            if let Some((i, _)) = self.recover(inst.features[0]) {
                counts[i] += 1;
            }
        }
        counts
    }
}

/// Parameters of the synthetic generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub n: usize,
    pub rare_fraction: f64,
    pub seed: u64,
    pub layout: RegionLayout,
}

impl SyntheticConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        SyntheticConfig { n, rare_fraction: 0.05, seed, layout: RegionLayout::standard() }
    }
}

/// Evenly split `total` across `k` slots, earlier slots taking the remainder.
fn even_split(total: usize, k: usize) -> Vec<usize> {
    let base = total / k;
    let rem = total % k;
    (0..k).map(|i| base + usize::from(i < rem)).collect()
}

/// Generate a shuffled synthetic stream. Deterministic for a given config:
/// the same seed yields a byte-identical dataset.
pub fn generate_synthetic(config: &SyntheticConfig) -> Result<Dataset, DataError> {
    if config.n == 0 {
        return Err(DataError::EmptyDataset);
    }
    if !(config.rare_fraction > 0.0 && config.rare_fraction < 1.0) {
        return Err(DataError::InvalidConfig(format!(
            "rare_fraction must lie in (0, 1), got {}",
            config.rare_fraction
        )));
    }
    config.layout.validate()?;

    let regions = config.layout.regions();
    let frequent: Vec<usize> = (0..regions.len())
        .filter(|&i| regions[i].rarity == Rarity::Frequent)
        .collect();
    let rare: Vec<usize> = (0..regions.len())
        .filter(|&i| regions[i].rarity == Rarity::Rare)
        .collect();
    if frequent.is_empty() || rare.is_empty() {
        return Err(DataError::InvalidConfig(
            "region layout needs at least one frequent and one rare region".into(),
        ));
    }

    let n_frequent = (config.n as f64 * (1.0 - config.rare_fraction)).round() as usize;
    let n_rare = config.n - n_frequent;
    let mut counts = vec![0usize; regions.len()];
    for (slot, &idx) in even_split(n_frequent, frequent.len()).iter().zip(&frequent) {
        counts[idx] = *slot;
    }
    for (slot, &idx) in even_split(n_rare, rare.len()).iter().zip(&rare) {
        counts[idx] = *slot;
    }

    let offsets = config.layout.offsets();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut instances = Vec::with_capacity(config.n);
    for (i, region) in regions.iter().enumerate() {
        let (lo, hi) = region.x_interval();
        for _ in 0..counts[i] {
            let x_local = rng.gen_range(lo..hi);
            let y = region.curve.y_at(x_local);
            instances.push(Instance { features: vec![offsets[i] + (x_local - lo)], target: y });
        }
    }
    instances.shuffle(&mut rng);
    Ok(Dataset::new("synthetic", instances))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_tail_curve_maps_100_to_100() {
        let layout = RegionLayout::standard();
        let y = layout.regions()[0].curve.y_at(100.0);
        assert!((y - 100.0).abs() < 1e-12, "got {y}");
    }

    #[test]
    fn middle_bridge_starts_at_its_offset() {
        let layout = RegionLayout::standard();
        let y = layout.regions()[2].curve.y_at(350.0);
        assert_eq!(y, 350.0);
    }

    #[test]
    fn first_dense_segment_starts_at_150() {
        let layout = RegionLayout::standard();
        let y = layout.regions()[1].curve.y_at(0.0);
        assert_eq!(y, 150.0);
    }

    #[test]
    fn zero_instances_is_an_error() {
        let cfg = SyntheticConfig::new(0, 1);
        assert!(matches!(generate_synthetic(&cfg), Err(DataError::EmptyDataset)));
    }

    #[test]
    fn bad_rare_fraction_is_rejected() {
        let mut cfg = SyntheticConfig::new(10, 1);
        cfg.rare_fraction = 0.0;
        assert!(generate_synthetic(&cfg).is_err());
        cfg.rare_fraction = 1.0;
        assert!(generate_synthetic(&cfg).is_err());
    }

    #[test]
    fn same_seed_is_byte_identical() {
        let cfg = SyntheticConfig::new(500, 42);
        let a = generate_synthetic(&cfg).unwrap();
        let b = generate_synthetic(&cfg).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.instances.iter().zip(&b.instances) {
            assert_eq!(x.features[0].to_bits(), y.features[0].to_bits());
            assert_eq!(x.target.to_bits(), y.target.to_bits());
        }
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_synthetic(&SyntheticConfig::new(100, 1)).unwrap();
        let b = generate_synthetic(&SyntheticConfig::new(100, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn frequent_count_is_exact_at_100k() {
        let cfg = SyntheticConfig::new(100_000, 7);
        let ds = generate_synthetic(&cfg).unwrap();
        let frequent = ds
            .instances
            .iter()
            .filter(|i| {
                let y = i.target;
                (150.0..=350.0).contains(&y) || (650.0..=850.0).contains(&y)
            })
            .count();
        assert_eq!(frequent, 95_000);
    }

    #[test]
    fn rare_instances_split_evenly_across_three_regions() {
        let cfg = SyntheticConfig::new(100_000, 3);
        let ds = generate_synthetic(&cfg).unwrap();
        let counts = cfg.layout.tally(&ds.instances);
        // 5000 rare over three regions, remainder to earlier regions.
        assert_eq!(counts[0] + counts[2] + counts[4], 5_000);
        assert_eq!(counts[0], 1_667);
        assert_eq!(counts[2], 1_667);
        assert_eq!(counts[4], 1_666);
        assert_eq!(counts[1], 47_500);
        assert_eq!(counts[3], 47_500);
    }

    #[test]
    fn targets_stay_in_range_and_match_region_curves() {
        let cfg = SyntheticConfig::new(20_000, 11);
        let ds = generate_synthetic(&cfg).unwrap();
        for inst in &ds.instances {
            let y = inst.target;
            assert!((0.0..=1000.0).contains(&y), "target {y} out of range");
            let (idx, x_local) = cfg
                .layout
                .recover(inst.features[0])
                .expect("every global x belongs to a region");
            let expected = cfg.layout.regions()[idx].curve.y_at(x_local);
            assert!(
                (expected - y).abs() <= 1e-9,
                "region {idx}: recovered y {expected} differs from stored {y}"
            );
        }
    }

    #[test]
    fn region_intervals_are_contiguous_and_positive() {
        let layout = RegionLayout::standard();
        let offsets = layout.offsets();
        let mut end = 0.0;
        for (i, r) in layout.regions().iter().enumerate() {
            assert!((offsets[i] - end).abs() < 1e-12);
            assert!(r.width() > 0.0);
            end = offsets[i] + r.width();
        }
    }
}
