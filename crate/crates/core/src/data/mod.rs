//! Data model: instances, datasets, and the warm/train/test phase split.

mod loader;
mod synthetic;

pub use loader::{load_csv, load_csv_reader, write_xy_csv, TargetColumn};
pub use synthetic::{generate_synthetic, Curve, Rarity, Region, RegionLayout, SyntheticConfig};

use thiserror::Error;

/// One stream element: a feature vector and a numeric target.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub features: Vec<f64>,
    pub target: f64,
}

/// An ordered collection of instances; order is the stream order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub instances: Vec<Instance>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, instances: Vec<Instance>) -> Self {
        Dataset { name: name.into(), instances }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Target column in stream order.
    pub fn targets(&self) -> Vec<f64> {
        self.instances.iter().map(|i| i.target).collect()
    }
}

/// Errors from data construction, loading, and splitting.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}, column {column}: cannot parse {value:?} as a finite number")]
    Parse { row: usize, column: usize, value: String },
    #[error("row {row}: {message}")]
    Format { row: usize, message: String },
    #[error("target column {0:?} not found")]
    MissingTarget(String),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Fractions of the stream prefix used for warm-up and for the training
/// phase; the remainder is the test phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSplit {
    warm_fraction: f64,
    train_fraction: f64,
}

impl Default for PhaseSplit {
    fn default() -> Self {
        PhaseSplit { warm_fraction: 0.15, train_fraction: 0.20 }
    }
}

impl PhaseSplit {
    /// Both fractions must lie in (0, 1) and sum to less than 1.
    pub fn new(warm_fraction: f64, train_fraction: f64) -> Result<Self, DataError> {
        let ok = |f: f64| f.is_finite() && f > 0.0 && f < 1.0;
        if !ok(warm_fraction) || !ok(train_fraction) {
            return Err(DataError::InvalidConfig(format!(
                "phase fractions must lie in (0, 1), got warm={warm_fraction}, train={train_fraction}"
            )));
        }
        if warm_fraction + train_fraction >= 1.0 {
            return Err(DataError::InvalidConfig(format!(
                "warm ({warm_fraction}) + train ({train_fraction}) fractions must sum below 1"
            )));
        }
        Ok(PhaseSplit { warm_fraction, train_fraction })
    }

    pub fn warm_fraction(&self) -> f64 {
        self.warm_fraction
    }

    pub fn train_fraction(&self) -> f64 {
        self.train_fraction
    }

    /// Phase sizes for a stream of `n` instances: `floor(n·warm)`,
    /// `floor(n·train)`, and the remainder.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let warm = (n as f64 * self.warm_fraction).floor() as usize;
        let train = (n as f64 * self.train_fraction).floor() as usize;
        (warm, train, n - warm - train)
    }
}

/// The three contiguous phases of a stream: warm, train, test.
pub type Phases<'a> = (&'a [Instance], &'a [Instance], &'a [Instance]);

/// Split a dataset into contiguous warm/train/test slices in stream order.
pub fn split_phases<'a>(
    dataset: &'a Dataset,
    split: &PhaseSplit,
) -> Result<Phases<'a>, DataError> {
    if dataset.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    let (w, t, _) = split.sizes(dataset.len());
    let (warm, rest) = dataset.instances.split_at(w);
    let (train, test) = rest.split_at(t);
    Ok((warm, train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(n: usize) -> Dataset {
        let instances = (0..n)
            .map(|i| Instance { features: vec![i as f64], target: i as f64 })
            .collect();
        Dataset::new("toy", instances)
    }

    #[test]
    fn default_split_of_100_is_15_20_65() {
        let split = PhaseSplit::default();
        assert_eq!(split.sizes(100), (15, 20, 65));
    }

    #[test]
    fn single_instance_lands_in_test() {
        let split = PhaseSplit::default();
        assert_eq!(split.sizes(1), (0, 0, 1));
        let ds = dataset(1);
        let (w, t, test) = split_phases(&ds, &split).unwrap();
        assert!(w.is_empty() && t.is_empty());
        assert_eq!(test.len(), 1);
    }

    #[test]
    fn custom_fractions_split_20_into_10_5_5() {
        let split = PhaseSplit::new(0.5, 0.25).unwrap();
        assert_eq!(split.sizes(20), (10, 5, 5));
    }

    #[test]
    fn fractions_summing_to_one_or_more_are_rejected() {
        assert!(PhaseSplit::new(0.5, 0.5).is_err());
        assert!(PhaseSplit::new(0.7, 0.4).is_err());
        assert!(PhaseSplit::new(0.0, 0.2).is_err());
        assert!(PhaseSplit::new(0.2, 1.0).is_err());
    }

    #[test]
    fn empty_dataset_cannot_be_split() {
        let ds = dataset(0);
        assert!(matches!(split_phases(&ds, &PhaseSplit::default()), Err(DataError::EmptyDataset)));
    }

    #[test]
    fn split_is_a_partition_preserving_order() {
        let split = PhaseSplit::default();
        for n in [1usize, 2, 3, 7, 19, 100, 101, 997] {
            let ds = dataset(n);
            let (w, t, s) = split_phases(&ds, &split).unwrap();
            assert_eq!(w.len() + t.len() + s.len(), n);
            let rejoined: Vec<_> = w.iter().chain(t).chain(s).cloned().collect();
            assert_eq!(rejoined, ds.instances);
        }
    }
}
