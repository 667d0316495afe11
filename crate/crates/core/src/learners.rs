//! Incremental regressors behind one predict/train interface.
//!
//! Sampling strategies only decide *how often* to call `train`, so any
//! learner implementing [`Learner`] plugs into the harness. Three are
//! provided: a running-mean predictor (features ignored), an online linear
//! model trained by stochastic gradient descent on squared error, and a
//! sliding-window k-nearest-neighbors regressor. Training twice with the
//! same instance applies the update twice — replication-based strategies
//! rely on exactly that.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from learner construction and use.
#[derive(Debug, Error)]
pub enum LearnerError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("value {0} is not finite")]
    NonFinite(f64),
    #[error("model diverged: {0}")]
    Diverged(String),
}

/// An incremental regressor: predict from features, then (maybe) train on
/// the revealed target.
pub trait Learner {
    fn predict(&self, features: &[f64]) -> Result<f64, LearnerError>;
    fn train(&mut self, features: &[f64], y: f64) -> Result<(), LearnerError>;
}

/// Which learner to instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    TargetMean,
    OnlineLinear,
    WindowKnn,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 3] =
        [LearnerKind::TargetMean, LearnerKind::OnlineLinear, LearnerKind::WindowKnn];

    pub fn name(&self) -> &'static str {
        match self {
            LearnerKind::TargetMean => "target-mean",
            LearnerKind::OnlineLinear => "online-linear",
            LearnerKind::WindowKnn => "window-knn",
        }
    }
}

impl std::fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for LearnerKind {
    type Err = LearnerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LearnerKind::ALL
            .iter()
            .find(|v| v.name() == s)
            .copied()
            .ok_or_else(|| {
                LearnerError::InvalidConfig(format!(
                    "unknown learner {s:?} (expected target-mean, online-linear, or window-knn)"
                ))
            })
    }
}

/// Learner kind plus hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnerSpec {
    kind: LearnerKind,
    learning_rate: f64,
    window: usize,
    neighbors: usize,
}

impl LearnerSpec {
    /// Defaults: learning rate 0.01, window 1000, 5 neighbors.
    pub fn new(kind: LearnerKind) -> Self {
        LearnerSpec { kind, learning_rate: 0.01, window: 1000, neighbors: 5 }
    }

    pub fn with_params(
        kind: LearnerKind,
        learning_rate: f64,
        window: usize,
        neighbors: usize,
    ) -> Result<Self, LearnerError> {
        if !(learning_rate.is_finite() && learning_rate > 0.0) {
            return Err(LearnerError::InvalidConfig(format!(
                "learning rate must be finite and positive, got {learning_rate}"
            )));
        }
        if neighbors == 0 || window < neighbors {
            return Err(LearnerError::InvalidConfig(format!(
                "need window ≥ neighbors ≥ 1, got window={window}, neighbors={neighbors}"
            )));
        }
        Ok(LearnerSpec { kind, learning_rate, window, neighbors })
    }

    pub fn kind(&self) -> LearnerKind {
        self.kind
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn neighbors(&self) -> usize {
        self.neighbors
    }

    /// Instantiate a fresh learner in its untrained state.
    pub fn build(&self) -> Box<dyn Learner> {
        match self.kind {
            LearnerKind::TargetMean => Box::new(TargetMean::new()),
            LearnerKind::OnlineLinear => Box::new(OnlineLinear::new(self.learning_rate)),
            LearnerKind::WindowKnn => Box::new(WindowKnn::new(self.window, self.neighbors)),
        }
    }
}

/// Predicts the running mean of all trained targets; features are ignored.
#[derive(Debug, Clone, Default)]
pub struct TargetMean {
    count: u64,
    mean: f64,
}

impl TargetMean {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Learner for TargetMean {
    fn predict(&self, _features: &[f64]) -> Result<f64, LearnerError> {
        Ok(self.mean)
    }

    fn train(&mut self, _features: &[f64], y: f64) -> Result<(), LearnerError> {
        if !y.is_finite() {
            return Err(LearnerError::NonFinite(y));
        }
        self.count += 1;
        self.mean += (y - self.mean) / self.count as f64;
        Ok(())
    }
}

/// Linear model `w·x + b` trained by one stochastic gradient step on the
/// squared error per `train` call. The feature dimensionality is fixed by
/// the first training instance.
#[derive(Debug, Clone)]
pub struct OnlineLinear {
    weights: Vec<f64>,
    bias: f64,
    learning_rate: f64,
    trained: bool,
}

impl OnlineLinear {
    pub fn new(learning_rate: f64) -> Self {
        OnlineLinear { weights: Vec::new(), bias: 0.0, learning_rate, trained: false }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    fn check_dim(&self, features: &[f64]) -> Result<(), LearnerError> {
        if self.trained && features.len() != self.weights.len() {
            return Err(LearnerError::DimensionMismatch {
                expected: self.weights.len(),
                got: features.len(),
            });
        }
        Ok(())
    }
}

impl Learner for OnlineLinear {
    fn predict(&self, features: &[f64]) -> Result<f64, LearnerError> {
        self.check_dim(features)?;
        let dot: f64 = self.weights.iter().zip(features).map(|(w, x)| w * x).sum();
        Ok(dot + self.bias)
    }

    fn train(&mut self, features: &[f64], y: f64) -> Result<(), LearnerError> {
        if !y.is_finite() {
            return Err(LearnerError::NonFinite(y));
        }
        self.check_dim(features)?;
        if !self.trained {
            self.weights = vec![0.0; features.len()];
            self.trained = true;
        }
        let prediction = self.predict(features)?;
        let error = y - prediction;
        for (w, x) in self.weights.iter_mut().zip(features) {
            *w += self.learning_rate * error * x;
        }
        self.bias += self.learning_rate * error;
        if !self.bias.is_finite() || self.weights.iter().any(|w| !w.is_finite()) {
            return Err(LearnerError::Diverged(
                "weights left the finite range; lower the learning rate".into(),
            ));
        }
        Ok(())
    }
}

/// Mean target of the κ nearest instances (Euclidean feature distance)
/// among the last W trained instances. Distance ties are broken in favor
/// of the earlier-trained instance.
#[derive(Debug, Clone)]
pub struct WindowKnn {
    window: usize,
    neighbors: usize,
    /// (features, target, insertion sequence number)
    buffer: VecDeque<(Vec<f64>, f64, u64)>,
    next_seq: u64,
    expected_dim: Option<usize>,
}

impl WindowKnn {
    pub fn new(window: usize, neighbors: usize) -> Self {
        WindowKnn {
            window,
            neighbors,
            buffer: VecDeque::new(),
            next_seq: 0,
            expected_dim: None,
        }
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    fn check(&self, features: &[f64]) -> Result<(), LearnerError> {
        if let Some(expected) = self.expected_dim {
            if features.len() != expected {
                return Err(LearnerError::DimensionMismatch {
                    expected,
                    got: features.len(),
                });
            }
        }
        if let Some(bad) = features.iter().find(|x| !x.is_finite()) {
            return Err(LearnerError::NonFinite(*bad));
        }
        Ok(())
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl Learner for WindowKnn {
    fn predict(&self, features: &[f64]) -> Result<f64, LearnerError> {
        self.check(features)?;
        if self.buffer.is_empty() {
            return Ok(0.0);
        }
        // Ordering by squared distance equals ordering by distance.
        let mut ranked: Vec<(f64, u64, f64)> = self
            .buffer
            .iter()
            .map(|(x, y, seq)| (squared_distance(features, x), *seq, *y))
            .collect();
        let k = self.neighbors.min(ranked.len());
        ranked.select_nth_unstable_by(k - 1, |a, b| {
            a.0.partial_cmp(&b.0)
                .expect("finite distances")
                .then(a.1.cmp(&b.1))
        });
        let mean = ranked[..k].iter().map(|(_, _, y)| y).sum::<f64>() / k as f64;
        Ok(mean)
    }

    fn train(&mut self, features: &[f64], y: f64) -> Result<(), LearnerError> {
        if !y.is_finite() {
            return Err(LearnerError::NonFinite(y));
        }
        self.check(features)?;
        self.expected_dim.get_or_insert(features.len());
        self.buffer.push_back((features.to_vec(), y, self.next_seq));
        self.next_seq += 1;
        if self.buffer.len() > self.window {
            self.buffer.pop_front();
        }
        Ok(())
    }
}
