//! Prequential experiment harness, error metrics, and cross-run
//! aggregation.
//!
//! A run streams a dataset through three contiguous phases. The warm phase
//! only feeds the density estimate (and, for the Chebyshev strategies, the
//! running target statistics). The training phase additionally lets the
//! strategy decide how many times to train the learner on each instance.
//! The test phase is test-then-train: the prediction for each instance is
//! recorded *before* the instance updates anything, and metrics are
//! computed from that log alone.
//!
//! Every random decision draws from one seeded generator, with a fixed
//! number of draws per instance per strategy, so a run is a pure function
//! of (dataset, configuration, seed).

mod aggregate;
mod metrics;

pub use aggregate::{
    aggregate, AggregateSummary, CellSummary, Metric, MetricSummary, RankEntry,
};
pub use metrics::{rmse, rmse_phi, ser, sera, LogEntry, MetricConfig};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::data::{split_phases, DataError, Dataset, Instance, PhaseSplit};
use crate::density::{
    build_relevance, DensityError, PidConfig, PidHistogram, DEFAULT_RELEVANCE_BINS,
};
use crate::learners::{Learner, LearnerError, LearnerKind, LearnerSpec};
use crate::sampling::{
    chebyos_replications, chebyus_decide, histos_replications, histus_decide,
    sampling_probability, ChebyStats, SamplerConfig, SamplingError, Strategy,
};

/// Errors from metric computation, aggregation, and experiment runs.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("prediction log is empty")]
    EmptyLog,
    #[error("no instances with relevance at or above {threshold}")]
    NoRelevantInstances { threshold: f64 },
    #[error("no run results to aggregate")]
    NoResults,
    #[error("inconsistent result grouping: {0}")]
    InconsistentGrouping(String),
    #[error("test phase is empty")]
    EmptyTestPhase,
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("instance {index}: {source}")]
    Learner {
        index: usize,
        #[source]
        source: LearnerError,
    },
    #[error("instance {index}: prediction {value} is not finite")]
    NonFinitePrediction { index: usize, value: f64 },
}

/// Everything one experiment run needs besides the dataset and the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub strategy: Strategy,
    pub learner: LearnerSpec,
    pub split: PhaseSplit,
    pub sampler: SamplerConfig,
    pub metrics: MetricConfig,
    pub pid: PidConfig,
    /// Bin count of the relevance model built from the full target column.
    pub relevance_bins: usize,
    /// Number of repeated runs (seeded individually).
    pub runs: u32,
    pub base_seed: u64,
}

impl ExperimentConfig {
    /// All parameters at their defaults; 10 runs from base seed 1.
    pub fn new(strategy: Strategy, learner: LearnerSpec) -> Self {
        ExperimentConfig {
            strategy,
            learner,
            split: PhaseSplit::default(),
            sampler: SamplerConfig::default(),
            metrics: MetricConfig::default(),
            pid: PidConfig::default(),
            relevance_bins: DEFAULT_RELEVANCE_BINS,
            runs: 10,
            base_seed: 1,
        }
    }

    /// Seed of the `run_idx`-th repetition: base seed plus run index.
    pub fn seed_for_run(&self, run_idx: u32) -> u64 {
        self.base_seed.wrapping_add(run_idx as u64)
    }
}

/// Outcome of a single seeded run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub dataset: String,
    pub strategy: Strategy,
    pub learner: LearnerKind,
    pub seed: u64,
    pub rmse: f64,
    pub rmse_phi: f64,
    pub sera: f64,
    /// Instances trained on at least once (training and test phases).
    pub trained_instances: u64,
    /// Training calls beyond the first per trained instance.
    pub total_replications: u64,
}

/// Stream state shared by the selection rules during a run.
struct StreamState {
    hist: PidHistogram,
    cheby: ChebyStats,
    rng: ChaCha8Rng,
}

/// Uniform draw from the open interval (0, 1): a literal 0 is redrawn so
/// the replication loop always terminates.
fn draw_open(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let r: f64 = rng.gen();
        if r > 0.0 {
            return r;
        }
    }
}

/// Feed one observed target into the density estimate and, when the
/// strategy needs them, the running statistics.
fn observe(state: &mut StreamState, strategy: Strategy, y: f64) -> Result<(), EvalError> {
    state.hist.update(y)?;
    if strategy.uses_cheby_stats() {
        state.cheby.update(y);
    }
    Ok(())
}

/// How many times the strategy trains on this instance. The histogram and
/// running statistics have already seen `y`. Each strategy consumes a fixed
/// number of uniform draws per instance regardless of the outcome, so the
/// generator stays aligned across decisions.
fn trainings_for(
    strategy: Strategy,
    sampler: &SamplerConfig,
    state: &mut StreamState,
    y: f64,
) -> Result<u64, EvalError> {
    Ok(match strategy {
        Strategy::Baseline => 1,
        Strategy::HistUs => {
            let r: f64 = state.rng.gen();
            if state.hist.is_primed() {
                let p = sampling_probability(&state.hist, y, sampler.beta())?;
                u64::from(histus_decide(p, r))
            } else {
                1
            }
        }
        Strategy::HistOs => {
            let r = draw_open(&mut state.rng);
            if state.hist.is_primed() {
                let p = sampling_probability(&state.hist, y, sampler.beta())?;
                let extra =
                    histos_replications(p, sampler.alpha(), r, sampler.max_replications())?;
                1 + extra as u64
            } else {
                1
            }
        }
        Strategy::ChebyUs => {
            let r1: f64 = state.rng.gen();
            let r2: f64 = state.rng.gen();
            match chebyus_decide(&state.cheby, y, sampler.second_chance(), r1, r2) {
                Ok(keep) => u64::from(keep),
                // Too little history to judge rarity: keep the instance.
                Err(SamplingError::InsufficientStats(_)) => 1,
                Err(err) => return Err(err.into()),
            }
        }
        Strategy::ChebyOs => {
            match chebyos_replications(&state.cheby, y, sampler.max_replications()) {
                Ok(k) => k as u64,
                Err(SamplingError::InsufficientStats(_)) => 1,
                Err(err) => return Err(err.into()),
            }
        }
    })
}

/// Observe an instance, let the strategy pick a training count, and apply
/// that many training calls.
#[allow(clippy::too_many_arguments)]
fn select_and_train(
    instance: &Instance,
    index: usize,
    config: &ExperimentConfig,
    state: &mut StreamState,
    learner: &mut dyn Learner,
    trained_instances: &mut u64,
    total_replications: &mut u64,
) -> Result<(), EvalError> {
    observe(state, config.strategy, instance.target)?;
    let trains = trainings_for(config.strategy, &config.sampler, state, instance.target)?;
    for _ in 0..trains {
        learner
            .train(&instance.features, instance.target)
            .map_err(|source| EvalError::Learner { index, source })?;
    }
    if trains > 0 {
        *trained_instances += 1;
        *total_replications += trains - 1;
    }
    Ok(())
}

/// Run one seeded prequential experiment and keep the test-phase log.
pub fn run_prequential_detailed(
    dataset: &Dataset,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<(RunResult, Vec<LogEntry>), EvalError> {
    let (warm, train, test) = split_phases(dataset, &config.split)?;
    if test.is_empty() {
        return Err(EvalError::EmptyTestPhase);
    }
    let relevance = build_relevance(&dataset.targets(), config.relevance_bins)?;
    let mut learner = config.learner.build();
    let mut state = StreamState {
        hist: PidHistogram::new(config.pid),
        cheby: ChebyStats::new(),
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut trained_instances = 0u64;
    let mut total_replications = 0u64;

    for instance in warm {
        observe(&mut state, config.strategy, instance.target)?;
    }

    let mut index = warm.len();
    for instance in train {
        select_and_train(
            instance,
            index,
            config,
            &mut state,
            learner.as_mut(),
            &mut trained_instances,
            &mut total_replications,
        )?;
        index += 1;
    }

    let mut log = Vec::with_capacity(test.len());
    for instance in test {
        let prediction = learner
            .predict(&instance.features)
            .map_err(|source| EvalError::Learner { index, source })?;
        if !prediction.is_finite() {
            return Err(EvalError::NonFinitePrediction { index, value: prediction });
        }
        log.push(LogEntry {
            y_true: instance.target,
            y_pred: prediction,
            phi: relevance.phi(instance.target),
        });
        select_and_train(
            instance,
            index,
            config,
            &mut state,
            learner.as_mut(),
            &mut trained_instances,
            &mut total_replications,
        )?;
        index += 1;
    }

    let result = RunResult {
        dataset: dataset.name.clone(),
        strategy: config.strategy,
        learner: config.learner.kind(),
        seed,
        rmse: rmse(&log)?,
        rmse_phi: rmse_phi(&log, config.metrics.thr_phi())?,
        sera: sera(&log, config.metrics.sera_step())?,
        trained_instances,
        total_replications,
    };
    Ok((result, log))
}

/// Run one seeded prequential experiment.
pub fn run_prequential(
    dataset: &Dataset,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<RunResult, EvalError> {
    run_prequential_detailed(dataset, config, seed).map(|(result, _)| result)
}
