//! The CSV row format shared by the run and report commands: one row per
//! seeded run, carrying the full configuration echo next to the results
//! so a report can reproduce any run from its row alone.

use serde::{Deserialize, Serialize};

use histream::density::{PidConfig, DEFAULT_RELEVANCE_BINS};
use histream::{
    ExperimentConfig, LearnerKind, LearnerSpec, MetricConfig, PhaseSplit, RunResult,
    SamplerConfig, Strategy,
};

use crate::config::RunSettings;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    // Identity of the run.
    pub dataset: String,
    pub strategy: Strategy,
    pub learner: LearnerKind,
    pub run_idx: u32,
    pub seed: u64,
    // Configuration echo.
    pub data: String,
    pub target: String,
    pub beta: f64,
    pub alpha: f64,
    pub second_chance: f64,
    pub thr_phi: f64,
    pub sera_step: f64,
    pub warm_frac: f64,
    pub train_frac: f64,
    pub bins: usize,
    pub split_threshold: f64,
    pub max_bins: usize,
    pub window: usize,
    pub knn: usize,
    pub lr: f64,
    // Results.
    pub rmse: f64,
    pub rmse_phi: f64,
    pub sera: f64,
    pub trained_instances: u64,
    pub total_replications: u64,
}

impl RunRow {
    pub fn new(settings: &RunSettings, run_idx: u32, result: &RunResult) -> Self {
        RunRow {
            dataset: result.dataset.clone(),
            strategy: result.strategy,
            learner: result.learner,
            run_idx,
            seed: result.seed,
            data: settings
                .data
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
            target: settings.target.to_string(),
            beta: settings.beta,
            alpha: settings.alpha,
            second_chance: settings.second_chance,
            thr_phi: settings.thr_phi,
            sera_step: settings.sera_step,
            warm_frac: settings.warm_frac,
            train_frac: settings.train_frac,
            bins: settings.bins,
            split_threshold: settings.split_threshold,
            max_bins: settings.max_bins,
            window: settings.window,
            knn: settings.knn,
            lr: settings.lr,
            rmse: result.rmse,
            rmse_phi: result.rmse_phi,
            sera: result.sera,
            trained_instances: result.trained_instances,
            total_replications: result.total_replications,
        }
    }

    /// The run outcome carried by this row.
    pub fn result(&self) -> RunResult {
        RunResult {
            dataset: self.dataset.clone(),
            strategy: self.strategy,
            learner: self.learner,
            seed: self.seed,
            rmse: self.rmse,
            rmse_phi: self.rmse_phi,
            sera: self.sera,
            trained_instances: self.trained_instances,
            total_replications: self.total_replications,
        }
    }

    /// Rebuild the experiment this row came from, so a report can replay
    /// it for plot series.
    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        let learner = LearnerSpec::with_params(self.learner, self.lr, self.window, self.knn)
            .map_err(CliError::usage)?;
        let split =
            PhaseSplit::new(self.warm_frac, self.train_frac).map_err(CliError::usage)?;
        let sampler = SamplerConfig::new(self.beta, self.alpha, self.second_chance, 1000)
            .map_err(CliError::usage)?;
        let metrics =
            MetricConfig::new(self.thr_phi, self.sera_step).map_err(CliError::usage)?;
        let pid = PidConfig::new(self.bins, self.split_threshold, self.max_bins)
            .map_err(CliError::usage)?;
        Ok(ExperimentConfig {
            strategy: self.strategy,
            learner,
            split,
            sampler,
            metrics,
            pid,
            relevance_bins: DEFAULT_RELEVANCE_BINS,
            runs: 1,
            base_seed: self.seed,
        })
    }
}
