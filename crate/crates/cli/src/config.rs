//! Resolution of run settings from three layers: built-in defaults,
//! then a flat key=value config file, then command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use histream::data::TargetColumn;
use histream::density::{PidConfig, DEFAULT_RELEVANCE_BINS};
use histream::{
    ExperimentConfig, LearnerKind, LearnerSpec, MetricConfig, PhaseSplit, SamplerConfig,
    Strategy,
};

use crate::args::RunArgs;
use crate::error::CliError;

/// A strategy flag value: one concrete strategy or the whole set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategySelector {
    All,
    One(Strategy),
}

impl StrategySelector {
    pub fn strategies(&self) -> Vec<Strategy> {
        match self {
            StrategySelector::All => Strategy::ALL.to_vec(),
            StrategySelector::One(s) => vec![*s],
        }
    }
}

impl FromStr for StrategySelector {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "all" {
            return Ok(StrategySelector::All);
        }
        s.parse::<Strategy>().map(StrategySelector::One).map_err(CliError::usage)
    }
}

impl fmt::Display for StrategySelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategySelector::All => write!(f, "all"),
            StrategySelector::One(s) => write!(f, "{s}"),
        }
    }
}

/// A learner flag value: one concrete learner or the whole set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerSelector {
    All,
    One(LearnerKind),
}

impl LearnerSelector {
    pub fn learners(&self) -> Vec<LearnerKind> {
        match self {
            LearnerSelector::All => LearnerKind::ALL.to_vec(),
            LearnerSelector::One(k) => vec![*k],
        }
    }
}

impl FromStr for LearnerSelector {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "all" {
            return Ok(LearnerSelector::All);
        }
        s.parse::<LearnerKind>().map(LearnerSelector::One).map_err(CliError::usage)
    }
}

impl fmt::Display for LearnerSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnerSelector::All => write!(f, "all"),
            LearnerSelector::One(k) => write!(f, "{k}"),
        }
    }
}

/// Fully resolved settings for the run command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub data: Option<PathBuf>,
    pub target: TargetColumn,
    pub strategy: StrategySelector,
    pub learner: LearnerSelector,
    pub runs: u32,
    pub seed: u64,
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
    pub jobs: Option<usize>,
    pub out: PathBuf,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            data: None,
            target: TargetColumn::Name("y".into()),
            strategy: StrategySelector::All,
            learner: LearnerSelector::All,
            runs: 10,
            seed: 1,
            beta: 4.0,
            alpha: 1.02,
            second_chance: 0.15,
            thr_phi: 0.9,
            sera_step: 0.001,
            warm_frac: 0.15,
            train_frac: 0.20,
            bins: 10,
            split_threshold: 0.15,
            max_bins: 400,
            window: 1000,
            knn: 5,
            lr: 0.01,
            jobs: None,
            out: PathBuf::from("runs.csv"),
        }
    }
}

fn parse_value<T>(key: &str, value: &str) -> Result<T, CliError>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|err| CliError::Usage(format!("invalid value '{value}' for {key}: {err}")))
}

impl RunSettings {
    /// Apply one key=value setting; keys use the flag spellings.
    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "data" => self.data = Some(PathBuf::from(value)),
            "target" => {
                self.target = value.parse().expect("target parsing is infallible")
            }
            "strategy" => self.strategy = value.parse()?,
            "learner" => self.learner = value.parse()?,
            "runs" => self.runs = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "beta" => self.beta = parse_value(key, value)?,
            "alpha" => self.alpha = parse_value(key, value)?,
            "second-chance" => self.second_chance = parse_value(key, value)?,
            "thr-phi" => self.thr_phi = parse_value(key, value)?,
            "sera-step" => self.sera_step = parse_value(key, value)?,
            "warm-frac" => self.warm_frac = parse_value(key, value)?,
            "train-frac" => self.train_frac = parse_value(key, value)?,
            "bins" => self.bins = parse_value(key, value)?,
            "split-threshold" => self.split_threshold = parse_value(key, value)?,
            "max-bins" => self.max_bins = parse_value(key, value)?,
            "window" => self.window = parse_value(key, value)?,
            "knn" => self.knn = parse_value(key, value)?,
            "lr" => self.lr = parse_value(key, value)?,
            "jobs" => self.jobs = Some(parse_value(key, value)?),
            "out" => self.out = PathBuf::from(value),
            other => {
                return Err(CliError::Usage(format!("unknown setting '{other}'")));
            }
        }
        Ok(())
    }

    /// Layer a flat key=value file over the current settings. Blank lines
    /// and lines starting with `#` are ignored.
    fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|err| {
            CliError::Data(format!("cannot read config file {}: {err}", path.display()))
        })?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "config file line {}: expected key=value, got '{line}'",
                    lineno + 1
                ))
            })?;
            self.apply(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Layer the explicitly given flags over the current settings.
    fn apply_flags(&mut self, args: &RunArgs) -> Result<(), CliError> {
        if let Some(v) = &args.data {
            self.data = Some(v.clone());
        }
        if let Some(v) = &args.target {
            self.target = v.parse().expect("target parsing is infallible");
        }
        if let Some(v) = &args.strategy {
            self.strategy = v.parse()?;
        }
        if let Some(v) = &args.learner {
            self.learner = v.parse()?;
        }
        if let Some(v) = args.runs {
            self.runs = v;
        }
        if let Some(v) = args.seed {
            self.seed = v;
        }
        if let Some(v) = args.beta {
            self.beta = v;
        }
        if let Some(v) = args.alpha {
            self.alpha = v;
        }
        if let Some(v) = args.second_chance {
            self.second_chance = v;
        }
        if let Some(v) = args.thr_phi {
            self.thr_phi = v;
        }
        if let Some(v) = args.sera_step {
            self.sera_step = v;
        }
        if let Some(v) = args.warm_frac {
            self.warm_frac = v;
        }
        if let Some(v) = args.train_frac {
            self.train_frac = v;
        }
        if let Some(v) = args.bins {
            self.bins = v;
        }
        if let Some(v) = args.split_threshold {
            self.split_threshold = v;
        }
        if let Some(v) = args.max_bins {
            self.max_bins = v;
        }
        if let Some(v) = args.window {
            self.window = v;
        }
        if let Some(v) = args.knn {
            self.knn = v;
        }
        if let Some(v) = args.lr {
            self.lr = v;
        }
        if let Some(v) = args.jobs {
            self.jobs = Some(v);
        }
        if let Some(v) = &args.out {
            self.out = v.clone();
        }
        Ok(())
    }

    /// Defaults, overridden by the config file, overridden by flags.
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let mut settings = RunSettings::default();
        if let Some(path) = &args.config {
            settings.apply_file(path)?;
        }
        settings.apply_flags(args)?;
        Ok(settings)
    }

    /// Runs must be positive and every parameter must pass its core
    /// constructor. Returns a template experiment for one grid cell.
    pub fn experiment_for(
        &self,
        strategy: Strategy,
        learner: LearnerKind,
    ) -> Result<ExperimentConfig, CliError> {
        if self.runs == 0 {
            return Err(CliError::Usage("--runs must be at least 1".into()));
        }
        let spec = LearnerSpec::with_params(learner, self.lr, self.window, self.knn)
            .map_err(CliError::usage)?;
        let split = PhaseSplit::new(self.warm_frac, self.train_frac).map_err(CliError::usage)?;
        let sampler = SamplerConfig::new(self.beta, self.alpha, self.second_chance, 1000)
            .map_err(CliError::usage)?;
        let metrics = MetricConfig::new(self.thr_phi, self.sera_step).map_err(CliError::usage)?;
        let pid = PidConfig::new(self.bins, self.split_threshold, self.max_bins)
            .map_err(CliError::usage)?;
        Ok(ExperimentConfig {
            strategy,
            learner: spec,
            split,
            sampler,
            metrics,
            pid,
            relevance_bins: DEFAULT_RELEVANCE_BINS,
            runs: self.runs,
            base_seed: self.seed,
        })
    }
}
