//! Stream-regression toolkit for imbalanced targets.
//!
//! The crate provides the pieces of a prequential (test-then-train)
//! experiment over a data stream whose target distribution is dominated by
//! a few dense regions:
//!
//! - [`data`]: instances, datasets, a controllable synthetic generator, CSV
//!   loading, and warm/train/test phase splitting.
//! - [`density`]: an incremental histogram ([`PidHistogram`]) that tracks the
//!   target density online, and a fixed [`RelevanceModel`] mapping targets to
//!   a rarity score φ ∈ [0, 1].
//! - [`sampling`]: selection and replication rules that train a learner more
//!   often on rare targets (histogram-driven under/oversampling plus
//!   Chebyshev-inequality baselines).
//! - [`learners`]: small online regressors behind a common [`Learner`] trait.
//! - [`evaluation`]: imbalance-aware error metrics, the prequential harness,
//!   and cross-run aggregation.

pub mod data;
pub mod density;
pub mod evaluation;
pub mod learners;
pub mod sampling;

pub use data::{
    generate_synthetic, load_csv, split_phases, Dataset, Instance, PhaseSplit, SyntheticConfig,
};
pub use density::{PidHistogram, RelevanceModel};
pub use evaluation::{
    aggregate, rmse, rmse_phi, run_prequential, run_prequential_detailed, sera,
    ExperimentConfig, LogEntry, MetricConfig, RunResult,
};
pub use learners::{Learner, LearnerKind, LearnerSpec};
pub use sampling::{SamplerConfig, Strategy};
