//! Cross-run aggregation: per-cell means and deviations, per-dataset
//! max-normalization, and average strategy ranks across datasets.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{EvalError, RunResult};
use crate::learners::LearnerKind;
use crate::sampling::Strategy;

/// The three reported error metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Rmse,
    RmsePhi,
    Sera,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Rmse, Metric::RmsePhi, Metric::Sera];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Rmse => "rmse",
            Metric::RmsePhi => "rmse-phi",
            Metric::Sera => "sera",
        }
    }

    pub fn of(&self, result: &RunResult) -> f64 {
        match self {
            Metric::Rmse => result.rmse,
            Metric::RmsePhi => result.rmse_phi,
            Metric::Sera => result.sera,
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Mean, sample standard deviation, and per-dataset max-normalized mean of
/// one metric in one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub normalized: f64,
}

/// Aggregated results for one (dataset, strategy, learner) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub dataset: String,
    pub strategy: Strategy,
    pub learner: LearnerKind,
    pub runs: usize,
    pub rmse: MetricSummary,
    pub rmse_phi: MetricSummary,
    pub sera: MetricSummary,
}

impl CellSummary {
    pub fn metric(&self, metric: Metric) -> &MetricSummary {
        match metric {
            Metric::Rmse => &self.rmse,
            Metric::RmsePhi => &self.rmse_phi,
            Metric::Sera => &self.sera,
        }
    }
}

/// Average rank of a strategy across datasets for one (learner, metric);
/// rank 1 is the lowest mean error, ties share the mean of their ranks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub learner: LearnerKind,
    pub metric: Metric,
    pub strategy: Strategy,
    pub avg_rank: f64,
}

/// The full aggregation: cells sorted by (dataset, strategy, learner) and
/// ranks sorted by (learner, metric, strategy).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateSummary {
    pub cells: Vec<CellSummary>,
    pub ranks: Vec<RankEntry>,
}

fn mean_of(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_std(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

type CellKey = (String, Strategy, LearnerKind);

/// Aggregate a set of per-run results.
///
/// Every dataset must cover the same (strategy, learner) grid; a partial
/// grid cannot be ranked consistently and is reported as an error.
pub fn aggregate(results: &[RunResult]) -> Result<AggregateSummary, EvalError> {
    if results.is_empty() {
        return Err(EvalError::NoResults);
    }

    let mut groups: BTreeMap<CellKey, Vec<&RunResult>> = BTreeMap::new();
    for result in results {
        groups
            .entry((result.dataset.clone(), result.strategy, result.learner))
            .or_default()
            .push(result);
    }

    let datasets: BTreeSet<&String> = groups.keys().map(|(d, _, _)| d).collect();
    let reference: BTreeSet<(Strategy, LearnerKind)> = groups
        .keys()
        .filter(|(d, _, _)| d == *datasets.iter().next().expect("non-empty groups"))
        .map(|(_, s, l)| (*s, *l))
        .collect();
    for dataset in &datasets {
        let combos: BTreeSet<(Strategy, LearnerKind)> = groups
            .keys()
            .filter(|(d, _, _)| &d == dataset)
            .map(|(_, s, l)| (*s, *l))
            .collect();
        if combos != reference {
            return Err(EvalError::InconsistentGrouping(format!(
                "dataset {dataset:?} covers a different strategy/learner grid than the others"
            )));
        }
    }

    // Per-cell means and deviations.
    let mut cells: Vec<CellSummary> = Vec::with_capacity(groups.len());
    for ((dataset, strategy, learner), runs) in &groups {
        let summarize = |metric: Metric| {
            let values: Vec<f64> = runs.iter().map(|r| metric.of(r)).collect();
            let mean = mean_of(&values);
            MetricSummary { mean, std_dev: sample_std(&values, mean), normalized: 0.0 }
        };
        cells.push(CellSummary {
            dataset: dataset.clone(),
            strategy: *strategy,
            learner: *learner,
            runs: runs.len(),
            rmse: summarize(Metric::Rmse),
            rmse_phi: summarize(Metric::RmsePhi),
            sera: summarize(Metric::Sera),
        });
    }

    // Normalize by the per-dataset maximum of each metric.
    for dataset in &datasets {
        for metric in Metric::ALL {
            let max = cells
                .iter()
                .filter(|c| &&c.dataset == dataset)
                .map(|c| c.metric(metric).mean)
                .fold(f64::NEG_INFINITY, f64::max);
            for cell in cells.iter_mut().filter(|c| &&c.dataset == dataset) {
                let summary = match metric {
                    Metric::Rmse => &mut cell.rmse,
                    Metric::RmsePhi => &mut cell.rmse_phi,
                    Metric::Sera => &mut cell.sera,
                };
                summary.normalized = if max > 0.0 { summary.mean / max } else { 0.0 };
            }
        }
    }

    // Average rank of each strategy across datasets, per (learner, metric).
    let learners: BTreeSet<LearnerKind> = reference.iter().map(|(_, l)| *l).collect();
    let mut ranks: Vec<RankEntry> = Vec::new();
    for learner in &learners {
        for metric in Metric::ALL {
            let mut rank_sums: BTreeMap<Strategy, f64> = BTreeMap::new();
            for dataset in &datasets {
                let mut scored: Vec<(Strategy, f64)> = cells
                    .iter()
                    .filter(|c| &&c.dataset == dataset && c.learner == *learner)
                    .map(|c| (c.strategy, c.metric(metric).mean))
                    .collect();
                scored.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
                let mut i = 0;
                while i < scored.len() {
                    let mut j = i;
                    while j < scored.len() && scored[j].1 == scored[i].1 {
                        j += 1;
                    }
                    // Tied cells share the mean of positions i+1 ..= j.
                    let rank = (i + 1 + j) as f64 / 2.0;
                    for (strategy, _) in &scored[i..j] {
                        *rank_sums.entry(*strategy).or_insert(0.0) += rank;
                    }
                    i = j;
                }
            }
            for (strategy, sum) in rank_sums {
                ranks.push(RankEntry {
                    learner: *learner,
                    metric,
                    strategy,
                    avg_rank: sum / datasets.len() as f64,
                });
            }
        }
    }

    Ok(AggregateSummary { cells, ranks })
}
