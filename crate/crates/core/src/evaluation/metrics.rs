//! Error metrics over a test-phase prediction log, including two
//! relevance-aware ones: a relevance-weighted RMSE restricted to rare
//! targets, and the normalized area under the squared-error-vs-relevance
//! curve (0 = perfect, 1 = all error concentrated independently of
//! relevance).

use serde::Serialize;

use super::EvalError;

/// One test-phase observation: true target, prediction, and the target's
/// relevance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogEntry {
    pub y_true: f64,
    pub y_pred: f64,
    pub phi: f64,
}

impl LogEntry {
    fn squared_error(&self) -> f64 {
        let e = self.y_pred - self.y_true;
        e * e
    }
}

/// Metric parameters: the relevance threshold for the rare-case RMSE and
/// the integration grid step for the relevance-area metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricConfig {
    thr_phi: f64,
    sera_step: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { thr_phi: 0.9, sera_step: 0.001 }
    }
}

impl MetricConfig {
    /// Requires a threshold in [0, 1] and a grid step in (0, 1].
    pub fn new(thr_phi: f64, sera_step: f64) -> Result<Self, EvalError> {
        if !(0.0..=1.0).contains(&thr_phi) || !thr_phi.is_finite() {
            return Err(EvalError::InvalidConfig(format!(
                "relevance threshold must lie in [0, 1], got {thr_phi}"
            )));
        }
        if !(sera_step > 0.0 && sera_step <= 1.0) {
            return Err(EvalError::InvalidConfig(format!(
                "integration step must lie in (0, 1], got {sera_step}"
            )));
        }
        Ok(MetricConfig { thr_phi, sera_step })
    }

    pub fn thr_phi(&self) -> f64 {
        self.thr_phi
    }

    pub fn sera_step(&self) -> f64 {
        self.sera_step
    }
}

/// Root mean squared error over the whole log.
pub fn rmse(log: &[LogEntry]) -> Result<f64, EvalError> {
    if log.is_empty() {
        return Err(EvalError::EmptyLog);
    }
    let mean = log.iter().map(LogEntry::squared_error).sum::<f64>() / log.len() as f64;
    Ok(mean.sqrt())
}

/// Relevance-weighted RMSE over entries with relevance at or above `thr`:
/// `√(Σ φ·e² / Σ φ)`. Errors when no entry qualifies (or all qualifying
/// entries carry zero weight), so a run over a stream with no rare cases is
/// reported rather than silently scored 0.
pub fn rmse_phi(log: &[LogEntry], thr: f64) -> Result<f64, EvalError> {
    if log.is_empty() {
        return Err(EvalError::EmptyLog);
    }
    if !(0.0..=1.0).contains(&thr) || !thr.is_finite() {
        return Err(EvalError::InvalidConfig(format!(
            "relevance threshold must lie in [0, 1], got {thr}"
        )));
    }
    let mut weighted = 0.0;
    let mut weight = 0.0;
    for entry in log.iter().filter(|e| e.phi >= thr) {
        weighted += entry.phi * entry.squared_error();
        weight += entry.phi;
    }
    if weight <= 0.0 {
        return Err(EvalError::NoRelevantInstances { threshold: thr });
    }
    Ok((weighted / weight).sqrt())
}

/// Sum of squared errors over entries with relevance at or above `t`.
///
/// Brute-force reference form; [`sera`] computes the same quantity through
/// prefix sums and the two are checked against each other in tests.
pub fn ser(log: &[LogEntry], t: f64) -> f64 {
    log.iter().filter(|e| e.phi >= t).map(LogEntry::squared_error).sum()
}

/// Normalized area under the squared-error curve across relevance cutoffs:
/// trapezoidal integral over t ∈ [0, 1] of `ser(log, t) / ser(log, 0)`.
/// A perfect predictor scores 0 (by convention when the total error is 0);
/// error mass concentrated entirely on maximally relevant entries scores 1.
pub fn sera(log: &[LogEntry], step: f64) -> Result<f64, EvalError> {
    if log.is_empty() {
        return Err(EvalError::EmptyLog);
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(EvalError::InvalidConfig(format!(
            "integration step must lie in (0, 1], got {step}"
        )));
    }
    // Sort by relevance once; ser at any cutoff is then a suffix sum.
    let mut by_phi: Vec<(f64, f64)> =
        log.iter().map(|e| (e.phi, e.squared_error())).collect();
    by_phi.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite relevance"));
    let mut suffix = vec![0.0; by_phi.len() + 1];
    for i in (0..by_phi.len()).rev() {
        suffix[i] = suffix[i + 1] + by_phi[i].1;
    }
    let ser_at = |t: f64| -> f64 {
        let idx = by_phi.partition_point(|(phi, _)| *phi < t);
        suffix[idx]
    };
    let ser_0 = suffix[0];
    if ser_0 <= 0.0 {
        return Ok(0.0);
    }

    // Uniform grid over [0, 1]; the final point is pinned to exactly 1 so
    // accumulated floating-point drift cannot overshoot or fall short.
    let mut grid: Vec<f64> = (0..)
        .map(|i| i as f64 * step)
        .take_while(|t| *t < 1.0)
        .collect();
    grid.push(1.0);

    let mut area = 0.0;
    for pair in grid.windows(2) {
        let width = pair[1] - pair[0];
        area += width * (ser_at(pair[0]) + ser_at(pair[1])) / (2.0 * ser_0);
    }
    Ok(area)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(y_true: f64, y_pred: f64, phi: f64) -> LogEntry {
        LogEntry { y_true, y_pred, phi }
    }

    #[test]
    fn metric_config_defaults_and_validation() {
        let config = MetricConfig::default();
        assert_eq!(config.thr_phi(), 0.9);
        assert_eq!(config.sera_step(), 0.001);
        assert!(MetricConfig::new(1.5, 0.001).is_err());
        assert!(MetricConfig::new(0.9, 0.0).is_err());
        assert!(MetricConfig::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn rmse_of_perfect_predictions_is_zero() {
        let log = [entry(1.0, 1.0, 0.5), entry(-2.0, -2.0, 0.9)];
        assert_eq!(rmse(&log).unwrap(), 0.0);
    }

    #[test]
    fn rmse_of_single_entry_is_its_absolute_error() {
        let log = [entry(1.0, 4.0, 0.5)];
        assert_eq!(rmse(&log).unwrap(), 3.0);
    }

    #[test]
    fn rmse_of_two_errors_matches_hand_arithmetic() {
        let log = [entry(0.0, 3.0, 0.5), entry(0.0, 4.0, 0.5)];
        assert!((rmse(&log).unwrap() - 12.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty_log_is_an_error() {
        assert!(matches!(rmse(&[]), Err(EvalError::EmptyLog)));
        assert!(matches!(rmse_phi(&[], 0.9), Err(EvalError::EmptyLog)));
        assert!(matches!(sera(&[], 0.001), Err(EvalError::EmptyLog)));
    }

    #[test]
    fn uniform_full_relevance_reduces_weighted_rmse_to_plain_rmse() {
        let log = [entry(0.0, 3.0, 1.0), entry(0.0, 4.0, 1.0)];
        assert_eq!(rmse_phi(&log, 0.9).unwrap(), rmse(&log).unwrap());
        assert_eq!(rmse_phi(&log, 0.0).unwrap(), rmse(&log).unwrap());
    }

    #[test]
    fn low_relevance_entries_are_excluded() {
        let log = [entry(0.0, 2.0, 1.0), entry(0.0, 100.0, 0.5)];
        assert_eq!(rmse_phi(&log, 0.9).unwrap(), 2.0);
    }

    #[test]
    fn weighted_rmse_matches_hand_evaluation() {
        let log = [entry(0.0, 0.0, 1.0), entry(0.0, 10.0, 0.9)];
        let expected = (0.9 * 100.0 / 1.9f64).sqrt();
        assert!((rmse_phi(&log, 0.9).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn no_qualifying_entries_is_a_reported_error() {
        let log = [entry(0.0, 1.0, 0.5), entry(0.0, 1.0, 0.89)];
        assert!(matches!(
            rmse_phi(&log, 0.9),
            Err(EvalError::NoRelevantInstances { .. })
        ));
    }

    #[test]
    fn zero_weight_entries_cannot_carry_the_metric() {
        let log = [entry(0.0, 5.0, 0.0)];
        assert!(matches!(
            rmse_phi(&log, 0.0),
            Err(EvalError::NoRelevantInstances { .. })
        ));
    }

    #[test]
    fn sera_of_perfect_predictions_is_zero() {
        let log = [entry(1.0, 1.0, 0.3), entry(2.0, 2.0, 0.8)];
        assert_eq!(sera(&log, 0.001).unwrap(), 0.0);
    }

    #[test]
    fn sera_with_all_relevance_one_is_one() {
        let log = [entry(0.0, 1.0, 1.0), entry(0.0, 2.0, 1.0)];
        assert!((sera(&log, 0.001).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sera_toy_case_matches_the_piecewise_integral() {
        // Squared errors 3 at relevance 0 and 1 at relevance 0.5: the
        // normalized curve is 1 at t = 0, 0.25 on (0, 0.5], 0 above, so the
        // exact integral in the fine-step limit is 0.125.
        let log = [entry(0.0, 3.0f64.sqrt(), 0.0), entry(0.0, 1.0, 0.5)];
        let value = sera(&log, 0.001).unwrap();
        assert!((value - 0.125).abs() <= 2.0 * 0.001, "got {value}");
    }

    #[test]
    fn default_step_matches_a_finer_grid() {
        let log = [
            entry(0.0, 1.5, 0.1),
            entry(0.0, 0.5, 0.35),
            entry(0.0, 2.5, 0.62),
            entry(0.0, 0.25, 0.9),
            entry(0.0, 1.0, 1.0),
        ];
        let coarse = sera(&log, 0.001).unwrap();
        let fine = sera(&log, 0.0001).unwrap();
        assert!((coarse - fine).abs() < 0.002, "{coarse} vs {fine}");
    }

    #[test]
    fn suffix_sum_integration_agrees_with_brute_force_integration() {
        // Same trapezoid grid, but evaluating the error sum at every cutoff
        // by filtering from scratch instead of through sorted suffix sums.
        let log: Vec<LogEntry> = (0..40)
            .map(|i| {
                let phi = ((i * 31) % 41) as f64 / 40.0;
                entry(0.0, ((i * 17) % 9) as f64 * 0.75, phi)
            })
            .collect();
        let step = 0.01;
        let mut grid: Vec<f64> = (0..)
            .map(|i| i as f64 * step)
            .take_while(|t| *t < 1.0)
            .collect();
        grid.push(1.0);
        let ser_0 = ser(&log, 0.0);
        let mut brute_area = 0.0;
        for pair in grid.windows(2) {
            let width = pair[1] - pair[0];
            brute_area += width * (ser(&log, pair[0]) + ser(&log, pair[1])) / (2.0 * ser_0);
        }
        let fast = sera(&log, step).unwrap();
        assert!((fast - brute_area).abs() < 1e-12, "{fast} vs {brute_area}");
    }

    #[test]
    fn ser_is_non_increasing_in_the_cutoff() {
        let log: Vec<LogEntry> = (0..100)
            .map(|i| {
                let phi = ((i * 37) % 101) as f64 / 100.0;
                entry(0.0, ((i * 13) % 7) as f64, phi)
            })
            .collect();
        let mut previous = f64::INFINITY;
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let value = ser(&log, t);
            assert!(value <= previous);
            previous = value;
        }
    }

    #[test]
    fn sera_stays_in_the_unit_interval() {
        let log: Vec<LogEntry> = (0..50)
            .map(|i| {
                let phi = ((i * 29) % 50) as f64 / 49.0;
                entry(i as f64, (i as f64) + ((i % 5) as f64), phi)
            })
            .collect();
        let value = sera(&log, 0.001).unwrap();
        assert!((0.0..=1.0).contains(&value), "got {value}");
    }

    #[test]
    fn bad_step_is_rejected() {
        let log = [entry(0.0, 1.0, 0.5)];
        assert!(sera(&log, 0.0).is_err());
        assert!(sera(&log, 1.5).is_err());
    }
}
