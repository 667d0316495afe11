//! End-to-end smoke drive: generate a synthetic stream, run every sampling
//! strategy against the mean predictor, and print one result line each.

use histream::{
    generate_synthetic, run_prequential, ExperimentConfig, LearnerKind, LearnerSpec, Strategy,
    SyntheticConfig,
};

fn main() {
    let dataset = generate_synthetic(&SyntheticConfig::new(20_000, 42)).expect("datagen");
    println!(
        "dataset {} n={} target range [{:.1}, {:.1}]",
        dataset.name,
        dataset.len(),
        dataset.targets().iter().cloned().fold(f64::INFINITY, f64::min),
        dataset.targets().iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    for strategy in Strategy::ALL {
        let config =
            ExperimentConfig::new(strategy, LearnerSpec::new(LearnerKind::WindowKnn));
        let result = run_prequential(&dataset, &config, config.seed_for_run(0)).expect("run");
        println!(
            "{:<9} rmse={:>8.3} rmse_phi={:>8.3} sera={:.4} trained={} replications={}",
            strategy.name(),
            result.rmse,
            result.rmse_phi,
            result.sera,
            result.trained_instances,
            result.total_replications,
        );
    }
}
