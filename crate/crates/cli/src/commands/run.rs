//! The run command: execute the requested strategies × learners × runs
//! grid over one dataset and write one CSV row per run, in deterministic
//! order regardless of worker scheduling.

use rayon::prelude::*;

use histream::{load_csv, run_prequential, ExperimentConfig};

use crate::args::RunArgs;
use crate::config::RunSettings;
use crate::error::CliError;
use crate::rows::RunRow;

pub fn execute(args: &RunArgs) -> Result<(), CliError> {
    let settings = RunSettings::resolve(args)?;
    let data_path = settings
        .data
        .clone()
        .ok_or_else(|| CliError::Usage("--data is required (flag or config file)".into()))?;

    // Build every grid cell up front so configuration mistakes surface
    // before any dataset work starts.
    let mut experiments: Vec<ExperimentConfig> = Vec::new();
    for strategy in settings.strategy.strategies() {
        for learner in settings.learner.learners() {
            experiments.push(settings.experiment_for(strategy, learner)?);
        }
    }

    let dataset = load_csv(&data_path, &settings.target).map_err(CliError::data)?;

    let tasks: Vec<(&ExperimentConfig, u32)> = experiments
        .iter()
        .flat_map(|config| (0..config.runs).map(move |run_idx| (config, run_idx)))
        .collect();

    let run_all = || {
        tasks
            .par_iter()
            .map(|&(config, run_idx)| {
                let seed = config.seed_for_run(run_idx);
                run_prequential(&dataset, config, seed)
                    .map(|result| RunRow::new(&settings, run_idx, &result))
                    .map_err(|err| {
                        format!(
                            "strategy={} learner={} run={run_idx}: {err}",
                            config.strategy,
                            config.learner.kind()
                        )
                    })
            })
            .collect::<Vec<_>>()
    };
    let outcomes = match settings.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|err| CliError::Usage(format!("cannot build worker pool: {err}")))?
            .install(run_all),
        None => run_all(),
    };

    let mut rows = Vec::new();
    let mut failures = 0usize;
    for outcome in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(message) => {
                failures += 1;
                eprintln!("run failed: {message}");
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::AllRunsFailed(format!(
            "all {failures} runs failed; see messages above"
        )));
    }
    rows.sort_by(|a, b| {
        (a.strategy, a.learner, a.run_idx).cmp(&(b.strategy, b.learner, b.run_idx))
    });

    let mut writer = csv::Writer::from_path(&settings.out).map_err(CliError::data)?;
    for row in &rows {
        writer.serialize(row).map_err(CliError::data)?;
    }
    writer.flush().map_err(CliError::data)?;

    println!(
        "wrote {} rows to {} ({failures} failed)",
        rows.len(),
        settings.out.display()
    );
    Ok(())
}
