//! The report command: aggregate run rows into a summary JSON and emit
//! plot-ready series — predicted-vs-true logs, a histogram dump, and the
//! relevance curve — for each dataset that is still readable.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use histream::data::TargetColumn;
use histream::density::{build_relevance, PidConfig, PidHistogram};
use histream::evaluation::{CellSummary, RankEntry};
use histream::{load_csv, run_prequential_detailed, Dataset, RunResult};

use crate::args::ReportArgs;
use crate::error::CliError;
use crate::rows::RunRow;

#[derive(Serialize)]
struct Report<'a> {
    runs: &'a [RunRow],
    cells: &'a [CellSummary],
    ranks: &'a [RankEntry],
}

#[derive(Serialize)]
struct HistogramDump<'a> {
    dataset: &'a str,
    breaks: &'a [f64],
    counts: &'a [u64],
    total: u64,
}

pub fn execute(args: &ReportArgs) -> Result<(), CliError> {
    let mut rows: Vec<RunRow> = Vec::new();
    for path in &args.inputs {
        let mut reader = csv::Reader::from_path(path)
            .map_err(|err| CliError::Data(format!("{}: {err}", path.display())))?;
        for record in reader.deserialize::<RunRow>() {
            rows.push(
                record.map_err(|err| CliError::Data(format!("{}: {err}", path.display())))?,
            );
        }
    }
    if rows.is_empty() {
        return Err(CliError::Data("no run rows in the input files".into()));
    }

    let results: Vec<RunResult> = rows.iter().map(RunRow::result).collect();
    let summary = histream::aggregate(&results).map_err(CliError::data)?;

    std::fs::create_dir_all(&args.out).map_err(CliError::data)?;
    let report = Report { runs: &rows, cells: &summary.cells, ranks: &summary.ranks };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&args.out.join("summary.json"), json.as_bytes())?;

    let series = emit_plot_series(&args.out, &rows)?;
    println!(
        "wrote summary.json and {series} plot series to {}",
        args.out.display()
    );
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|err| CliError::Data(format!("{}: {err}", path.display())))
}

/// Load each dataset referenced by the rows once; unreadable data only
/// costs the plots, never the summary.
fn load_referenced_datasets(rows: &[RunRow]) -> BTreeMap<String, Dataset> {
    let mut loaded = BTreeMap::new();
    for row in rows {
        if row.data.is_empty() || loaded.contains_key(&row.dataset) {
            continue;
        }
        let target: TargetColumn = row.target.parse().expect("target parsing is infallible");
        match load_csv(PathBuf::from(&row.data).as_path(), &target) {
            Ok(dataset) => {
                loaded.insert(row.dataset.clone(), dataset);
            }
            Err(err) => {
                eprintln!(
                    "warning: skipping plot series for dataset '{}': {err}",
                    row.dataset
                );
            }
        }
    }
    loaded
}

fn emit_plot_series(out_dir: &Path, rows: &[RunRow]) -> Result<usize, CliError> {
    let datasets = load_referenced_datasets(rows);
    let mut series = 0usize;

    // Per dataset: the incremental histogram over the full target stream
    // and the fixed relevance curve sampled at 512 points.
    let mut first_row_per_dataset: BTreeMap<&str, &RunRow> = BTreeMap::new();
    for row in rows {
        first_row_per_dataset.entry(&row.dataset).or_insert(row);
    }
    for (name, row) in &first_row_per_dataset {
        let Some(dataset) = datasets.get(*name) else { continue };
        let targets = dataset.targets();

        let pid = PidConfig::new(row.bins, row.split_threshold, row.max_bins)
            .map_err(CliError::usage)?;
        let mut hist = PidHistogram::new(pid);
        for &y in &targets {
            hist.update(y).map_err(CliError::data)?;
        }
        let dump = HistogramDump {
            dataset: name,
            breaks: hist.breaks(),
            counts: hist.counts(),
            total: hist.total(),
        };
        let json = serde_json::to_string_pretty(&dump).expect("dump serializes");
        write_file(&out_dir.join(format!("histogram_{name}.json")), json.as_bytes())?;
        series += 1;

        match build_relevance(&targets, 20) {
            Ok(model) => {
                let min = targets.iter().cloned().fold(f64::INFINITY, f64::min);
                let max = targets.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mut buf = Vec::new();
                writeln!(buf, "y,phi").expect("in-memory write");
                for i in 0..512 {
                    let y = min + (max - min) * i as f64 / 511.0;
                    writeln!(buf, "{y},{}", model.phi(y)).expect("in-memory write");
                }
                write_file(&out_dir.join(format!("relevance_{name}.csv")), &buf)?;
                series += 1;
            }
            Err(err) => {
                eprintln!("warning: no relevance curve for dataset '{name}': {err}");
            }
        }
    }

    // Per grid cell: replay the first run and emit its test-phase log.
    let mut first_run_per_cell: BTreeMap<(&str, &str, &str), &RunRow> = BTreeMap::new();
    for row in rows {
        let key = (row.dataset.as_str(), row.strategy.name(), row.learner.name());
        first_run_per_cell
            .entry(key)
            .and_modify(|best| {
                if row.run_idx < best.run_idx {
                    *best = row;
                }
            })
            .or_insert(row);
    }
    for ((name, strategy, learner), row) in &first_run_per_cell {
        let Some(dataset) = datasets.get(*name) else { continue };
        let config = row.experiment()?;
        match run_prequential_detailed(dataset, &config, row.seed) {
            Ok((_, log)) => {
                let mut buf = Vec::new();
                writeln!(buf, "idx,y_true,y_pred,phi").expect("in-memory write");
                for (i, entry) in log.iter().enumerate() {
                    writeln!(buf, "{i},{},{},{}", entry.y_true, entry.y_pred, entry.phi)
                        .expect("in-memory write");
                }
                let file = format!("predictions_{name}_{strategy}_{learner}.csv");
                write_file(&out_dir.join(file), &buf)?;
                series += 1;
            }
            Err(err) => {
                eprintln!(
                    "warning: cannot replay {strategy}/{learner} on '{name}': {err}"
                );
            }
        }
    }

    Ok(series)
}
