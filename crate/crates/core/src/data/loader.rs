//! CSV loading and writing for regression streams.
//!
//! Every non-target column is taken as a numeric feature, in file order.
//! The target column is selected either by header name or by zero-based
//! position. Selecting by name requires a header row; selecting by index
//! works with or without one — the first row is treated as a header exactly
//! when at least one of its fields does not parse as a number.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use super::{DataError, Dataset, Instance};

/// How to pick the target column of a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetColumn {
    /// Match a header cell exactly.
    Name(String),
    /// Zero-based column position.
    Index(usize),
}

impl FromStr for TargetColumn {
    type Err = std::convert::Infallible;

    /// A string of digits selects by position; anything else by name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<usize>() {
            Ok(i) => Ok(TargetColumn::Index(i)),
            Err(_) => Ok(TargetColumn::Name(s.to_string())),
        }
    }
}

impl fmt::Display for TargetColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetColumn::Name(n) => write!(f, "{n}"),
            TargetColumn::Index(i) => write!(f, "{i}"),
        }
    }
}

/// Load a CSV file from disk. See [`load_csv_reader`].
pub fn load_csv(path: &Path, target: &TargetColumn) -> Result<Dataset, DataError> {
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    load_csv_reader(BufReader::new(file), &name, target)
}

/// Parse CSV content into a [`Dataset`] named `name`.
///
/// Row numbers in errors are 1-based over data rows (a header row is not
/// counted). Column numbers are 0-based file positions.
pub fn load_csv_reader<R: Read>(
    reader: R,
    name: &str,
    target: &TargetColumn,
) -> Result<Dataset, DataError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_reader(reader);

    let mut records = csv_reader.records();
    let first = match records.next() {
        Some(rec) => rec.map_err(csv_error)?,
        None => return Err(DataError::EmptyDataset),
    };

    let first_is_header = match target {
        TargetColumn::Name(_) => true,
        TargetColumn::Index(_) => first.iter().any(|f| f.trim().parse::<f64>().is_err()),
    };

    let target_idx = match target {
        TargetColumn::Name(name) => first
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| DataError::MissingTarget(name.clone()))?,
        TargetColumn::Index(i) => {
            if *i >= first.len() {
                return Err(DataError::MissingTarget(format!(
                    "column {i} (file has {} columns)",
                    first.len()
                )));
            }
            *i
        }
    };

    let width = first.len();
    let mut instances = Vec::new();
    let mut parse_row = |row: usize, record: &csv::StringRecord| -> Result<(), DataError> {
        if record.len() != width {
            return Err(DataError::Format {
                row,
                message: format!("expected {width} columns, found {}", record.len()),
            });
        }
        let mut features = Vec::with_capacity(width - 1);
        let mut target_value = None;
        for (col, field) in record.iter().enumerate() {
            let value: f64 = field
                .trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| DataError::Parse {
                    row,
                    column: col,
                    value: field.to_string(),
                })?;
            if col == target_idx {
                target_value = Some(value);
            } else {
                features.push(value);
            }
        }
        instances.push(Instance {
            features,
            target: target_value.expect("target index verified against row width"),
        });
        Ok(())
    };

    let mut row = 0usize;
    if !first_is_header {
        row += 1;
        parse_row(row, &first)?;
    }
    for record in records {
        let record = record.map_err(csv_error)?;
        row += 1;
        parse_row(row, &record)?;
    }

    if instances.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    Ok(Dataset::new(name, instances))
}

fn csv_error(err: csv::Error) -> DataError {
    DataError::Format {
        row: err
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(0),
        message: err.to_string(),
    }
}

/// Write a dataset as CSV with headers `x1,…,xd,y` (just `x,y` when there is
/// a single feature). All instances must share one feature width.
pub fn write_xy_csv(path: &Path, dataset: &Dataset) -> Result<(), DataError> {
    let io_err = |source: std::io::Error| DataError::Io {
        path: path.display().to_string(),
        source,
    };
    let dim = dataset.instances.first().map_or(0, |i| i.features.len());
    for (idx, inst) in dataset.instances.iter().enumerate() {
        if inst.features.len() != dim {
            return Err(DataError::Format {
                row: idx + 1,
                message: format!(
                    "inconsistent feature width: expected {dim}, found {}",
                    inst.features.len()
                ),
            });
        }
    }
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    if dim == 1 {
        writeln!(out, "x,y").map_err(io_err)?;
    } else {
        let header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
        writeln!(out, "{},y", header.join(",")).map_err(io_err)?;
    }
    for inst in &dataset.instances {
        for feature in &inst.features {
            write!(out, "{feature},").map_err(io_err)?;
        }
        writeln!(out, "{}", inst.target).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn by_name(s: &str) -> TargetColumn {
        TargetColumn::Name(s.to_string())
    }

    #[test]
    fn loads_three_rows_with_header() {
        let csv = "a,b,y\n1,2,3\n4,5,6\n7,8,9\n";
        let ds = load_csv_reader(csv.as_bytes(), "t", &by_name("y")).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.instances[0].features, vec![1.0, 2.0]);
        assert_eq!(ds.instances[0].target, 3.0);
        assert_eq!(ds.instances[2].target, 9.0);
    }

    #[test]
    fn index_target_with_numeric_first_row_has_no_header() {
        let csv = "1,2\n3,4\n";
        let ds = load_csv_reader(csv.as_bytes(), "t", &TargetColumn::Index(1)).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.instances[0].features, vec![1.0]);
        assert_eq!(ds.instances[0].target, 2.0);
    }

    #[test]
    fn index_target_skips_textual_header() {
        let csv = "x,y\n1,2\n3,4\n";
        let ds = load_csv_reader(csv.as_bytes(), "t", &TargetColumn::Index(1)).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.instances[1].target, 4.0);
    }

    #[test]
    fn non_numeric_field_reports_row_and_column() {
        let csv = "x,y\n1,2\n3,abc\n";
        let err = load_csv_reader(csv.as_bytes(), "t", &by_name("y")).unwrap_err();
        match err {
            DataError::Parse { row, column, value } => {
                assert_eq!(row, 2);
                assert_eq!(column, 1);
                assert_eq!(value, "abc");
            }
            other => panic!("expected Parse error, got {other:?}"),
        }
    }

    #[test]
    fn target_only_file_yields_empty_features() {
        let csv = "y\n10\n20\n";
        let ds = load_csv_reader(csv.as_bytes(), "t", &by_name("y")).unwrap();
        assert_eq!(ds.len(), 2);
        assert!(ds.instances[0].features.is_empty());
        assert_eq!(ds.instances[1].target, 20.0);
    }

    #[test]
    fn missing_target_name_is_reported() {
        let csv = "a,b\n1,2\n";
        let err = load_csv_reader(csv.as_bytes(), "t", &by_name("y")).unwrap_err();
        assert!(matches!(err, DataError::MissingTarget(name) if name == "y"));
    }

    #[test]
    fn out_of_range_target_index_is_reported() {
        let csv = "1,2\n";
        let err = load_csv_reader(csv.as_bytes(), "t", &TargetColumn::Index(5)).unwrap_err();
        assert!(matches!(err, DataError::MissingTarget(_)));
    }

    #[test]
    fn empty_input_is_an_error() {
        let err = load_csv_reader("".as_bytes(), "t", &by_name("y")).unwrap_err();
        assert!(matches!(err, DataError::EmptyDataset));
    }

    #[test]
    fn header_only_input_is_an_error() {
        let err = load_csv_reader("a,y\n".as_bytes(), "t", &by_name("y")).unwrap_err();
        assert!(matches!(err, DataError::EmptyDataset));
    }

    #[test]
    fn ragged_row_is_a_format_error() {
        let csv = "a,y\n1,2\n3\n";
        let err = load_csv_reader(csv.as_bytes(), "t", &by_name("y")).unwrap_err();
        assert!(matches!(err, DataError::Format { .. }));
    }

    #[test]
    fn non_finite_numerals_are_parse_errors() {
        let csv = "x,y\n1,inf\n";
        let err = load_csv_reader(csv.as_bytes(), "t", &by_name("y")).unwrap_err();
        assert!(matches!(err, DataError::Parse { row: 1, column: 1, .. }));
        let csv = "x,y\nNaN,2\n";
        let err = load_csv_reader(csv.as_bytes(), "t", &by_name("y")).unwrap_err();
        assert!(matches!(err, DataError::Parse { row: 1, column: 0, .. }));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = load_csv(Path::new("/nonexistent/nope.csv"), &by_name("y")).unwrap_err();
        assert!(matches!(err, DataError::Io { .. }));
    }

    #[test]
    fn target_column_parses_from_string() {
        assert_eq!("3".parse::<TargetColumn>().unwrap(), TargetColumn::Index(3));
        assert_eq!("y".parse::<TargetColumn>().unwrap(), by_name("y"));
    }

    #[test]
    fn round_trip_through_write_xy_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let ds = Dataset::new(
            "roundtrip",
            vec![
                Instance { features: vec![1.5], target: 2.5 },
                Instance { features: vec![3.25], target: -4.0 },
            ],
        );
        write_xy_csv(&path, &ds).unwrap();
        let loaded = load_csv(&path, &by_name("y")).unwrap();
        assert_eq!(loaded.instances, ds.instances);
    }
}
