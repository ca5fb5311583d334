//! Loading the column under analysis from a paired dataset or a
//! single-column `count` file.

use std::fmt;
use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use benford_forensics::ingest::{self, DataFormat, LoadOptions, PairedDataset};
use benford_forensics::sensitivity::TrimEnd;
use benford_forensics::{DigitPosition, Error as CoreError};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    CountA1,
    CountA2,
    Generic,
}

impl FromStr for ColumnKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "count_a1" | "a1" => Ok(ColumnKind::CountA1),
            "count_a2" | "a2" => Ok(ColumnKind::CountA2),
            "generic" | "count" => Ok(ColumnKind::Generic),
            other => Err(format!(
                "unknown column {other:?} (expected count_a1, count_a2 or generic)"
            )),
        }
    }
}

impl fmt::Display for ColumnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColumnKind::CountA1 => "count_a1",
            ColumnKind::CountA2 => "count_a2",
            ColumnKind::Generic => "generic",
        })
    }
}

/// Values of one column: exact integer counts when every entry is an
/// integer, reals otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnValues {
    Counts(Vec<u64>),
    Reals(Vec<f64>),
}

impl ColumnValues {
    pub fn len(&self) -> usize {
        match self {
            ColumnValues::Counts(v) => v.len(),
            ColumnValues::Reals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_reals(&self) -> Vec<f64> {
        match self {
            ColumnValues::Counts(v) => v.iter().map(|&c| c as f64).collect(),
            ColumnValues::Reals(v) => v.clone(),
        }
    }
}

/// A loaded column with the provenance the reports echo.
#[derive(Debug, Clone)]
pub struct LoadedColumn {
    pub dataset_id: String,
    pub kind: ColumnKind,
    pub values: ColumnValues,
    pub warnings: Vec<String>,
}

pub fn load_paired(path: &Path, options: LoadOptions) -> Result<PairedDataset> {
    Ok(ingest::load_dataset(path, DataFormat::from_path(path), options)?)
}

pub fn load_column(path: &Path, kind: ColumnKind, options: LoadOptions) -> Result<LoadedColumn> {
    let dataset_id = path.display().to_string();
    match kind {
        ColumnKind::CountA1 | ColumnKind::CountA2 => {
            let dataset = load_paired(path, options)?;
            let counts = if kind == ColumnKind::CountA1 {
                dataset.counts_a1()
            } else {
                dataset.counts_a2()
            };
            Ok(LoadedColumn {
                dataset_id,
                kind,
                values: ColumnValues::Counts(counts),
                warnings: dataset.warnings.iter().map(ToString::to_string).collect(),
            })
        }
        ColumnKind::Generic => Ok(LoadedColumn {
            dataset_id,
            kind,
            values: read_generic(path, options)?,
            warnings: Vec::new(),
        }),
    }
}

/// Read a single-column CSV with header `count`.
pub fn read_generic(path: &Path, options: LoadOptions) -> Result<ColumnValues> {
    let file = File::open(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| CliError::Data(e.to_string()))?
        .clone();
    if headers.len() != 1 || headers[0].trim() != "count" {
        return Err(CliError::Data(format!(
            "{}: expected a single column with header \"count\"",
            path.display()
        )));
    }
    let mut texts = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| CliError::Data(e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        texts.push((line, row[0].trim().to_string()));
    }
    if texts.is_empty() {
        return Err(CliError::Data(format!("{}: no values", path.display())));
    }
    let counts: std::result::Result<Vec<u64>, _> = texts
        .iter()
        .map(|(_, t)| ingest::parse_count(t, options.thousands_separators))
        .collect();
    if let Ok(counts) = counts {
        return Ok(ColumnValues::Counts(counts));
    }
    texts
        .iter()
        .map(|(line, t)| match t.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(CliError::Data(format!("row {line}, column count: {t:?} is not a number"))),
        })
        .collect::<Result<Vec<_>>>()
        .map(ColumnValues::Reals)
}

/// Parse `"1,2"` into digit positions.
pub fn parse_positions(text: &str) -> Result<Vec<DigitPosition>> {
    let positions = text
        .split(',')
        .map(|p| {
            let k: u32 = p
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid digit position {p:?}")))?;
            DigitPosition::new(k).map_err(CliError::from)
        })
        .collect::<Result<Vec<_>>>()?;
    if positions.is_empty() {
        return Err(CliError::Usage("no digit positions given".into()));
    }
    Ok(positions)
}

pub fn parse_fractions(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("invalid fraction {f:?}")))
        })
        .collect()
}

pub fn parse_ends(text: &str) -> Result<Vec<TrimEnd>> {
    text.split(',')
        .map(|e| e.trim().parse::<TrimEnd>().map_err(CliError::from))
        .collect()
}

pub fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(CoreError::InvalidAlpha(alpha).into())
    }
}

/// Dispatch a generic operation over the column's concrete value type.
pub fn with_values<R>(
    values: &ColumnValues,
    counts: impl FnOnce(&[u64]) -> R,
    reals: impl FnOnce(&[f64]) -> R,
) -> R {
    match values {
        ColumnValues::Counts(v) => counts(v),
        ColumnValues::Reals(v) => reals(v),
    }
}

