use std::fmt::Write as _;
use std::path::PathBuf;

use benford_forensics::datagen::{generate, GeneratorSpec};
use benford_forensics::ingest::LoadOptions;
use benford_forensics::sensitivity::TrimEnd;
use benford_forensics::{
    conformity_test, descriptive_summary, trim_sweep, DigitPosition, Summary, Verdict,
};

use crate::error::{CliError, Result};
use crate::input::{self, ColumnKind, ColumnValues};
use crate::report::{
    CoefficientOfVariationPair, ColumnBlock, CompareReport, ConformityReport, DescriptiveBlock,
    PositionBlock, TrimRowBlock, TrimSweepOut, ValueOut, TOOL_VERSION,
};

fn verdict(values: &ColumnValues, position: DigitPosition, alpha: f64) -> Result<Verdict> {
    let v = input::with_values(
        values,
        |v| conformity_test(v, position, alpha),
        |v| conformity_test(v, position, alpha),
    )?;
    Ok(v)
}

fn summary(values: &ColumnValues) -> Result<Summary> {
    Ok(descriptive_summary(&values.as_reals())?)
}

fn column_block(values: &ColumnValues, positions: &[DigitPosition], alpha: f64) -> Result<ColumnBlock> {
    let descriptive = DescriptiveBlock::from(&summary(values)?);
    let positions = positions
        .iter()
        .map(|&k| verdict(values, k, alpha).map(|v| PositionBlock::from(&v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ColumnBlock { descriptive, positions })
}

pub fn analyze(
    file: &PathBuf,
    column: ColumnKind,
    positions: &[DigitPosition],
    alpha: f64,
    options: LoadOptions,
) -> Result<ConformityReport> {
    let alpha = input::check_alpha(alpha)?;
    let loaded = input::load_column(file, column, options)?;
    let block = column_block(&loaded.values, positions, alpha)?;
    Ok(ConformityReport {
        tool_version: TOOL_VERSION,
        dataset_id: loaded.dataset_id,
        column: loaded.kind,
        dataset_warnings: loaded.warnings,
        descriptive: block.descriptive,
        positions: block.positions,
    })
}

pub fn compare(
    file: &PathBuf,
    positions: &[DigitPosition],
    alpha: f64,
    options: LoadOptions,
) -> Result<CompareReport> {
    let alpha = input::check_alpha(alpha)?;
    let dataset = input::load_paired(file, options)?;
    let a1 = column_block(&ColumnValues::Counts(dataset.counts_a1()), positions, alpha)?;
    let a2 = column_block(&ColumnValues::Counts(dataset.counts_a2()), positions, alpha)?;
    let (start, end) = dataset.collection_window;
    Ok(CompareReport {
        tool_version: TOOL_VERSION,
        dataset_id: file.display().to_string(),
        n_records: dataset.len(),
        collection_window: [start.to_rfc3339(), end.to_rfc3339()],
        dataset_warnings: dataset.warnings.iter().map(ToString::to_string).collect(),
        coefficient_of_variation: CoefficientOfVariationPair {
            count_a1: a1.descriptive.coefficient_of_variation,
            count_a2: a2.descriptive.coefficient_of_variation,
        },
        count_a1: a1,
        count_a2: a2,
    })
}

pub fn trim_sweep_report(
    file: &PathBuf,
    column: ColumnKind,
    fractions: &[f64],
    ends: &[TrimEnd],
    position: DigitPosition,
    alpha: f64,
    options: LoadOptions,
) -> Result<TrimSweepOut> {
    let alpha = input::check_alpha(alpha)?;
    let loaded = input::load_column(file, column, options)?;
    let n = loaded.values.len();
    let (baseline, rows) = match &loaded.values {
        ColumnValues::Counts(v) => {
            let r = trim_sweep(v, fractions, ends, position, alpha)?;
            let rows = r
                .rows
                .iter()
                .map(|row| TrimRowBlock {
                    end: row.spec.end(),
                    fraction: row.spec.fraction(),
                    removed_count: row.removed_count,
                    kept_count: n - row.removed_count,
                    removed_values: row.removed_values.iter().map(|&c| ValueOut::Count(c)).collect(),
                    result: PositionBlock::from(&row.verdict),
                })
                .collect();
            (PositionBlock::from(&r.baseline), rows)
        }
        ColumnValues::Reals(v) => {
            let r = trim_sweep(v, fractions, ends, position, alpha)?;
            let rows = r
                .rows
                .iter()
                .map(|row| TrimRowBlock {
                    end: row.spec.end(),
                    fraction: row.spec.fraction(),
                    removed_count: row.removed_count,
                    kept_count: n - row.removed_count,
                    removed_values: row.removed_values.iter().map(|&x| ValueOut::Real(x)).collect(),
                    result: PositionBlock::from(&row.verdict),
                })
                .collect();
            (PositionBlock::from(&r.baseline), rows)
        }
    };
    Ok(TrimSweepOut {
        tool_version: TOOL_VERSION,
        dataset_id: loaded.dataset_id,
        column: loaded.kind,
        n,
        baseline,
        rows,
    })
}

/// Single-column CSV with header `count`; values in shortest round-trip form.
pub fn gen_csv(spec: &GeneratorSpec) -> Result<String> {
    let sample = generate(spec)?;
    let mut out = String::from("count\n");
    for x in sample {
        writeln!(out, "{x}").expect("write to string");
    }
    Ok(out)
}

/// `digit,expected_rel_freq,observed_rel_freq` rows with 6 decimals.
pub fn plot_data(
    file: &PathBuf,
    column: ColumnKind,
    position: DigitPosition,
    alpha: f64,
    options: LoadOptions,
) -> Result<String> {
    let alpha = input::check_alpha(alpha)?;
    let loaded = input::load_column(file, column, options)?;
    let block = PositionBlock::from(&verdict(&loaded.values, position, alpha)?);
    let mut out = String::from("digit,expected_rel_freq,observed_rel_freq\n");
    for ((d, e), o) in block.digits.iter().zip(&block.expected).zip(&block.observed) {
        writeln!(out, "{d},{e:.6},{o:.6}").expect("write to string");
    }
    Ok(out)
}

pub fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
