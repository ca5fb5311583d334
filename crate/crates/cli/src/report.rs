//! Machine-readable reports. Reals are written with 9 significant digits and
//! keys in declaration order, so identical inputs give byte-identical JSON.

use benford_forensics::sensitivity::TrimEnd;
use benford_forensics::{
    Conclusion, DigitPosition, ExclusionCounts, Summary, Verdict, VerdictWarning,
};
use serde::{Serialize, Serializer};

use crate::input::ColumnKind;

pub const TOOL_VERSION: &str = concat!("benford ", env!("CARGO_PKG_VERSION"));

/// Round to 9 significant digits; non-finite values pass through (and
/// serialize as `null`).
pub fn sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

fn ser_sig9<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(sig9(*x))
}

fn ser_sig9_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&sig9(*v)),
        None => s.serialize_none(),
    }
}

fn ser_sig9_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&x| sig9(x)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptiveBlock {
    pub n: usize,
    #[serde(serialize_with = "ser_sig9")]
    pub mean: f64,
    #[serde(serialize_with = "ser_sig9")]
    pub standard_error: f64,
    #[serde(serialize_with = "ser_sig9")]
    pub median: f64,
    #[serde(serialize_with = "ser_sig9_opt")]
    pub mode: Option<f64>,
    #[serde(serialize_with = "ser_sig9")]
    pub standard_deviation: f64,
    #[serde(serialize_with = "ser_sig9_opt")]
    pub kurtosis: Option<f64>,
    #[serde(serialize_with = "ser_sig9_opt")]
    pub skewness: Option<f64>,
    #[serde(serialize_with = "ser_sig9")]
    pub range: f64,
    #[serde(serialize_with = "ser_sig9")]
    pub min: f64,
    #[serde(serialize_with = "ser_sig9")]
    pub max: f64,
    #[serde(serialize_with = "ser_sig9_opt")]
    pub coefficient_of_variation: Option<f64>,
}

impl From<&Summary> for DescriptiveBlock {
    fn from(s: &Summary) -> Self {
        DescriptiveBlock {
            n: s.n,
            mean: s.mean,
            standard_error: s.standard_error,
            median: s.median,
            mode: s.mode,
            standard_deviation: s.standard_deviation,
            kurtosis: s.kurtosis,
            skewness: s.skewness,
            range: s.range,
            min: s.min,
            max: s.max,
            coefficient_of_variation: s.coefficient_of_variation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareBlock {
    #[serde(serialize_with = "ser_sig9")]
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    #[serde(serialize_with = "ser_sig9")]
    pub critical_value: f64,
    #[serde(serialize_with = "ser_sig9")]
    pub alpha: f64,
    #[serde(serialize_with = "ser_sig9")]
    pub p_value: f64,
    pub reject_null: bool,
}

/// Expected and observed digit distribution at one position with its test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositionBlock {
    pub position: DigitPosition,
    pub digits: Vec<u8>,
    #[serde(serialize_with = "ser_sig9_vec")]
    pub expected: Vec<f64>,
    #[serde(serialize_with = "ser_sig9_vec")]
    pub observed: Vec<f64>,
    pub observed_counts: Vec<u64>,
    pub n_included: usize,
    pub n_excluded: usize,
    pub exclusions: ExclusionCounts,
    pub chi_square: ChiSquareBlock,
    pub conclusion: Conclusion,
    pub warnings: Vec<VerdictWarning>,
}

impl From<&Verdict> for PositionBlock {
    fn from(v: &Verdict) -> Self {
        let r = &v.result;
        PositionBlock {
            position: v.position,
            digits: v.position.domain().collect(),
            expected: v.expectation.probs().to_vec(),
            observed: v.table.relative_frequencies(),
            observed_counts: v.table.observed().to_vec(),
            n_included: v.table.n_included(),
            n_excluded: v.table.n_excluded(),
            exclusions: v.table.exclusions(),
            chi_square: ChiSquareBlock {
                statistic: r.statistic,
                degrees_of_freedom: r.degrees_of_freedom,
                critical_value: r.critical_value,
                alpha: r.alpha,
                p_value: r.p_value,
                reject_null: r.reject_null,
            },
            conclusion: v.conclusion,
            warnings: v.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformityReport {
    pub tool_version: &'static str,
    pub dataset_id: String,
    pub column: ColumnKind,
    pub dataset_warnings: Vec<String>,
    pub descriptive: DescriptiveBlock,
    pub positions: Vec<PositionBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientOfVariationPair {
    #[serde(serialize_with = "ser_sig9_opt")]
    pub count_a1: Option<f64>,
    #[serde(serialize_with = "ser_sig9_opt")]
    pub count_a2: Option<f64>,
}

/// Both count columns of a paired dataset side by side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub tool_version: &'static str,
    pub dataset_id: String,
    pub n_records: usize,
    pub collection_window: [String; 2],
    pub dataset_warnings: Vec<String>,
    pub coefficient_of_variation: CoefficientOfVariationPair,
    pub count_a1: ColumnBlock,
    pub count_a2: ColumnBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnBlock {
    pub descriptive: DescriptiveBlock,
    pub positions: Vec<PositionBlock>,
}

/// A trimmed or original value, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ValueOut {
    Count(u64),
    Real(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrimRowBlock {
    pub end: TrimEnd,
    #[serde(serialize_with = "ser_sig9")]
    pub fraction: f64,
    pub removed_count: usize,
    pub kept_count: usize,
    pub removed_values: Vec<ValueOut>,
    pub result: PositionBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrimSweepOut {
    pub tool_version: &'static str,
    pub dataset_id: String,
    pub column: ColumnKind,
    pub n: usize,
    pub baseline: PositionBlock,
    pub rows: Vec<TrimRowBlock>,
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}
