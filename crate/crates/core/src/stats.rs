//! Descriptive statistics panel and chi-square conformity testing.

use std::cmp::Ordering;

use serde::Serialize;

use crate::digit::{BenfordExpectation, DigitFrequencyTable, DigitPosition, SignificantDigits};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special;

/// Minimum mean expected count per digit category before a verdict carries
/// a small-sample warning.
pub const ADEQUATE_EXPECTED_PER_CATEGORY: usize = 5;

/// Summary panel in the layout of a spreadsheet "Descriptive Statistics" tool.
///
/// Standard deviation uses the `n - 1` denominator. Skewness and kurtosis are
/// the bias-corrected sample estimators (kurtosis is excess kurtosis); they are
/// absent when `n` is too small or the data are constant. The mode is the
/// smallest of the most frequent values and is absent when all values are
/// distinct.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptiveSummary<T> {
    pub n: usize,
    pub mean: T,
    pub standard_error: T,
    pub median: T,
    pub mode: Option<T>,
    pub standard_deviation: T,
    pub kurtosis: Option<T>,
    pub skewness: Option<T>,
    pub range: T,
    pub min: T,
    pub max: T,
    pub coefficient_of_variation: Option<T>,
}

/// Standard error of the mean: `sd / sqrt(n)`.
pub fn standard_error<T: Real>(standard_deviation: T, n: usize) -> T {
    standard_deviation / T::from_count(n).sqrt()
}

/// `sd / mean`, absent when the mean is zero.
pub fn coefficient_of_variation<T: Real>(standard_deviation: T, mean: T) -> Option<T> {
    (mean != T::zero()).then(|| standard_deviation / mean)
}

pub fn descriptive_summary<T: Real>(values: &[T]) -> Result<DescriptiveSummary<T>> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewValues { needed: 2, got: n });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let min = sorted[0];
    let max = sorted[n - 1];
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / T::lit(2.0)
    };

    let nf = T::from_count(n);
    let mean = values.iter().copied().sum::<T>() / nf;
    let sum_sq: T = values.iter().map(|&x| (x - mean).powi(2)).sum();
    let sd = (sum_sq / (nf - T::one())).sqrt();

    let standardized_moment = |power: i32| -> T {
        values.iter().map(|&x| ((x - mean) / sd).powi(power)).sum()
    };
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let skewness = (n >= 3 && sd > T::zero())
        .then(|| nf / ((nf - one) * (nf - two)) * standardized_moment(3));
    let kurtosis = (n >= 4 && sd > T::zero()).then(|| {
        let lead = nf * (nf + one) / ((nf - one) * (nf - two) * (nf - three));
        let bias = three * (nf - one).powi(2) / ((nf - two) * (nf - three));
        lead * standardized_moment(4) - bias
    });

    Ok(DescriptiveSummary {
        n,
        mean,
        standard_error: standard_error(sd, n),
        median,
        mode: mode_of_sorted(&sorted),
        standard_deviation: sd,
        kurtosis,
        skewness,
        range: max - min,
        min,
        max,
        coefficient_of_variation: coefficient_of_variation(sd, mean),
    })
}

fn mode_of_sorted<T: Real>(sorted: &[T]) -> Option<T> {
    let mut best: Option<(T, usize)> = None;
    let mut i = 0;
    while i < sorted.len() {
        let run = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        // Strictly greater keeps the smallest value on ties.
        if run > 1 && best.map_or(true, |(_, n)| run > n) {
            best = Some((sorted[i], run));
        }
        i += run;
    }
    best.map(|(v, _)| v)
}

/// Chi-square goodness-of-fit outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareResult<T> {
    pub statistic: T,
    pub degrees_of_freedom: usize,
    pub critical_value: T,
    pub alpha: T,
    pub p_value: T,
    pub reject_null: bool,
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Pearson statistic of `table` against `expected` (probabilities ordered by
/// digit over the table's domain), with the verdict at `alpha`.
///
/// Expected counts are `n_included * p` without rounding. A category with
/// zero expected and zero observed count contributes nothing; zero expected
/// with a positive observed count makes the statistic infinite.
pub fn chi_square_statistic<T: Real>(
    table: &DigitFrequencyTable,
    expected: &[T],
    alpha: T,
) -> Result<ChiSquareResult<T>> {
    check_alpha(alpha)?;
    if table.n_included() == 0 {
        return Err(Error::NoIncludedValues {
            position: table.position().get(),
            excluded: table.n_excluded(),
        });
    }
    if expected.len() != table.observed().len() {
        return Err(Error::DomainMismatch {
            expected: expected.len(),
            observed: table.observed().len(),
        });
    }
    if expected.iter().any(|p| !p.is_finite() || *p < T::zero()) {
        return Err(Error::InvalidExpectation(
            "probabilities must be finite and non-negative".into(),
        ));
    }
    let total: T = expected.iter().copied().sum();
    if (total - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::InvalidExpectation(format!(
            "probabilities sum to {total}, not 1"
        )));
    }

    let n = T::from_count(table.n_included());
    let statistic = table
        .observed()
        .iter()
        .zip(expected)
        .map(|(&observed, &p)| {
            let observed = T::from_u64(observed).expect("count");
            let expected = n * p;
            if expected == T::zero() {
                if observed == T::zero() {
                    T::zero()
                } else {
                    T::infinity()
                }
            } else {
                (observed - expected).powi(2) / expected
            }
        })
        .sum::<T>();

    let degrees_of_freedom = expected.len() - 1;
    let critical_value = chi_square_critical(degrees_of_freedom, alpha)?;
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom,
        critical_value,
        alpha,
        p_value: chi_square_p_value(statistic, degrees_of_freedom),
        reject_null: statistic > critical_value,
    })
}

/// Upper-tail probability of `statistic` under chi-square with `df` degrees
/// of freedom.
pub fn chi_square_p_value<T: Real>(statistic: T, df: usize) -> T {
    if statistic.is_infinite() {
        return T::zero();
    }
    special::chi_square_sf(statistic, df).max(T::zero()).min(T::one())
}

/// The `1 - alpha` quantile of chi-square with `df` degrees of freedom,
/// by inverting the regularized incomplete gamma function.
pub fn chi_square_critical<T: Real>(df: usize, alpha: T) -> Result<T> {
    if df == 0 {
        return Err(Error::InvalidDegreesOfFreedom(df));
    }
    check_alpha(alpha)?;
    Ok(special::chi_square_upper_quantile(alpha, df))
}

const TABLE_ALPHAS: [f64; 3] = [0.10, 0.05, 0.01];

/// Reference critical values for df = 1..=30, rows ordered as `TABLE_ALPHAS`.
const CRITICAL_TABLE: [[f64; 30]; 3] = [
    [
        2.705543, 4.605170, 6.251389, 7.779440, 9.236357, 10.644641, 12.017037, 13.361566,
        14.683657, 15.987179, 17.275009, 18.549348, 19.811929, 21.064144, 22.307130, 23.541829,
        24.769035, 25.989423, 27.203571, 28.411981, 29.615089, 30.813282, 32.006900, 33.196244,
        34.381587, 35.563171, 36.741217, 37.915923, 39.087470, 40.256024,
    ],
    [
        3.841459, 5.991465, 7.814728, 9.487729, 11.070498, 12.591587, 14.067140, 15.507313,
        16.918978, 18.307038, 19.675138, 21.026070, 22.362032, 23.684791, 24.995790, 26.296228,
        27.587112, 28.869299, 30.143527, 31.410433, 32.670573, 33.924438, 35.172462, 36.415029,
        37.652484, 38.885139, 40.113272, 41.337138, 42.556968, 43.772972,
    ],
    [
        6.634897, 9.210340, 11.344867, 13.276704, 15.086272, 16.811894, 18.475307, 20.090235,
        21.665994, 23.209251, 24.724970, 26.216967, 27.688250, 29.141238, 30.577914, 31.999927,
        33.408664, 34.805306, 36.190869, 37.566235, 38.932173, 40.289360, 41.638398, 42.979820,
        44.314105, 45.641683, 46.962942, 48.278236, 49.587884, 50.892181,
    ],
];

/// Tabulated critical value (six decimals), when `df` is in 1..=30 and
/// `alpha` is one of 0.10, 0.05, 0.01.
pub fn tabulated_critical(df: usize, alpha: f64) -> Option<f64> {
    let row = TABLE_ALPHAS.iter().position(|&a| a == alpha)?;
    CRITICAL_TABLE[row].get(df.checked_sub(1)?).copied()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Conclusion {
    Conforms,
    Deviates,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictWarning {
    /// Fewer included values than `ADEQUATE_EXPECTED_PER_CATEGORY` per category.
    SmallSample { n_included: usize, recommended: usize },
}

/// Outcome of testing one digit position against the Benford law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformityVerdict<T> {
    pub position: DigitPosition,
    pub table: DigitFrequencyTable,
    pub expectation: BenfordExpectation<T>,
    pub result: ChiSquareResult<T>,
    pub conclusion: Conclusion,
    pub warnings: Vec<VerdictWarning>,
}

impl<T: Real> ConformityVerdict<T> {
    /// Test an already tabulated position against its Benford expectation.
    pub fn from_table(table: DigitFrequencyTable, alpha: T) -> Result<Self> {
        let position = table.position();
        let expectation = BenfordExpectation::benford(position);
        let result = chi_square_statistic(&table, expectation.probs(), alpha)?;
        let recommended = ADEQUATE_EXPECTED_PER_CATEGORY * position.domain_len();
        let mut warnings = Vec::new();
        if table.n_included() < recommended {
            warnings.push(VerdictWarning::SmallSample {
                n_included: table.n_included(),
                recommended,
            });
        }
        let conclusion = if result.reject_null {
            Conclusion::Deviates
        } else {
            Conclusion::Conforms
        };
        Ok(ConformityVerdict {
            position,
            table,
            expectation,
            result,
            conclusion,
            warnings,
        })
    }

    pub fn conforms(&self) -> bool {
        self.conclusion == Conclusion::Conforms
    }
}

/// Tabulate `values` at `position` and test against the Benford law at `alpha`.
pub fn conformity_test<V: SignificantDigits, T: Real>(
    values: &[V],
    position: DigitPosition,
    alpha: T,
) -> Result<ConformityVerdict<T>> {
    check_alpha(alpha)?;
    let table = DigitFrequencyTable::from_values(values, position)?;
    ConformityVerdict::from_table(table, alpha)
}
