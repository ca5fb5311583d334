//! Significant-digit law analysis for count data.
//!
//! The crate computes Benford expectations for any significant-digit
//! position, tabulates observed digits with explicit exclusion bookkeeping,
//! runs chi-square conformity tests, produces a descriptive-statistics panel,
//! re-tests conformity after value-order trimming, and ships seeded synthetic
//! generators used as oracles.
//!
//! The numeric core is generic over [`Real`] (implemented for `f32` and
//! `f64`). The aliases at the crate root fix the scalar to `f64`, which is
//! what the command-line tool and most callers want.

pub mod datagen;
pub mod digit;
pub mod error;
pub mod ingest;
pub mod scalar;
pub mod sensitivity;
pub mod special;
pub mod stats;

pub use digit::{
    benford_expected, benford_prob, digit_frequency_table, BenfordExpectation, Digit,
    DigitFrequencyTable, DigitPosition, Exclusion, ExclusionCounts, SignificantDigits,
};
pub use error::{Error, Result};
pub use scalar::Real;
pub use sensitivity::{trim, trim_sweep, TrimEnd, TrimRow, TrimSpec, TrimSweepReport};
pub use stats::{
    chi_square_critical, chi_square_p_value, chi_square_statistic, conformity_test,
    descriptive_summary, ChiSquareResult, Conclusion, ConformityVerdict, DescriptiveSummary,
    VerdictWarning,
};

/// Benford expectation over `f64`.
pub type Expectation = BenfordExpectation<f64>;
/// Chi-square test outcome over `f64`.
pub type ChiSquare = ChiSquareResult<f64>;
/// Conformity verdict over `f64`.
pub type Verdict = ConformityVerdict<f64>;
/// Descriptive panel over `f64`.
pub type Summary = DescriptiveSummary<f64>;
/// Trim sweep over integer counts with `f64` statistics.
pub type CountSweep = TrimSweepReport<u64, f64>;

/// Default significance level for conformity tests.
pub const DEFAULT_ALPHA: f64 = 0.05;
