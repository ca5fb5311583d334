//! Significant-digit extraction and the general k-th digit Benford law.

use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One-based position of a significant digit (1 = leading digit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DigitPosition(u32);

impl DigitPosition {
    pub const FIRST: DigitPosition = DigitPosition(1);
    pub const SECOND: DigitPosition = DigitPosition(2);

    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPosition(k));
        }
        Ok(DigitPosition(k))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Digits that can occur at this position: 1..=9 for the leading digit,
    /// 0..=9 everywhere else.
    pub fn domain(self) -> RangeInclusive<u8> {
        if self.0 == 1 {
            1..=9
        } else {
            0..=9
        }
    }

    pub fn domain_len(self) -> usize {
        if self.0 == 1 {
            9
        } else {
            10
        }
    }

    fn lowest_digit(self) -> u8 {
        *self.domain().start()
    }

    fn index_of(self, digit: u8) -> Option<usize> {
        self.domain()
            .contains(&digit)
            .then(|| usize::from(digit - self.lowest_digit()))
    }
}

impl fmt::Display for DigitPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A decimal digit value valid for some position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Digit(u8);

impl Digit {
    pub fn new(value: u8, position: DigitPosition) -> Result<Self> {
        if position.domain().contains(&value) {
            Ok(Digit(value))
        } else {
            Err(Error::InvalidDigit {
                digit: value,
                position: position.get(),
            })
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

/// Why a value contributed no digit at the requested position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exclusion {
    /// Zero has no significant digits.
    ZeroValue,
    /// The value has fewer significant digits than the requested position.
    TooFewDigits,
    /// Negative, NaN or infinite input.
    Invalid,
}

/// Per-reason exclusion tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ExclusionCounts {
    pub zero_value: usize,
    pub too_few_digits: usize,
    pub invalid: usize,
}

impl ExclusionCounts {
    pub fn total(&self) -> usize {
        self.zero_value + self.too_few_digits + self.invalid
    }

    fn record(&mut self, reason: Exclusion) {
        match reason {
            Exclusion::ZeroValue => self.zero_value += 1,
            Exclusion::TooFewDigits => self.too_few_digits += 1,
            Exclusion::Invalid => self.invalid += 1,
        }
    }
}

/// Values whose significant digits can be read off.
///
/// Integers use their exact decimal expansion, so `10` has second digit `0`
/// and `7` has no second digit. Reals are written with
/// [`Real::SIGNIFICANT_DECIMALS`] significant digits (round-half-even) before
/// reading, which suppresses binary representation noise such as
/// `0.1 * 3 = 0.30000000000000004`. An integral real has at least as many
/// digits as its integer part.
pub trait SignificantDigits {
    fn significant_digit(&self, position: DigitPosition) -> std::result::Result<Digit, Exclusion>;
}

macro_rules! impl_unsigned_digits {
    ($($t:ty)*) => ($(
        impl SignificantDigits for $t {
            fn significant_digit(
                &self,
                position: DigitPosition,
            ) -> std::result::Result<Digit, Exclusion> {
                unsigned_digit(u128::from(*self), position)
            }
        }
    )*)
}

impl_unsigned_digits!(u8 u16 u32 u64 u128);

impl SignificantDigits for usize {
    fn significant_digit(&self, position: DigitPosition) -> std::result::Result<Digit, Exclusion> {
        unsigned_digit(*self as u128, position)
    }
}

impl SignificantDigits for f64 {
    fn significant_digit(&self, position: DigitPosition) -> std::result::Result<Digit, Exclusion> {
        real_digit(*self, <f64 as Real>::SIGNIFICANT_DECIMALS, position)
    }
}

impl SignificantDigits for f32 {
    fn significant_digit(&self, position: DigitPosition) -> std::result::Result<Digit, Exclusion> {
        real_digit(f64::from(*self), <f32 as Real>::SIGNIFICANT_DECIMALS, position)
    }
}

impl<V: SignificantDigits + ?Sized> SignificantDigits for &V {
    fn significant_digit(&self, position: DigitPosition) -> std::result::Result<Digit, Exclusion> {
        (**self).significant_digit(position)
    }
}

fn unsigned_digit(value: u128, position: DigitPosition) -> std::result::Result<Digit, Exclusion> {
    let Some(magnitude) = value.checked_ilog10() else {
        return Err(Exclusion::ZeroValue);
    };
    let n_digits = magnitude + 1;
    let k = position.get();
    if k > n_digits {
        return Err(Exclusion::TooFewDigits);
    }
    let digit = (value / 10u128.pow(n_digits - k)) % 10;
    Ok(Digit(digit as u8))
}

fn real_digit(
    value: f64,
    significant: usize,
    position: DigitPosition,
) -> std::result::Result<Digit, Exclusion> {
    if !value.is_finite() || value < 0.0 {
        return Err(Exclusion::Invalid);
    }
    if value == 0.0 {
        return Err(Exclusion::ZeroValue);
    }
    // `{:e}` formatting rounds the exact binary value half-to-even.
    let formatted = format!("{:.*e}", significant - 1, value);
    let (mantissa, exponent) = formatted
        .split_once('e')
        .expect("scientific formatting has an exponent");
    let exponent: i64 = exponent.parse().expect("integer exponent");
    let digits: Vec<u8> = mantissa
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();
    let nonzero_len = digits.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1);
    let integer_len = if exponent >= 0 { exponent as usize + 1 } else { 0 };
    let available = nonzero_len.max(integer_len);
    let k = position.get() as usize;
    if k > available {
        return Err(Exclusion::TooFewDigits);
    }
    Ok(Digit(digits.get(k - 1).copied().unwrap_or(0)))
}

/// The `k`-th significant digit of a count, or `None` when the count is zero
/// or has fewer than `k` digits.
pub fn significant_digit(value: u64, position: DigitPosition) -> Option<Digit> {
    value.significant_digit(position).ok()
}

/// Benford probability that the significant digit at `position` equals `digit`.
///
/// Leading digit: `log10(1 + 1/d)`. Position `k >= 2`:
/// `sum_{j = 10^(k-2)}^{10^(k-1) - 1} log10(1 + 1/(10 j + d))`.
pub fn benford_prob<T: Real>(digit: u8, position: DigitPosition) -> Result<T> {
    let d = Digit::new(digit, position)?;
    Ok(law_term_sum(position, d.value()))
}

fn log10_1p_inv<T: Real>(x: T) -> T {
    x.recip().ln_1p() / T::lit(std::f64::consts::LN_10)
}

/// Number of leading summands evaluated term by term before switching to
/// Euler-Maclaurin for the tail.
const DIRECT_TERMS: u64 = 2000;

fn law_term_sum<T: Real>(position: DigitPosition, digit: u8) -> T {
    let d = T::from_u8(digit).expect("digit");
    if position.get() == 1 {
        return log10_1p_inv(d);
    }
    let k = position.get();
    // Beyond u64 range the law is indistinguishable from uniform in any float.
    let (lo, hi) = match (10u64.checked_pow(k - 2), 10u64.checked_pow(k - 1)) {
        (Some(lo), Some(p)) => (lo, p - 1),
        _ => return T::lit(0.1),
    };
    let ten = T::lit(10.0);
    let term = |j: T| log10_1p_inv(ten * j + d);

    let direct_hi = hi.min(lo + DIRECT_TERMS - 1);
    let mut sum = T::zero();
    let mut carry = T::zero();
    for j in lo..=direct_hi {
        let y = term(T::from_u64(j).expect("index")) - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    if direct_hi == hi {
        return sum;
    }

    // Tail over j in [a, b]: integral plus endpoint and first two
    // Bernoulli corrections. f(x) = log10(1 + 1/u), u = 10 x + d.
    let a = T::from_u64(direct_hi + 1).expect("index");
    let b = T::from_u64(hi).expect("index");
    let ln10 = T::lit(std::f64::consts::LN_10);
    // Antiderivative of ln(1 + 1/u) du is ln(u + 1) + u ln(1 + 1/u).
    let antiderivative = |x: T| {
        let u = ten * x + d;
        ((u + T::one()).ln() + u * u.recip().ln_1p()) / (ten * ln10)
    };
    // f'(x) = -10 / (ln10 u (u + 1)), f'''(x) = -10^3 (6u^2 + 6u + 2) / (ln10 u^3 (u+1)^3)
    let d1 = |x: T| {
        let u = ten * x + d;
        -ten / (ln10 * u * (u + T::one()))
    };
    let d3 = |x: T| {
        let u = ten * x + d;
        let v = u + T::one();
        let poly = T::lit(6.0) * u * u + T::lit(6.0) * u + T::lit(2.0);
        -T::lit(1000.0) * poly / (ln10 * u.powi(3) * v.powi(3))
    };
    let integral = antiderivative(b) - antiderivative(a);
    let ends = (term(a) + term(b)) / T::lit(2.0);
    let b2 = (d1(b) - d1(a)) / T::lit(12.0);
    let b4 = -(d3(b) - d3(a)) / T::lit(720.0);
    sum + integral + ends + b2 + b4
}

/// Expected digit probabilities at one position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenfordExpectation<T> {
    position: DigitPosition,
    probs: Vec<T>,
}

impl<T: Real> BenfordExpectation<T> {
    /// The Benford law at `position`, computed from the closed form.
    pub fn benford(position: DigitPosition) -> Self {
        let probs = position
            .domain()
            .map(|d| law_term_sum(position, d))
            .collect();
        BenfordExpectation { position, probs }
    }

    /// Equal mass on every digit of the position's domain.
    pub fn uniform(position: DigitPosition) -> Self {
        let p = T::one() / T::from_count(position.domain_len());
        BenfordExpectation {
            position,
            probs: vec![p; position.domain_len()],
        }
    }

    /// A caller-supplied expectation, ordered by digit over the position's
    /// domain. Entries must lie in `[0, 1]` and sum to 1 within `1e-9`.
    pub fn custom(position: DigitPosition, probs: Vec<T>) -> Result<Self> {
        if probs.len() != position.domain_len() {
            return Err(Error::DomainMismatch {
                expected: probs.len(),
                observed: position.domain_len(),
            });
        }
        if probs
            .iter()
            .any(|p| !p.is_finite() || *p < T::zero() || *p > T::one())
        {
            return Err(Error::InvalidExpectation(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::lit(1e-9) {
            return Err(Error::InvalidExpectation(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(BenfordExpectation { position, probs })
    }

    pub fn position(&self) -> DigitPosition {
        self.position
    }

    /// Probabilities ordered by digit, starting at the domain's lowest digit.
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, digit: u8) -> Option<T> {
        self.position.index_of(digit).map(|i| self.probs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u8, T)> + '_ {
        self.position.domain().zip(self.probs.iter().copied())
    }

    /// Largest absolute distance from the uniform distribution on the domain.
    pub fn max_deviation_from_uniform(&self) -> T {
        let uniform = T::one() / T::from_count(self.probs.len());
        self.probs
            .iter()
            .map(|&p| (p - uniform).abs())
            .fold(T::zero(), T::max)
    }
}

/// Full Benford probability vector for `position`.
pub fn benford_expected<T: Real>(position: DigitPosition) -> BenfordExpectation<T> {
    BenfordExpectation::benford(position)
}

/// Observed digit counts at one position, with exclusion bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitFrequencyTable {
    position: DigitPosition,
    observed: Vec<u64>,
    n_included: usize,
    n_excluded: usize,
    excluded: ExclusionCounts,
}

impl DigitFrequencyTable {
    /// Tabulate the digit at `position` for every value.
    pub fn from_values<V: SignificantDigits>(values: &[V], position: DigitPosition) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut observed = vec![0u64; position.domain_len()];
        let mut excluded = ExclusionCounts::default();
        for value in values {
            match value.significant_digit(position) {
                Ok(d) => {
                    let i = position.index_of(d.value()).expect("extracted digit in domain");
                    observed[i] += 1;
                }
                Err(reason) => excluded.record(reason),
            }
        }
        let n_excluded = excluded.total();
        Ok(DigitFrequencyTable {
            position,
            observed,
            n_included: values.len() - n_excluded,
            n_excluded,
            excluded,
        })
    }

    /// A table from explicit counts ordered by digit, with no exclusions.
    pub fn from_counts(position: DigitPosition, observed: Vec<u64>) -> Result<Self> {
        if observed.len() != position.domain_len() {
            return Err(Error::DomainMismatch {
                expected: position.domain_len(),
                observed: observed.len(),
            });
        }
        let n_included = observed.iter().sum::<u64>() as usize;
        Ok(DigitFrequencyTable {
            position,
            observed,
            n_included,
            n_excluded: 0,
            excluded: ExclusionCounts::default(),
        })
    }

    pub fn position(&self) -> DigitPosition {
        self.position
    }

    /// Counts ordered by digit, starting at the domain's lowest digit.
    pub fn observed(&self) -> &[u64] {
        &self.observed
    }

    pub fn count(&self, digit: u8) -> u64 {
        self.position
            .index_of(digit)
            .map_or(0, |i| self.observed[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u8, u64)> + '_ {
        self.position.domain().zip(self.observed.iter().copied())
    }

    pub fn n_included(&self) -> usize {
        self.n_included
    }

    pub fn n_excluded(&self) -> usize {
        self.n_excluded
    }

    pub fn exclusions(&self) -> ExclusionCounts {
        self.excluded
    }

    /// Observed relative frequencies over the included values; all zero when
    /// nothing was included.
    pub fn relative_frequencies<T: Real>(&self) -> Vec<T> {
        if self.n_included == 0 {
            return vec![T::zero(); self.observed.len()];
        }
        let n = T::from_count(self.n_included);
        self.observed
            .iter()
            .map(|&c| T::from_u64(c).expect("count") / n)
            .collect()
    }
}

/// Observed digit counts at `position` for a non-empty collection.
pub fn digit_frequency_table<V: SignificantDigits>(
    values: &[V],
    position: DigitPosition,
) -> Result<DigitFrequencyTable> {
    DigitFrequencyTable::from_values(values, position)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(k: u32) -> DigitPosition {
        DigitPosition::new(k).unwrap()
    }

    /// Term-by-term summation, no tail approximation.
    fn brute_force(digit: u8, k: u32) -> f64 {
        let lo = 10u64.pow(k - 2);
        let hi = 10u64.pow(k - 1) - 1;
        (lo..=hi)
            .map(|j| (1.0 + 1.0 / (10.0 * j as f64 + f64::from(digit))).log10())
            .sum()
    }

    #[test]
    fn position_zero_is_rejected() {
        assert_eq!(DigitPosition::new(0), Err(Error::InvalidPosition(0)));
    }

    #[test]
    fn leading_zero_is_not_a_digit() {
        assert!(Digit::new(0, pos(1)).is_err());
        assert!(Digit::new(0, pos(2)).is_ok());
        assert!(Digit::new(10, pos(3)).is_err());
        assert!(matches!(
            benford_prob::<f64>(0, pos(1)),
            Err(Error::InvalidDigit { digit: 0, position: 1 })
        ));
    }

    #[test]
    fn first_digit_anchor_values() {
        let p1: f64 = benford_prob(1, pos(1)).unwrap();
        let p2: f64 = benford_prob(2, pos(1)).unwrap();
        let p9: f64 = benford_prob(9, pos(1)).unwrap();
        assert!((p1 - 0.30103).abs() < 5e-6);
        assert!((p2 - 0.17609).abs() < 5e-6);
        assert!((p9 - 0.04576).abs() < 5e-6);
    }

    #[test]
    fn second_digit_zero() {
        let p: f64 = benford_prob(0, pos(2)).unwrap();
        assert!((p - 0.11968).abs() < 5e-6);
        assert!((p - brute_force(0, 2)).abs() < 1e-14);
    }

    #[test]
    fn tail_approximation_matches_direct_summation() {
        for k in 5..=6 {
            for d in 0..=9 {
                let fast: f64 = benford_prob(d, pos(k)).unwrap();
                let slow = brute_force(d, k);
                assert!((fast - slow).abs() < 1e-13, "k={k} d={d}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn large_positions_approach_uniform() {
        for k in [8, 12, 19, 25] {
            let e = benford_expected::<f64>(pos(k));
            let total: f64 = e.probs().iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "k={k}");
            assert!(e.max_deviation_from_uniform() < 1e-5, "k={k}");
        }
    }

    #[test]
    fn f32_expectation_is_normalized() {
        let e = benford_expected::<f32>(pos(3));
        let total: f32 = e.probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-5);
    }

    #[test]
    fn integer_digits() {
        assert_eq!(significant_digit(93_500_000, pos(1)).map(Digit::value), Some(9));
        assert_eq!(significant_digit(223, pos(2)).map(Digit::value), Some(2));
        assert_eq!(significant_digit(0, pos(1)), None);
        assert_eq!(significant_digit(7, pos(2)), None);
        assert_eq!(significant_digit(10, pos(2)).map(Digit::value), Some(0));
        assert_eq!(
            u64::MAX.significant_digit(pos(20)).map(Digit::value),
            Ok(5)
        );
        assert_eq!(u64::MAX.significant_digit(pos(21)), Err(Exclusion::TooFewDigits));
    }

    #[test]
    fn real_digits() {
        let d = |x: f64, k: u32| x.significant_digit(pos(k)).map(Digit::value);
        assert_eq!(d(0.0301, 1), Ok(3));
        assert_eq!(d(0.0301, 2), Ok(0));
        assert_eq!(d(0.0301, 3), Ok(1));
        assert_eq!(d(0.0301, 4), Err(Exclusion::TooFewDigits));
        assert_eq!(d(0.1 * 3.0, 2), Err(Exclusion::TooFewDigits));
        assert_eq!(d(20.0, 2), Ok(0));
        assert_eq!(d(7.0, 2), Err(Exclusion::TooFewDigits));
        assert_eq!(d(1e20, 21), Ok(0));
        assert_eq!(d(0.0, 1), Err(Exclusion::ZeroValue));
        assert_eq!(d(-4.0, 1), Err(Exclusion::Invalid));
        assert_eq!(d(f64::NAN, 1), Err(Exclusion::Invalid));
        assert_eq!(0.3f32.significant_digit(pos(2)), Err(Exclusion::TooFewDigits));
    }

    #[test]
    fn real_and_integer_paths_agree_on_integral_values() {
        for v in [1u64, 9, 10, 99, 100, 101, 223, 2450, 93_500_000, 123_456_789_012] {
            for k in 1..=13 {
                assert_eq!(
                    v.significant_digit(pos(k)),
                    (v as f64).significant_digit(pos(k)),
                    "v={v} k={k}"
                );
            }
        }
    }

    #[test]
    fn table_examples() {
        let t = digit_frequency_table(&[10u64, 1, 199], pos(1)).unwrap();
        assert_eq!(t.count(1), 3);
        assert_eq!((t.n_included(), t.n_excluded()), (3, 0));

        let t = digit_frequency_table(&[0u64, 5, 55], pos(2)).unwrap();
        assert_eq!(t.count(5), 1);
        assert_eq!(t.observed().iter().sum::<u64>(), 1);
        assert_eq!((t.n_included(), t.n_excluded()), (1, 2));
        assert_eq!(t.exclusions().zero_value, 1);
        assert_eq!(t.exclusions().too_few_digits, 1);

        let bottom = [15900u64, 15100, 14100, 13500, 4980, 2450, 2110, 1540, 223];
        let t = digit_frequency_table(&bottom, pos(1)).unwrap();
        // 15900, 15100, 14100, 13500 and 1540 all lead with 1.
        assert_eq!(t.count(1), 5);
        assert_eq!(t.count(2), 3);
        assert_eq!(t.count(4), 1);
        assert_eq!(t.count(3), 0);
    }

    #[test]
    fn empty_collection_is_rejected() {
        let empty: [u64; 0] = [];
        assert_eq!(digit_frequency_table(&empty, pos(1)), Err(Error::EmptyInput));
    }

    #[test]
    fn custom_expectation_validation() {
        assert!(BenfordExpectation::<f64>::custom(pos(1), vec![0.1; 10]).is_err());
        assert!(BenfordExpectation::<f64>::custom(pos(2), vec![0.2; 10]).is_err());
        assert!(BenfordExpectation::<f64>::custom(pos(2), vec![0.1; 10]).is_ok());
    }
}
