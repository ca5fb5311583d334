//! Value-order trimming and conformity re-tests on the trimmed samples.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::digit::{DigitPosition, SignificantDigits};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::{conformity_test, ConformityVerdict};

pub const DEFAULT_FRACTIONS: [f64; 3] = [0.01, 0.05, 0.10];
pub const DEFAULT_ENDS: [TrimEnd; 2] = [TrimEnd::Top, TrimEnd::Bottom];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrimEnd {
    Top,
    Bottom,
    Both,
}

impl fmt::Display for TrimEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrimEnd::Top => "top",
            TrimEnd::Bottom => "bottom",
            TrimEnd::Both => "both",
        })
    }
}

impl std::str::FromStr for TrimEnd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top" => Ok(TrimEnd::Top),
            "bottom" => Ok(TrimEnd::Bottom),
            "both" => Ok(TrimEnd::Both),
            other => Err(Error::InvalidTrim(format!("unknown end {other:?}"))),
        }
    }
}

/// Which end(s) to trim and what fraction of the sample to drop per end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrimSpec {
    end: TrimEnd,
    fraction: f64,
}

impl TrimSpec {
    pub fn new(end: TrimEnd, fraction: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&fraction) {
            return Err(Error::InvalidTrim(format!(
                "fraction per end must lie in [0, 0.5), got {fraction}"
            )));
        }
        Ok(TrimSpec { end, fraction })
    }

    pub fn end(&self) -> TrimEnd {
        self.end
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    /// Records removed from each trimmed end of a sample of size `n`:
    /// `ceil(fraction * n)`. Products within 1e-9 of an integer are taken
    /// as that integer so `0.05 * 100` removes 5, not 6.
    pub fn count_per_end(&self, n: usize) -> usize {
        let x = self.fraction * n as f64;
        let nearest = x.round();
        if (x - nearest).abs() < 1e-9 {
            nearest as usize
        } else {
            x.ceil() as usize
        }
    }
}

/// Split `values` into `(kept, removed)`, both in input order.
///
/// Removes the `ceil(fraction * n)` largest (top) and/or smallest (bottom)
/// values. Among equal values at the cut, earlier records are kept.
pub fn trim<V: Clone + PartialOrd>(values: &[V], spec: TrimSpec) -> Result<(Vec<V>, Vec<V>)> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len();
    let per_end = spec.count_per_end(n);
    let ends = if spec.end == TrimEnd::Both { 2 } else { 1 };
    if per_end * ends > n {
        return Err(Error::InvalidTrim(format!(
            "removing {per_end} per end from {n} values overlaps"
        )));
    }

    let cmp = |a: &V, b: &V| a.partial_cmp(b).unwrap_or(Ordering::Equal);
    let mut removed = vec![false; n];
    let mut drop_extreme = |largest: bool| {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            let by_value = if largest {
                cmp(&values[j], &values[i])
            } else {
                cmp(&values[i], &values[j])
            };
            // Later records go first so earlier ones survive ties.
            by_value.then(j.cmp(&i))
        });
        for i in order.into_iter().take(per_end) {
            removed[i] = true;
        }
    };
    match spec.end {
        TrimEnd::Top => drop_extreme(true),
        TrimEnd::Bottom => drop_extreme(false),
        TrimEnd::Both => {
            drop_extreme(true);
            drop_extreme(false);
        }
    }

    let (kept, dropped): (Vec<_>, Vec<_>) = values
        .iter()
        .zip(&removed)
        .partition(|(_, &gone)| !gone);
    Ok((
        kept.into_iter().map(|(v, _)| v.clone()).collect(),
        dropped.into_iter().map(|(v, _)| v.clone()).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrimRow<V, T> {
    pub spec: TrimSpec,
    pub removed_count: usize,
    pub removed_values: Vec<V>,
    pub verdict: ConformityVerdict<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrimSweepReport<V, T> {
    pub baseline: ConformityVerdict<T>,
    pub rows: Vec<TrimRow<V, T>>,
}

/// Baseline conformity plus one re-test per `(end, fraction)`, ends outermost.
pub fn trim_sweep<V, T>(
    values: &[V],
    fractions: &[f64],
    ends: &[TrimEnd],
    position: DigitPosition,
    alpha: T,
) -> Result<TrimSweepReport<V, T>>
where
    V: SignificantDigits + Clone + PartialOrd,
    T: Real,
{
    let baseline = conformity_test(values, position, alpha)?;
    let mut rows = Vec::with_capacity(fractions.len() * ends.len());
    for &end in ends {
        for &fraction in fractions {
            let spec = TrimSpec::new(end, fraction)?;
            let (kept, removed) = trim(values, spec)?;
            let verdict = conformity_test(&kept, position, alpha)?;
            rows.push(TrimRow {
                spec,
                removed_count: removed.len(),
                removed_values: removed,
                verdict,
            });
        }
    }
    Ok(TrimSweepReport { baseline, rows })
}
