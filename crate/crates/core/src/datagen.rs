//! Seeded synthetic samples used as oracles.
//!
//! Randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64`, so a seed reproduces the same sample on every platform.
//! A uniform real draw takes the top 53 bits of one `next_u64` output and
//! scales by `2^-53`, giving a value in `[0, 1)`. Integer draws use
//! `rand` 0.8's `gen_range` over the inclusive range.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `10^U` with `U` uniform on `[lo_exponent, hi_exponent)`. Integer
    /// exponent bounds give an exactly Benford-distributed population.
    LogUniform { lo_exponent: f64, hi_exponent: f64 },
    /// Exponential with the given rate, sampled by inversion.
    Exponential { rate: f64 },
    /// `base^1, base^2, ..., base^n`; deterministic, the seed is unused.
    GeometricSequence { base: f64 },
    /// Integers drawn uniformly from `lo..=hi`.
    UniformInteger { lo: u64, hi: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn log_uniform(lo_exponent: f64, hi_exponent: f64, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            family: Family::LogUniform { lo_exponent, hi_exponent },
            n,
            seed,
        }
    }

    pub fn exponential(rate: f64, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            family: Family::Exponential { rate },
            n,
            seed,
        }
    }

    pub fn geometric(base: f64, length: usize) -> Self {
        GeneratorSpec {
            family: Family::GeometricSequence { base },
            n: length,
            seed: 0,
        }
    }

    pub fn uniform_integer(lo: u64, hi: u64, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            family: Family::UniformInteger { lo, hi },
            n,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGenerator(msg));
        if self.n == 0 {
            return bad("sample size must be at least 1".into());
        }
        match self.family {
            Family::LogUniform { lo_exponent, hi_exponent } => {
                if !(lo_exponent.is_finite() && hi_exponent.is_finite()) || hi_exponent <= lo_exponent {
                    return bad(format!(
                        "exponent span [{lo_exponent}, {hi_exponent}) is empty"
                    ));
                }
                if 10f64.powf(hi_exponent).is_infinite() {
                    return bad(format!("10^{hi_exponent} overflows"));
                }
            }
            Family::Exponential { rate } => {
                if !(rate.is_finite() && rate > 0.0) {
                    return bad(format!("rate must be positive, got {rate}"));
                }
            }
            Family::GeometricSequence { base } => {
                if !(base.is_finite() && base > 1.0) {
                    return bad(format!("base must exceed 1, got {base}"));
                }
                if i32::try_from(self.n).is_err() || base.powi(self.n as i32).is_infinite() {
                    return bad(format!("{base}^{} overflows", self.n));
                }
            }
            Family::UniformInteger { lo, hi } => {
                if lo == 0 || hi <= lo {
                    return bad(format!("range [{lo}, {hi}] must satisfy 1 <= lo < hi"));
                }
            }
        }
        Ok(())
    }
}

/// Uniform draw on `[0, 1)` from the top 53 bits of one 64-bit output.
fn unit_draw(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `base^exponent`, exact (correctly rounded) for integral bases whose power
/// fits in 128 bits.
fn power(base: f64, exponent: u32) -> f64 {
    if base.fract() == 0.0 && base < u64::MAX as f64 {
        if let Some(p) = (base as u128).checked_pow(exponent) {
            return p as f64;
        }
    }
    base.powi(exponent as i32)
}

pub fn generate(spec: &GeneratorSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let sample = match spec.family {
        Family::LogUniform { lo_exponent, hi_exponent } => (0..spec.n)
            .map(|_| 10f64.powf(lo_exponent + (hi_exponent - lo_exponent) * unit_draw(&mut rng)))
            .collect(),
        Family::Exponential { rate } => (0..spec.n)
            .map(|_| -(1.0 - unit_draw(&mut rng)).ln() / rate)
            .collect(),
        Family::GeometricSequence { base } => {
            (1..=spec.n as u32).map(|i| power(base, i)).collect()
        }
        Family::UniformInteger { lo, hi } => {
            (0..spec.n).map(|_| rng.gen_range(lo..=hi) as f64).collect()
        }
    };
    Ok(sample)
}

/// Multiply every value by `factor`, preserving order.
pub fn scale<T: Real>(values: &[T], factor: T) -> Result<Vec<T>> {
    if !(factor.is_finite() && factor > T::zero()) {
        return Err(Error::InvalidScaleFactor(factor.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(values.iter().map(|&v| v * factor).collect())
}
