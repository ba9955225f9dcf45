//! Exact binary probabilities.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// A probability strictly between 0 and 1, stored as a reduced fraction.
///
/// Decimal strings are parsed exactly, so `"0.3"` is `3/10` and not the
/// nearest binary float.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prob {
    num: u64,
    den: u64,
}

impl Prob {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidProbability(format!("{num}/{den}: zero denominator")));
        }
        if num == 0 || num >= den {
            return Err(Error::InvalidProbability(format!(
                "{num}/{den} is not strictly between 0 and 1"
            )));
        }
        let g = num.gcd(&den);
        Ok(Prob { num: num / g, den: den / g })
    }

    pub fn half() -> Self {
        Prob { num: 1, den: 2 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// `1 - p`.
    pub fn complement(&self) -> Prob {
        Prob { num: self.den - self.num, den: self.den }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// Nearest multiple of `2^-bits`, clamped to `[1, 2^bits - 1]` so the
    /// result stays a valid probability. Ties round up.
    pub fn quantize(&self, bits: u32) -> u64 {
        assert!((1..=62).contains(&bits), "quantization width out of range");
        let scale = 1u128 << bits;
        let scaled = (2 * self.num as u128 * scale + self.den as u128) / (2 * self.den as u128);
        scaled.clamp(1, scale - 1) as u64
    }
}

impl FromStr for Prob {
    type Err = Error;

    /// Accepts decimal strings (`0.3`, `.25`) and fractions (`3/10`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidProbability(format!("cannot parse {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let num = n.trim().parse::<u64>().map_err(|_| bad())?;
            let den = d.trim().parse::<u64>().map_err(|_| bad())?;
            return Prob::new(num, den);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.len() > 19 {
            return Err(Error::InvalidProbability(format!("{s:?} has too many decimal digits")));
        }
        let den = 10u64.pow(frac_part.len() as u32);
        let int_val: u64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
        let frac_val: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
        let num = int_val
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Prob::new(num, den)
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
