use std::convert::Infallible;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Arithmetic;
use crate::error::{Error, Result};
use crate::prob::Prob;

/// A half-open interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactInterval {
    low: BigRational,
    high: BigRational,
}

impl ExactInterval {
    pub fn new(low: BigRational, high: BigRational) -> Result<Self> {
        if low.is_negative() || high > BigRational::one() || low >= high {
            return Err(Error::InvalidInterval(format!("[{low}, {high})")));
        }
        Ok(ExactInterval { low, high })
    }

    /// Convenience constructor from decimal strings, e.g. `("0.3", "1")`.
    pub fn parse(low: &str, high: &str) -> Result<Self> {
        ExactInterval::new(parse_rational(low)?, parse_rational(high)?)
    }

    pub fn unit() -> Self {
        ExactInterval { low: BigRational::zero(), high: BigRational::one() }
    }

    pub fn low(&self) -> &BigRational {
        &self.low
    }

    pub fn high(&self) -> &BigRational {
        &self.high
    }

    pub fn width(&self) -> BigRational {
        &self.high - &self.low
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    match s.trim() {
        "0" => Ok(BigRational::zero()),
        "1" => Ok(BigRational::one()),
        other => other.parse::<Prob>().map(|p| p.to_rational()),
    }
}

/// Arbitrary-precision rational arithmetic. Never rescales.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExactArithmetic;

impl Arithmetic for ExactArithmetic {
    type Interval = ExactInterval;
    type Prob = BigRational;
    type Scale = Infallible;

    fn prob(&self, p: Prob) -> BigRational {
        p.to_rational()
    }

    fn effective_prob(&self, p: &BigRational) -> (BigUint, BigUint) {
        let to_u = |v: &BigInt| v.to_biguint().expect("probabilities are positive");
        (to_u(p.numer()), to_u(p.denom()))
    }

    fn unit(&self) -> ExactInterval {
        ExactInterval::unit()
    }

    fn refine(&self, interval: &ExactInterval, p: &BigRational) -> Result<(ExactInterval, ExactInterval)> {
        if !p.is_positive() || *p >= BigRational::one() {
            return Err(Error::InvalidProbability(p.to_string()));
        }
        let split = &interval.low + interval.width() * p;
        Ok((
            ExactInterval { low: interval.low.clone(), high: split.clone() },
            ExactInterval { low: split, high: interval.high.clone() },
        ))
    }

    fn contains(&self, outer: &ExactInterval, inner: &ExactInterval) -> bool {
        inner.low >= outer.low && inner.high <= outer.high
    }

    fn scale_for(&self, _code: &ExactInterval) -> Option<Infallible> {
        None
    }

    fn apply_scale(&self, scale: &Infallible, _interval: &ExactInterval) -> Option<ExactInterval> {
        match *scale {}
    }
}
