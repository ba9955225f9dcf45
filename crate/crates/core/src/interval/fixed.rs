use num_bigint::BigUint;

use super::Arithmetic;
use crate::error::{Error, Result};
use crate::prob::Prob;

/// A half-open interval of register values inside `[0, full]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedInterval {
    pub low: u64,
    pub high: u64,
}

impl FixedInterval {
    pub fn width(&self) -> u64 {
        self.high - self.low
    }
}

/// The affine map `x -> (x - offset) * full / width`, rounded down and
/// clamped to `[0, full]`.
///
/// It sends `[offset, offset + width)` exactly onto `[0, full)` and is
/// strictly increasing on that range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScaleRecord {
    pub offset: u64,
    pub width: u64,
}

/// Fixed-precision integer arithmetic.
///
/// Endpoints live in `[0, 2^(W-2)]`; probabilities are multiples of `2^-F`.
/// Products are formed in 128 bits and rounded down. A code interval narrower
/// than half the range is mapped back onto the full range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedArithmetic {
    fraction_bits: u32,
    full: u64,
}

impl FixedArithmetic {
    pub fn new(register_bits: u32, fraction_bits: u32) -> Result<Self> {
        super::BackendId::fixed(register_bits, fraction_bits)?;
        Ok(FixedArithmetic { fraction_bits, full: 1u64 << (register_bits - 2) })
    }

    pub fn full(&self) -> u64 {
        self.full
    }

    pub fn fraction_bits(&self) -> u32 {
        self.fraction_bits
    }

    pub fn interval(&self, low: u64, high: u64) -> Result<FixedInterval> {
        if low >= high || high > self.full {
            return Err(Error::InvalidInterval(format!("[{low}, {high}) in [0, {}]", self.full)));
        }
        Ok(FixedInterval { low, high })
    }

    fn map(&self, scale: &ScaleRecord, x: u64) -> u64 {
        if x <= scale.offset {
            0
        } else if x - scale.offset >= scale.width {
            self.full
        } else {
            ((x - scale.offset) as u128 * self.full as u128 / scale.width as u128) as u64
        }
    }
}

impl Default for FixedArithmetic {
    fn default() -> Self {
        FixedArithmetic::new(super::DEFAULT_REGISTER_BITS, super::DEFAULT_FRACTION_BITS)
            .expect("default widths are valid")
    }
}

impl Arithmetic for FixedArithmetic {
    type Interval = FixedInterval;
    type Prob = u64;
    type Scale = ScaleRecord;

    fn prob(&self, p: Prob) -> u64 {
        p.quantize(self.fraction_bits)
    }

    fn effective_prob(&self, p: &u64) -> (BigUint, BigUint) {
        (BigUint::from(*p), BigUint::from(1u8) << self.fraction_bits)
    }

    fn unit(&self) -> FixedInterval {
        FixedInterval { low: 0, high: self.full }
    }

    fn refine(&self, interval: &FixedInterval, p: &u64) -> Result<(FixedInterval, FixedInterval)> {
        if *p == 0 || *p >= 1u64 << self.fraction_bits {
            return Err(Error::InvalidProbability(format!("{p} / 2^{}", self.fraction_bits)));
        }
        let width = interval.width();
        let split = interval.low + ((width as u128 * *p as u128) >> self.fraction_bits) as u64;
        if split == interval.low || split == interval.high {
            return Err(Error::Underflow(format!(
                "cannot split [{}, {}) at {p} / 2^{}",
                interval.low, interval.high, self.fraction_bits
            )));
        }
        Ok((
            FixedInterval { low: interval.low, high: split },
            FixedInterval { low: split, high: interval.high },
        ))
    }

    fn contains(&self, outer: &FixedInterval, inner: &FixedInterval) -> bool {
        inner.low >= outer.low && inner.high <= outer.high
    }

    fn scale_for(&self, code: &FixedInterval) -> Option<ScaleRecord> {
        (code.width() < self.full / 2).then_some(ScaleRecord { offset: code.low, width: code.width() })
    }

    fn apply_scale(&self, scale: &ScaleRecord, interval: &FixedInterval) -> Option<FixedInterval> {
        let low = self.map(scale, interval.low);
        let high = self.map(scale, interval.high);
        (low < high).then_some(FixedInterval { low, high })
    }
}
