//! Interval refinement and containment.
//!
//! Every interval is a half-open subinterval `[low, high)` of the unit
//! interval. Reading a bit with probability `p` of a zero keeps the lower
//! fraction `p` of the interval for `0` and the upper fraction for `1`.
//!
//! Two backends implement [`Arithmetic`]:
//!
//! - [`ExactArithmetic`] works on arbitrary-precision rationals and never
//!   rescales. It is the reference for every conformance value.
//! - [`FixedArithmetic`] keeps endpoints in `W`-bit registers, quantizes
//!   probabilities to `F` fractional bits and rescales the working frame
//!   whenever the code interval gets narrow. Rescaling is keyed to the code
//!   interval only, so encoder and decoder derive the same frame sequence
//!   from the code bits alone.

mod exact;
mod fixed;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

pub use exact::{ExactArithmetic, ExactInterval};
pub use fixed::{FixedArithmetic, FixedInterval, ScaleRecord};

use crate::error::{Error, Result};
use crate::prob::Prob;

/// Default register width of the fixed backend.
pub const DEFAULT_REGISTER_BITS: u32 = 64;
/// Default probability quantization width of the fixed backend.
pub const DEFAULT_FRACTION_BITS: u32 = 32;

/// Numeric backend selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendId {
    Exact,
    /// `register_bits` is the register width `W`, `fraction_bits` the
    /// probability quantization width `F`. Requires `F + 2 <= W <= 64`.
    Fixed { register_bits: u32, fraction_bits: u32 },
}

impl BackendId {
    pub fn fixed(register_bits: u32, fraction_bits: u32) -> Result<Self> {
        let id = BackendId::Fixed { register_bits, fraction_bits };
        id.validate()?;
        Ok(id)
    }

    pub fn default_fixed() -> Self {
        BackendId::Fixed {
            register_bits: DEFAULT_REGISTER_BITS,
            fraction_bits: DEFAULT_FRACTION_BITS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BackendId::Exact => Ok(()),
            BackendId::Fixed { register_bits: w, fraction_bits: f } => {
                if f == 0 || w > 64 || f + 2 > w {
                    Err(Error::InvalidBackend(format!(
                        "fixed backend needs 1 <= F and F + 2 <= W <= 64, got W={w} F={f}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendId::Exact => f.write_str("exact"),
            BackendId::Fixed { register_bits, fraction_bits } => {
                write!(f, "fixed({register_bits},{fraction_bits})")
            }
        }
    }
}

impl FromStr for BackendId {
    type Err = Error;

    /// `exact`, `fixed` (default widths) or `fixed:W:F`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(BackendId::Exact),
            "fixed" => Ok(BackendId::default_fixed()),
            other => {
                let parts: Vec<&str> = other.split(':').collect();
                match parts.as_slice() {
                    ["fixed", w, f] => {
                        let w = w.parse().map_err(|_| Error::InvalidBackend(other.into()))?;
                        let f = f.parse().map_err(|_| Error::InvalidBackend(other.into()))?;
                        BackendId::fixed(w, f)
                    }
                    _ => Err(Error::InvalidBackend(other.into())),
                }
            }
        }
    }
}

/// Code interval, source interval and the scale map applied to both.
pub type Renormalized<I, S> = (I, I, Option<S>);

/// Interval operations shared by the encoder and decoder.
///
/// All operations are pure. Implementations must be deterministic: the same
/// call sequence yields the same results on every platform.
pub trait Arithmetic: Clone + fmt::Debug + Send + Sync {
    type Interval: Clone + fmt::Debug + PartialEq + Eq + Send + Sync;
    type Prob: Clone + fmt::Debug + Send + Sync;
    /// The affine map applied by [`Arithmetic::renormalize`].
    type Scale: Clone + fmt::Debug + PartialEq + Eq + Send + Sync;

    /// Converts an exact probability into the backend's representation.
    fn prob(&self, p: Prob) -> Self::Prob;

    /// The probability the backend actually uses, as an exact fraction.
    fn effective_prob(&self, p: &Self::Prob) -> (BigUint, BigUint);

    /// The full interval `[0, 1)`.
    fn unit(&self) -> Self::Interval;

    /// Splits `interval` into its `0` part and its `1` part.
    fn refine(&self, interval: &Self::Interval, p: &Self::Prob) -> Result<(Self::Interval, Self::Interval)>;

    /// The part of `interval` selected by `bit`.
    fn read_bit(&self, interval: &Self::Interval, p: &Self::Prob, bit: bool) -> Result<Self::Interval> {
        let (lower, upper) = self.refine(interval, p)?;
        Ok(if bit { upper } else { lower })
    }

    /// Whether `inner` lies inside `outer` (half-open semantics).
    fn contains(&self, outer: &Self::Interval, inner: &Self::Interval) -> bool;

    /// The map that brings `code` back to full range, if it has become too
    /// narrow. `None` means no rescaling is needed.
    fn scale_for(&self, code: &Self::Interval) -> Option<Self::Scale>;

    /// Applies a scale map to an interval, clamping to the unit range.
    /// Returns `None` when nothing of the interval remains.
    fn apply_scale(&self, scale: &Self::Scale, interval: &Self::Interval) -> Option<Self::Interval>;

    /// Rescales `code` to full range when needed and moves `src` along.
    ///
    /// `src` must lie inside `code`. The returned record lets another party
    /// replay the identical operation.
    fn renormalize(
        &self,
        code: Self::Interval,
        src: Self::Interval,
    ) -> Result<Renormalized<Self::Interval, Self::Scale>> {
        match self.scale_for(&code) {
            None => Ok((code, src, None)),
            Some(scale) => {
                let code = self
                    .apply_scale(&scale, &code)
                    .ok_or_else(|| Error::Invariant("code interval vanished under rescaling".into()))?;
                let src = self
                    .apply_scale(&scale, &src)
                    .ok_or_else(|| Error::Underflow("source interval vanished under rescaling".into()))?;
                Ok((code, src, Some(scale)))
            }
        }
    }
}
