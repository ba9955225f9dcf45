use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Pow;

use super::Matcher;
use crate::bits::BitSequence;
use crate::error::{Error, Result};
use crate::interval::{Arithmetic, ExactInterval};

// Upper limit on refinements in one finalization branch.
const MAX_FINALIZE_STEPS: usize = 1 << 20;

/// One encoder state transition, recorded when tracing is enabled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent<I, S> {
    /// A source bit was read; `src` is the narrowed source interval.
    Read { bit: bool, src: I },
    /// A code bit was emitted. `scale` is the rescaling that followed, if
    /// any; `code` and `src` are the states after it.
    Emit { bit: bool, scale: Option<S>, code: I, src: I },
}

/// One side of the finalization step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch<I> {
    /// The deepest ancestor on this side whose child fits inside the source
    /// interval.
    pub window: I,
    /// The child of `window` that fits.
    pub candidate: I,
    /// The source interval, in the same coordinates as `window`.
    pub src: I,
    /// Bits appended to the codeword if this branch is chosen.
    pub path: BitSequence,
}

/// Both finalization branches and the choice between them.
///
/// The lower branch starts from the `0` half of the exit code interval and
/// walks down through `1` children; the upper branch starts from the `1`
/// half and walks down through `0` children. Both stop at the first child
/// that fits inside the source interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finalization<I> {
    pub low: Branch<I>,
    pub high: Branch<I>,
    pub chose_high: bool,
}

impl<I> Finalization<I> {
    pub fn chosen(&self) -> &Branch<I> {
        if self.chose_high {
            &self.high
        } else {
            &self.low
        }
    }
}

impl Finalization<ExactInterval> {
    /// Share of the lower window in the two adjacent windows.
    pub fn p_ratio(&self) -> num_rational::BigRational {
        let low = self.low.window.width();
        &low / (&low + self.high.window.width())
    }
}

/// Result of a complete encode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeOutcome<I> {
    pub codeword: BitSequence,
    /// Final source interval, in the coordinates of `final_code`.
    pub final_src: I,
    /// Final code interval; it lies inside `final_src`.
    pub final_code: I,
    /// `None` for the empty block.
    pub finalization: Option<Finalization<I>>,
}

/// Streaming ADM encoder for one block.
#[derive(Debug, Clone)]
pub struct Encoder<A: Arithmetic> {
    matcher: Matcher<A>,
    code: A::Interval,
    src: A::Interval,
    read: usize,
    output: BitSequence,
    trace: Option<Vec<TraceEvent<A::Interval, A::Scale>>>,
}

impl<A: Arithmetic> Encoder<A> {
    pub fn new(matcher: Matcher<A>) -> Self {
        let unit = matcher.arith.unit();
        Encoder {
            code: unit.clone(),
            src: unit,
            read: 0,
            output: BitSequence::with_capacity(matcher.n + matcher.n / 4 + 8),
            trace: None,
            matcher,
        }
    }

    /// Records every state transition from now on.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn trace(&self) -> Option<&[TraceEvent<A::Interval, A::Scale>]> {
        self.trace.as_deref()
    }

    /// Bits emitted so far.
    pub fn output(&self) -> &BitSequence {
        &self.output
    }

    pub fn bits_read(&self) -> usize {
        self.read
    }

    pub fn code_interval(&self) -> &A::Interval {
        &self.code
    }

    pub fn source_interval(&self) -> &A::Interval {
        &self.src
    }

    /// Reads one source bit and emits every code bit it resolves.
    pub fn push(&mut self, bit: bool) -> Result<()> {
        if self.read == self.matcher.n {
            return Err(Error::LengthMismatch { expected: self.matcher.n, actual: self.read + 1 });
        }
        let arith = &self.matcher.arith;
        self.src = arith.read_bit(&self.src, &self.matcher.p_src, bit)?;
        self.read += 1;
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEvent::Read { bit, src: self.src.clone() });
        }
        loop {
            let (lower, upper) = arith.refine(&self.code, &self.matcher.p_code)?;
            let (bit, child) = if arith.contains(&lower, &self.src) {
                (false, lower)
            } else if arith.contains(&upper, &self.src) {
                (true, upper)
            } else {
                return Ok(());
            };
            let src = std::mem::replace(&mut self.src, arith.unit());
            let (code, src, scale) = arith.renormalize(child, src)?;
            self.code = code;
            self.src = src;
            self.output.push(bit);
            if let Some(trace) = &mut self.trace {
                trace.push(TraceEvent::Emit {
                    bit,
                    scale,
                    code: self.code.clone(),
                    src: self.src.clone(),
                });
            }
        }
    }

    /// Runs the finalization step and returns the complete codeword.
    pub fn finish(self) -> Result<EncodeOutcome<A::Interval>> {
        if self.read != self.matcher.n {
            return Err(Error::LengthMismatch { expected: self.matcher.n, actual: self.read });
        }
        let mut codeword = self.output;
        if self.matcher.n == 0 {
            return Ok(EncodeOutcome {
                codeword,
                final_src: self.src,
                final_code: self.code,
                finalization: None,
            });
        }
        let m = &self.matcher;
        let low = descend(m, &self.code, &self.src, false)?;
        let high = descend(m, &self.code, &self.src, true)?;
        let chose_high = compare_path_weight(m, &high.path, &low.path) == Ordering::Greater;
        let fin = Finalization { low, high, chose_high };
        let chosen = fin.chosen();
        codeword.extend_from(&chosen.path);
        Ok(EncodeOutcome {
            codeword,
            final_src: chosen.src.clone(),
            final_code: chosen.candidate.clone(),
            finalization: Some(fin),
        })
    }
}

/// Walks one finalization branch. Every adoption goes through the same
/// renormalization the decoder applies to received bits.
fn descend<A: Arithmetic>(m: &Matcher<A>, code: &A::Interval, src: &A::Interval, upper: bool) -> Result<Branch<A::Interval>> {
    let arith = &m.arith;
    let (lower_half, upper_half) = arith.refine(code, &m.p_code)?;
    let start = if upper { upper_half } else { lower_half };
    let mut path = BitSequence::new();
    path.push(upper);
    let (mut window, mut src, _) = arith.renormalize(start, src.clone())?;
    for _ in 0..MAX_FINALIZE_STEPS {
        let (lo, hi) = arith.refine(&window, &m.p_code)?;
        // the upper branch can only fit through 0 children, the lower through 1 children
        let child = if upper { lo } else { hi };
        path.push(!upper);
        if arith.contains(&src, &child) {
            return Ok(Branch { window, candidate: child, src, path });
        }
        let (w, s, _) = arith.renormalize(child, src)?;
        window = w;
        src = s;
    }
    Err(Error::Invariant("finalization did not terminate".into()))
}

/// Compares the target probabilities of two bit paths under the backend's
/// effective `p_code`. Exact: no rounding is involved.
fn compare_path_weight<A: Arithmetic>(m: &Matcher<A>, a: &BitSequence, b: &BitSequence) -> Ordering {
    let (num, den) = m.arith.effective_prob(&m.p_code);
    let comp = &den - &num;
    let weight = |path: &BitSequence, other_len: usize| -> BigUint {
        let zeros = path.count_zeros() as u32;
        let ones = path.count_ones() as u32;
        Pow::pow(&num, zeros) * Pow::pow(&comp, ones) * Pow::pow(&den, other_len as u32)
    };
    weight(a, b.len()).cmp(&weight(b, a.len()))
}
