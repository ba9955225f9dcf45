use super::{DecodeResult, Encoder, Matcher, TraceEvent};
use crate::bits::BitSequence;
use crate::error::{Error, Result};
use crate::interval::Arithmetic;

/// Encoder state transitions recorded during decoding.
pub type Trace<A> = Vec<TraceEvent<<A as Arithmetic>::Interval, <A as Arithmetic>::Scale>>;

/// ADM decoder for one block.
///
/// Drives a copy of the encoder so that every refinement and rescaling is
/// computed from the same operands as on the encoding side.
#[derive(Debug, Clone)]
pub struct Decoder<A: Arithmetic> {
    matcher: Matcher<A>,
    traced: bool,
}

impl<A: Arithmetic> Decoder<A> {
    pub fn new(matcher: Matcher<A>) -> Self {
        Decoder { matcher, traced: false }
    }

    /// Makes [`Decoder::decode_traced`] record the simulated encoder states.
    pub fn with_trace(mut self) -> Self {
        self.traced = true;
        self
    }

    pub fn decode(&self, codeword: &BitSequence) -> Result<DecodeResult> {
        self.decode_traced(codeword).map(|(r, _)| r)
    }

    /// Decodes and returns the trace of the simulated encoder (empty unless
    /// tracing was enabled).
    pub fn decode_traced(
        &self,
        codeword: &BitSequence,
    ) -> Result<(DecodeResult, Trace<A>)> {
        let n = self.matcher.n;
        let mut shadow = Encoder::new(self.matcher.clone());
        if self.traced {
            shadow = shadow.with_trace();
        }
        let mut source = BitSequence::with_capacity(n);
        let mut consumed = 0;
        for decoded in 0..n {
            let (bit, read_to) = self.next_bit(&shadow, codeword).map_err(|e| match e {
                Error::Truncated { .. } => Error::Truncated { consumed: codeword.len(), decoded, expected: n },
                other => other,
            })?;
            consumed = consumed.max(read_to);
            source.push(bit);

            let before = shadow.output().len();
            shadow.push(bit)?;
            // Bits past the end are only tolerated after the last source bit,
            // where the decoder no longer needs them.
            for i in before..shadow.output().len() {
                match codeword.get(i) {
                    Some(c) if Some(c) != shadow.output().get(i) => {
                        return Err(Error::Invariant(format!("decoder lost sync at codeword bit {i}")))
                    }
                    _ => {}
                }
            }
        }
        let trace = shadow.trace().map(<[_]>::to_vec).unwrap_or_default();
        Ok((DecodeResult { source_word: source, consumed_bits: consumed }, trace))
    }

    /// Reads codeword bits after the shadow encoder's output until the code
    /// interval fits in one of the two source candidates. Returns the bit and
    /// the number of codeword bits read.
    fn next_bit(&self, shadow: &Encoder<A>, codeword: &BitSequence) -> Result<(bool, usize)> {
        let arith = &self.matcher.arith;
        let (c0, c1) = arith.refine(shadow.source_interval(), &self.matcher.p_src)?;
        let mut candidates = [Some(c0), Some(c1)];
        let mut code = shadow.code_interval().clone();
        let mut pos = shadow.output().len();
        loop {
            let bit = codeword.get(pos).ok_or(Error::Truncated { consumed: pos, decoded: 0, expected: 0 })?;
            pos += 1;
            code = arith.read_bit(&code, &self.matcher.p_code, bit)?;
            if let Some(scale) = arith.scale_for(&code) {
                code = arith
                    .apply_scale(&scale, &code)
                    .ok_or_else(|| Error::Invariant("code interval vanished under rescaling".into()))?;
                for c in candidates.iter_mut() {
                    *c = c.take().and_then(|c| arith.apply_scale(&scale, &c));
                }
            }
            for (b, cand) in candidates.iter().enumerate() {
                if cand.as_ref().is_some_and(|c| arith.contains(c, &code)) {
                    return Ok((b == 1, pos));
                }
            }
        }
    }
}
