//! The ADM encoder and decoder.
//!
//! The encoder keeps a source interval, narrowed by `p_src` for every input
//! bit, and a code interval, narrowed by `p_code` for every output bit. An
//! output bit is emitted as soon as the source interval fits inside one of
//! the two halves of the code interval. Once all input bits are read, the
//! finalization step appends the bits of the largest code interval that fits
//! inside the source interval, so the codeword identifies the source block.
//!
//! The decoder runs an encoder alongside. To learn the next source bit it
//! refines the encoder's code interval with the received bits until that
//! interval fits inside one of the two source candidates, then advances the
//! simulated encoder with the decided bit. Every rescaling is therefore
//! replayed with the same operands and the same rounding as on the encoder
//! side.

mod decoder;
mod encoder;
mod frame;

use crate::bits::BitSequence;
use crate::error::{Error, Result};
use crate::interval::{Arithmetic, BackendId, ExactArithmetic, FixedArithmetic};
use crate::prob::Prob;

pub use decoder::{Decoder, Trace};
pub use encoder::{Branch, EncodeOutcome, Encoder, Finalization, TraceEvent};
pub use frame::{decode_block_framed, encode_block_framed, Frame, FRAME_HEADER_LEN, FRAME_MAGIC, FRAME_VERSION};

/// Source distribution, target distribution, block length and backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatcherConfig {
    /// `P_S(0)`.
    pub p_src: Prob,
    /// `P_Z(0)`.
    pub p_code: Prob,
    /// Source block length in bits.
    pub n: usize,
    pub backend: BackendId,
}

impl MatcherConfig {
    pub fn new(p_src: Prob, p_code: Prob, n: usize, backend: BackendId) -> Result<Self> {
        backend.validate()?;
        Ok(MatcherConfig { p_src, p_code, n, backend })
    }

    /// Parses both probabilities from decimal strings.
    pub fn parse(p_src: &str, p_code: &str, n: usize, backend: BackendId) -> Result<Self> {
        MatcherConfig::new(p_src.parse()?, p_code.parse()?, n, backend)
    }

    pub fn exact(p_src: Prob, p_code: Prob, n: usize) -> Self {
        MatcherConfig { p_src, p_code, n, backend: BackendId::Exact }
    }

    pub fn with_backend(self, backend: BackendId) -> Self {
        MatcherConfig { backend, ..self }
    }

    pub fn with_n(self, n: usize) -> Self {
        MatcherConfig { n, ..self }
    }
}

/// The source word recovered by the decoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub source_word: BitSequence,
    /// Number of leading codeword bits the decoder had to read.
    pub consumed_bits: usize,
}

/// A configured matcher over one arithmetic backend.
#[derive(Debug, Clone)]
pub struct Matcher<A: Arithmetic> {
    arith: A,
    p_src: A::Prob,
    p_code: A::Prob,
    n: usize,
}

impl<A: Arithmetic> Matcher<A> {
    pub fn new(arith: A, p_src: Prob, p_code: Prob, n: usize) -> Self {
        let p_src = arith.prob(p_src);
        let p_code = arith.prob(p_code);
        Matcher { arith, p_src, p_code, n }
    }

    pub fn arithmetic(&self) -> &A {
        &self.arith
    }

    pub fn block_len(&self) -> usize {
        self.n
    }

    pub fn encoder(&self) -> Encoder<A> {
        Encoder::new(self.clone())
    }

    pub fn decoder(&self) -> Decoder<A> {
        Decoder::new(self.clone())
    }

    pub fn encode(&self, source: &BitSequence) -> Result<BitSequence> {
        Ok(self.encode_detailed(source)?.codeword)
    }

    /// Encodes and keeps the final intervals and the finalization branches.
    pub fn encode_detailed(&self, source: &BitSequence) -> Result<EncodeOutcome<A::Interval>> {
        if source.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: source.len() });
        }
        let mut encoder = self.encoder();
        for bit in source.iter() {
            encoder.push(bit)?;
        }
        encoder.finish()
    }

    pub fn decode(&self, codeword: &BitSequence) -> Result<DecodeResult> {
        self.decoder().decode(codeword)
    }
}

impl Matcher<ExactArithmetic> {
    pub fn exact(p_src: Prob, p_code: Prob, n: usize) -> Self {
        Matcher::new(ExactArithmetic, p_src, p_code, n)
    }
}

/// Runs `f` with a matcher built for `cfg.backend`.
macro_rules! with_matcher {
    ($cfg:expr, |$m:ident| $body:expr) => {{
        let cfg = $cfg;
        match cfg.backend {
            BackendId::Exact => {
                let $m = Matcher::new(ExactArithmetic, cfg.p_src, cfg.p_code, cfg.n);
                $body
            }
            BackendId::Fixed { register_bits, fraction_bits } => {
                let arith = FixedArithmetic::new(register_bits, fraction_bits)?;
                let $m = Matcher::new(arith, cfg.p_src, cfg.p_code, cfg.n);
                $body
            }
        }
    }};
}

/// Encodes one source block of exactly `cfg.n` bits.
pub fn encode(source: &BitSequence, cfg: &MatcherConfig) -> Result<BitSequence> {
    with_matcher!(cfg, |m| m.encode(source))
}

/// Decodes one block. Bits after the ones the decoder needs are ignored.
pub fn decode(codeword: &BitSequence, cfg: &MatcherConfig) -> Result<DecodeResult> {
    with_matcher!(cfg, |m| m.decode(codeword))
}
