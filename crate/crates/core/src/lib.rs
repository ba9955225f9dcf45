//! Arithmetic distribution matching (ADM).
//!
//! An ADM encoder maps a fixed-length block of bits from a binary memoryless
//! source with `P(0) = p_src` onto a variable-length codeword whose bits look
//! as if they were drawn from a target binary memoryless source with
//! `P(0) = p_code`. The mapping is invertible: the decoder recovers the source
//! block from the codeword.
//!
//! The crate is split into three layers:
//!
//! - [`interval`]: interval refinement and containment over an exact rational
//!   backend and a fixed-precision integer backend with renormalization.
//! - [`codec`]: the streaming encoder and decoder, the finalization step and a
//!   self-describing block frame.
//! - [`analysis`]: codebook enumeration, informational divergence, length and
//!   rate bounds, a brute-force optimal matcher and Monte Carlo estimation.

pub mod analysis;
pub mod bits;
pub mod codec;
pub mod error;
pub mod interval;
pub mod prob;

pub use bits::BitSequence;
pub use codec::{decode, encode, DecodeResult, MatcherConfig};
pub use error::{Error, Result};
pub use interval::BackendId;
pub use prob::Prob;
