//! Self-describing block frame.
//!
//! ```text
//! magic "ADM1"            4 bytes
//! version                 u8 = 1
//! backend                 u8 (0 exact, 1 fixed with default widths)
//! p_src numerator         u64
//! p_src denominator       u64
//! p_code numerator        u64
//! p_code denominator      u64
//! n                       u64
//! payload bit length      u64
//! payload                 bits packed MSB first, zero-padded to a byte
//! ```
//!
//! Integers are little-endian. Frames can be concatenated.

use super::{decode, encode, DecodeResult, MatcherConfig};
use crate::bits::BitSequence;
use crate::error::{Error, Result};
use crate::interval::BackendId;
use crate::prob::Prob;

pub const FRAME_MAGIC: [u8; 4] = *b"ADM1";
pub const FRAME_VERSION: u8 = 1;
pub const FRAME_HEADER_LEN: usize = 4 + 1 + 1 + 6 * 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub config: MatcherConfig,
    pub payload: BitSequence,
}

impl Frame {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let backend = match self.config.backend {
            BackendId::Exact => 0u8,
            b if b == BackendId::default_fixed() => 1u8,
            other => {
                return Err(Error::InvalidBackend(format!("{other} cannot be stored in a frame")))
            }
        };
        let payload = self.payload.to_packed();
        let mut out = Vec::with_capacity(FRAME_HEADER_LEN + payload.len());
        out.extend_from_slice(&FRAME_MAGIC);
        out.push(FRAME_VERSION);
        out.push(backend);
        let c = &self.config;
        for v in [
            c.p_src.numerator(),
            c.p_src.denominator(),
            c.p_code.numerator(),
            c.p_code.denominator(),
            c.n as u64,
            self.payload.len() as u64,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&payload);
        Ok(out)
    }

    /// Parses one frame from the front of `bytes`; returns it with the
    /// number of bytes it occupied.
    pub fn parse(bytes: &[u8]) -> Result<(Frame, usize)> {
        if bytes.len() < FRAME_HEADER_LEN {
            return Err(Error::MalformedFrame(format!(
                "{} bytes is shorter than the {FRAME_HEADER_LEN}-byte header",
                bytes.len()
            )));
        }
        if bytes[..4] != FRAME_MAGIC {
            return Err(Error::MalformedFrame("bad magic".into()));
        }
        if bytes[4] != FRAME_VERSION {
            return Err(Error::MalformedFrame(format!("unsupported version {}", bytes[4])));
        }
        let backend = match bytes[5] {
            0 => BackendId::Exact,
            1 => BackendId::default_fixed(),
            b => return Err(Error::MalformedFrame(format!("unknown backend {b}"))),
        };
        let field = |i: usize| {
            let start = 6 + 8 * i;
            u64::from_le_bytes(bytes[start..start + 8].try_into().expect("8-byte field"))
        };
        let prob = |num, den| {
            Prob::new(num, den).map_err(|e| Error::MalformedFrame(e.to_string()))
        };
        let p_src = prob(field(0), field(1))?;
        let p_code = prob(field(2), field(3))?;
        let n = usize::try_from(field(4)).map_err(|_| Error::MalformedFrame("length overflow".into()))?;
        let bit_len = usize::try_from(field(5))
            .ok()
            .filter(|b| b.checked_add(7).is_some())
            .ok_or_else(|| Error::MalformedFrame("length overflow".into()))?;
        let byte_len = bit_len.div_ceil(8);
        let body = &bytes[FRAME_HEADER_LEN..];
        if body.len() < byte_len {
            let available = body.len() * 8;
            return Err(Error::Truncated { consumed: available, decoded: 0, expected: n });
        }
        let payload = BitSequence::from_packed(&body[..byte_len], bit_len)?;
        let config = MatcherConfig { p_src, p_code, n, backend };
        Ok((Frame { config, payload }, FRAME_HEADER_LEN + byte_len))
    }

    /// Parses every frame in `bytes`.
    pub fn parse_all(mut bytes: &[u8]) -> Result<Vec<Frame>> {
        let mut frames = Vec::new();
        while !bytes.is_empty() {
            let (frame, used) = Frame::parse(bytes)?;
            frames.push(frame);
            bytes = &bytes[used..];
        }
        Ok(frames)
    }

    pub fn decode(&self) -> Result<DecodeResult> {
        decode(&self.payload, &self.config)
    }
}

/// Encodes one block and wraps it in a frame.
pub fn encode_block_framed(source: &BitSequence, cfg: &MatcherConfig) -> Result<Vec<u8>> {
    let payload = encode(source, cfg)?;
    Frame { config: *cfg, payload }.to_bytes()
}

/// Parses one frame written under `cfg` and decodes it. Returns the source
/// block and the number of bytes the frame occupied.
pub fn decode_block_framed(bytes: &[u8], cfg: &MatcherConfig) -> Result<(BitSequence, usize)> {
    let (frame, used) = Frame::parse(bytes)?;
    if frame.config != *cfg {
        return Err(Error::MalformedFrame(format!(
            "frame header {:?} does not match the expected configuration",
            frame.config
        )));
    }
    Ok((frame.decode()?.source_word, used))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize) -> MatcherConfig {
        MatcherConfig::parse("0.5", "0.3", n, BackendId::Exact).unwrap()
    }

    #[test]
    fn header_layout() {
        let bytes = encode_block_framed(&"00".parse().unwrap(), &cfg(2)).unwrap();
        assert_eq!(&bytes[..4], b"ADM1");
        assert_eq!(bytes[4], 1);
        assert_eq!(bytes[5], 0);
        assert_eq!(u64::from_le_bytes(bytes[6..14].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(bytes[14..22].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(bytes[22..30].try_into().unwrap()), 3);
        assert_eq!(u64::from_le_bytes(bytes[30..38].try_into().unwrap()), 10);
        assert_eq!(u64::from_le_bytes(bytes[38..46].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(bytes[46..54].try_into().unwrap()), 3);
        // payload 001 -> 0010_0000
        assert_eq!(&bytes[54..], &[0x20]);
    }

    #[test]
    fn roundtrip_and_concatenation() {
        let c = cfg(2);
        let mut stream = encode_block_framed(&"00".parse().unwrap(), &c).unwrap();
        stream.extend(encode_block_framed(&"11".parse().unwrap(), &c).unwrap());
        let (first, used) = decode_block_framed(&stream, &c).unwrap();
        let (second, used2) = decode_block_framed(&stream[used..], &c).unwrap();
        assert_eq!((first.to_string(), second.to_string()), ("00".into(), "11".into()));
        assert_eq!(used + used2, stream.len());
        assert_eq!(Frame::parse_all(&stream).unwrap().len(), 2);
    }

    #[test]
    fn corrupt_magic() {
        let mut bytes = encode_block_framed(&"00".parse().unwrap(), &cfg(2)).unwrap();
        bytes[0] = b'X';
        assert!(matches!(decode_block_framed(&bytes, &cfg(2)), Err(Error::MalformedFrame(_))));
    }

    #[test]
    fn truncated_payload_and_header() {
        let bytes = encode_block_framed(&"11".parse().unwrap(), &cfg(2)).unwrap();
        assert!(matches!(Frame::parse(&bytes[..bytes.len() - 1]), Err(Error::Truncated { .. })));
        assert!(matches!(Frame::parse(&bytes[..10]), Err(Error::MalformedFrame(_))));
    }

    #[test]
    fn overflowing_length() {
        let mut bytes = encode_block_framed(&"11".parse().unwrap(), &cfg(2)).unwrap();
        bytes[46..54].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(matches!(Frame::parse(&bytes), Err(Error::MalformedFrame(_))));
    }

    #[test]
    fn mismatched_config() {
        let bytes = encode_block_framed(&"11".parse().unwrap(), &cfg(2)).unwrap();
        let other = MatcherConfig::parse("0.5", "0.4", 2, BackendId::Exact).unwrap();
        assert!(matches!(decode_block_framed(&bytes, &other), Err(Error::MalformedFrame(_))));
    }

    #[test]
    fn empty_block_frame() {
        let bytes = encode_block_framed(&BitSequence::new(), &cfg(0)).unwrap();
        assert_eq!(bytes.len(), FRAME_HEADER_LEN);
        let (s, _) = decode_block_framed(&bytes, &cfg(0)).unwrap();
        assert!(s.is_empty());
    }
}
