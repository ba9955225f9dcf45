use adm_core::{BitSequence, Error, Result};
use clap::ValueEnum;

/// On-disk representation of a plain bit sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BitFormat {
    /// Bytes, most significant bit first.
    Packed,
    /// ASCII `0` and `1`; whitespace is ignored.
    Text,
}

pub fn read_bits(bytes: &[u8], format: BitFormat, limit: Option<usize>) -> Result<BitSequence> {
    let bits = match format {
        BitFormat::Packed => {
            let len = limit.unwrap_or(bytes.len() * 8);
            BitSequence::from_packed(bytes, len)?
        }
        BitFormat::Text => {
            let text = std::str::from_utf8(bytes).map_err(|_| Error::InvalidBits("input is not text".into()))?;
            let bits: BitSequence = text.parse()?;
            match limit {
                Some(n) if n > bits.len() => {
                    return Err(Error::InvalidBits(format!("{n} bits requested, input has {}", bits.len())))
                }
                Some(n) => bits.slice(0, n),
                None => bits,
            }
        }
    };
    Ok(bits)
}

pub fn write_bits(bits: &BitSequence, format: BitFormat) -> Vec<u8> {
    match format {
        BitFormat::Packed => bits.to_packed(),
        BitFormat::Text => format!("{bits}\n").into_bytes(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_and_text() {
        let b = read_bits(&[0b1010_0000], BitFormat::Packed, Some(3)).unwrap();
        assert_eq!(b.to_string(), "101");
        assert_eq!(read_bits(&[0xff], BitFormat::Packed, None).unwrap().len(), 8);
        assert!(read_bits(&[0xff], BitFormat::Packed, Some(9)).is_err());
        let t = read_bits(b"10 11\n", BitFormat::Text, None).unwrap();
        assert_eq!(t.to_string(), "1011");
        assert_eq!(write_bits(&t, BitFormat::Text), b"1011\n");
        assert_eq!(write_bits(&t, BitFormat::Packed), [0b1011_0000]);
        assert!(read_bits(b"12", BitFormat::Text, None).is_err());
    }
}
