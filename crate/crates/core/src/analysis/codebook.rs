use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;

use super::{entropy, kl_upper_bound, log2_rational, rational_to_f64, MatchReport};
use crate::bits::BitSequence;
use crate::codec::{encode, MatcherConfig};
use crate::error::{Error, Result};
use crate::prob::Prob;

/// Largest block length [`enumerate_codebook`] accepts.
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodebookEntry {
    pub source: BitSequence,
    pub codeword: BitSequence,
    /// `P_Y(c) = P_S^n(s)`.
    pub p_y: BigRational,
    /// `P_Z^C(c)`, the probability the target source emits `c`.
    pub p_z: BigRational,
}

/// A bijection from all `2^n` source blocks onto a prefix-free set of
/// codewords, with the induced distributions attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    pub p_src: Prob,
    pub p_code: Prob,
    pub n: usize,
    /// Ordered by source block, `0...0` first.
    pub entries: Vec<CodebookEntry>,
}

/// Probability of `bits` under a binary memoryless source with `P(0) = p`.
pub fn sequence_probability(bits: &BitSequence, p: Prob) -> BigRational {
    let zeros = bits.count_zeros() as u32;
    let ones = bits.count_ones() as u32;
    let p0 = p.to_rational();
    let p1 = p.complement().to_rational();
    Pow::pow(&p0, zeros) * Pow::pow(&p1, ones)
}

impl Codebook {
    /// Builds a codebook from `(source, codeword)` pairs and checks that the
    /// sources are exactly the `2^n` blocks of length `n` and that the
    /// codewords are distinct and prefix-free.
    pub fn from_pairs(
        p_src: Prob,
        p_code: Prob,
        n: usize,
        pairs: impl IntoIterator<Item = (BitSequence, BitSequence)>,
    ) -> Result<Self> {
        let mut entries: Vec<CodebookEntry> = pairs
            .into_iter()
            .map(|(source, codeword)| CodebookEntry {
                p_y: sequence_probability(&source, p_src),
                p_z: sequence_probability(&codeword, p_code),
                source,
                codeword,
            })
            .collect();
        entries.sort_by(|a, b| a.source.cmp(&b.source));
        let expected = 1usize
            .checked_shl(n as u32)
            .ok_or(Error::BlockTooLarge { n, limit: 63 })?;
        if entries.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "codebook has {} entries, expected {expected}",
                entries.len()
            )));
        }
        for (i, e) in entries.iter().enumerate() {
            if e.source != BitSequence::from_u64(i as u64, n) {
                return Err(Error::InvalidArgument(format!("source block {} missing or repeated", e.source)));
            }
        }
        let book = Codebook { p_src, p_code, n, entries };
        if !book.is_injective() {
            return Err(Error::InvalidArgument("codewords are not distinct".into()));
        }
        if !book.is_prefix_free() {
            return Err(Error::InvalidArgument("codewords are not prefix-free".into()));
        }
        Ok(book)
    }

    pub fn is_injective(&self) -> bool {
        let set: HashSet<_> = self.entries.iter().map(|e| &e.codeword).collect();
        set.len() == self.entries.len()
    }

    pub fn is_prefix_free(&self) -> bool {
        let mut words: Vec<&BitSequence> = self.entries.iter().map(|e| &e.codeword).collect();
        // after lexicographic sorting a prefix sorts directly before some extension of it
        words.sort();
        words.windows(2).all(|w| !w[1].starts_with(w[0]))
    }

    pub fn codeword(&self, source: &BitSequence) -> Option<&BitSequence> {
        self.entries.iter().find(|e| &e.source == source).map(|e| &e.codeword)
    }

    /// `D(P_Y || P_Z^C)` in bits. The weights are exact; only the logarithms
    /// are evaluated in floating point.
    pub fn informational_divergence(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| !e.p_y.is_zero())
            .map(|e| rational_to_f64(&e.p_y) * log2_rational(&(&e.p_y / &e.p_z)))
            .sum()
    }

    /// `E[l(Y)]`, exactly.
    pub fn expected_length_exact(&self) -> BigRational {
        self.entries
            .iter()
            .map(|e| &e.p_y * BigRational::from_integer(BigInt::from(e.codeword.len())))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn expected_length(&self) -> f64 {
        rational_to_f64(&self.expected_length_exact())
    }

    /// `sum_c P_Z^C(c)`. Below one when some target sequences have no
    /// codeword prefix, i.e. the codebook tree is incomplete.
    pub fn coverage_exact(&self) -> BigRational {
        self.entries.iter().fold(BigRational::zero(), |acc, e| acc + &e.p_z)
    }

    pub fn coverage(&self) -> f64 {
        rational_to_f64(&self.coverage_exact())
    }

    /// `sum_c P_Y(c)`; one for every valid codebook.
    pub fn total_probability(&self) -> BigRational {
        self.entries.iter().fold(BigRational::zero(), |acc, e| acc + &e.p_y)
    }

    pub fn report(&self) -> MatchReport {
        let kl = self.informational_divergence();
        let len = self.expected_length();
        MatchReport {
            n: self.n,
            kl_bits: kl,
            expected_length: len,
            normalized_kl: if len > 0.0 { kl / len } else { 0.0 },
            rate: if len > 0.0 { self.n as f64 * entropy(self.p_src) / len } else { 0.0 },
            kl_upper: kl_upper_bound(self.p_code),
            stderr: 0.0,
            length_stderr: 0.0,
            normalized_stderr: 0.0,
            rate_stderr: 0.0,
            trials: 0,
        }
    }
}

impl Codebook {
    /// Checks that the codebook probabilities sum to one.
    pub fn is_normalized(&self) -> bool {
        self.total_probability() == BigRational::one()
    }
}

/// Encodes every source block of length `cfg.n`.
pub fn enumerate_codebook(cfg: &MatcherConfig) -> Result<Codebook> {
    enumerate_codebook_capped(cfg, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_codebook_capped(cfg: &MatcherConfig, cap: usize) -> Result<Codebook> {
    if cfg.n > cap {
        return Err(Error::BlockTooLarge { n: cfg.n, limit: cap });
    }
    let pairs = (0..1u64 << cfg.n)
        .into_par_iter()
        .map(|i| {
            let source = BitSequence::from_u64(i, cfg.n);
            encode(&source, cfg).map(|c| (source, c))
        })
        .collect::<Result<Vec<_>>>()?;
    Codebook::from_pairs(cfg.p_src, cfg.p_code, cfg.n, pairs)
        .map_err(|e| Error::Invariant(format!("enumerated codebook is invalid: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Prob {
        s.parse().unwrap()
    }

    fn book(p_src: &str, p_code: &str, n: usize, pairs: &[(&str, &str)]) -> Codebook {
        Codebook::from_pairs(
            p(p_src),
            p(p_code),
            n,
            pairs.iter().map(|(s, c)| (s.parse().unwrap(), c.parse().unwrap())),
        )
        .unwrap()
    }

    fn optimal_n2() -> Codebook {
        book("0.5", "0.3", 2, &[("00", "0"), ("01", "10"), ("10", "110"), ("11", "111")])
    }

    fn preview_n2() -> Codebook {
        enumerate_codebook(&MatcherConfig::exact(p("0.5"), p("0.3"), 2)).unwrap()
    }

    #[test]
    fn enumerates_preview_and_compression_books() {
        let b = preview_n2();
        let words: Vec<String> = b.entries.iter().map(|e| e.codeword.to_string()).collect();
        assert_eq!(words, ["001", "100", "110", "11110"]);

        let b = enumerate_codebook(&MatcherConfig::exact(p("0.3"), p("0.5"), 2)).unwrap();
        let words: Vec<String> = b.entries.iter().map(|e| e.codeword.to_string()).collect();
        assert_eq!(words, ["00001", "001", "011", "101"]);

        let b = enumerate_codebook(&MatcherConfig::exact(p("0.5"), p("0.3"), 0)).unwrap();
        assert_eq!(b.entries.len(), 1);
        assert!(b.entries[0].codeword.is_empty());
    }

    #[test]
    fn divergence_values() {
        assert!((optimal_n2().informational_divergence() - 0.074584).abs() < 5e-7);
        assert!((preview_n2().informational_divergence() - 1.6346).abs() < 5e-5);
        let identity = book("0.5", "0.5", 2, &[("00", "00"), ("01", "01"), ("10", "10"), ("11", "11")]);
        assert_eq!(identity.informational_divergence(), 0.0);
    }

    #[test]
    fn expected_length_values() {
        assert_eq!(preview_n2().expected_length(), 3.5);
        assert_eq!(optimal_n2().expected_length(), 2.25);
        let identity = book("0.5", "0.5", 2, &[("00", "00"), ("01", "01"), ("10", "10"), ("11", "11")]);
        assert_eq!(identity.expected_length(), 2.0);
    }

    #[test]
    fn coverage_values() {
        assert_eq!(optimal_n2().coverage_exact(), BigRational::one());
        // 0.063 + 0.063 + 0.147 + 0.07203
        assert_eq!(preview_n2().coverage_exact(), p("0.34503").to_rational());
        let b = enumerate_codebook(&MatcherConfig::exact(p("0.3"), p("0.5"), 2)).unwrap();
        assert_eq!(b.coverage_exact(), p("0.40625").to_rational());
    }

    #[test]
    fn rejects_invalid_books() {
        let pairs = |v: &[(&str, &str)]| -> Vec<(BitSequence, BitSequence)> {
            v.iter().map(|(s, c)| (s.parse().unwrap(), c.parse().unwrap())).collect()
        };
        // not prefix-free
        assert!(Codebook::from_pairs(p("0.5"), p("0.5"), 1, pairs(&[("0", "0"), ("1", "01")])).is_err());
        // not injective
        assert!(Codebook::from_pairs(p("0.5"), p("0.5"), 1, pairs(&[("0", "1"), ("1", "1")])).is_err());
        // missing source block
        assert!(Codebook::from_pairs(p("0.5"), p("0.5"), 1, pairs(&[("0", "0")])).is_err());
    }

    #[test]
    fn enumeration_cap() {
        let cfg = MatcherConfig::exact(p("0.5"), p("0.3"), 17);
        assert_eq!(enumerate_codebook(&cfg), Err(Error::BlockTooLarge { n: 17, limit: 16 }));
    }
}
