//! Divergence, length and rate analysis of ADM codebooks.

mod codebook;
mod compression;
mod monte_carlo;
mod optimal;
mod sweep;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub use codebook::{enumerate_codebook, enumerate_codebook_capped, Codebook, CodebookEntry, DEFAULT_ENUMERATION_CAP};
pub use compression::{compression_check, compression_check_mc, CompressionCheck};
pub use monte_carlo::{monte_carlo_report, trial_rng};
pub use optimal::{optimal_codebook_bruteforce, OPTIMAL_MAX_N};
pub use sweep::{format_sig, run_sweep, write_csv, ExperimentSpec, SweepMode, SweepRow, CSV_HEADER};

use crate::codec::MatcherConfig;
use crate::error::{Error, Result};
use crate::prob::Prob;

/// Divergence, length and rate figures for one codebook or Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub n: usize,
    /// `D(P_Y || P_Z^C)` in bits.
    pub kl_bits: f64,
    /// `E[l(Y)]` in bits.
    pub expected_length: f64,
    pub normalized_kl: f64,
    /// `n H(P_S) / E[l(Y)]`.
    pub rate: f64,
    /// `-log2(p_code (1 - p_code))`.
    pub kl_upper: f64,
    /// Standard error of `kl_bits`; zero for exact results.
    pub stderr: f64,
    pub length_stderr: f64,
    pub normalized_stderr: f64,
    pub rate_stderr: f64,
    /// Number of Monte Carlo trials; zero for exact results.
    pub trials: usize,
}

/// Binary entropy `H(p)` in bits.
pub fn entropy(p: Prob) -> f64 {
    let p0 = p.to_f64();
    let p1 = p.complement().to_f64();
    -(p0 * p0.log2() + p1 * p1.log2())
}

/// Upper bound on the divergence of every ADM codebook, independent of `n`.
pub fn kl_upper_bound(p_code: Prob) -> f64 {
    -(p_code.to_f64() * p_code.complement().to_f64()).log2()
}

/// `kl_upper_bound(p_code) / (n H(P_S))`.
pub fn normalized_kl_bound(cfg: &MatcherConfig) -> Result<f64> {
    if cfg.n == 0 {
        return Err(Error::InvalidArgument("normalized bound needs n >= 1".into()));
    }
    Ok(kl_upper_bound(cfg.p_code) / (cfg.n as f64 * entropy(cfg.p_src)))
}

pub(crate) fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits in 64 bits") as f64;
    top.log2() + shift as f64
}

/// `log2(r)` for a positive rational, accurate to about 1e-15 relative.
pub fn log2_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log2 of a non-positive number");
    match r.to_f64().filter(|v| v.is_normal()) {
        Some(v) => v.log2(),
        None => log2_biguint(r.numer().magnitude()) - log2_biguint(r.denom().magnitude()),
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        0.0
    } else {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(s: &str) -> Prob {
        s.parse().unwrap()
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(p("0.5")), 1.0);
        assert!((entropy(p("0.3")) - 0.8813).abs() < 5e-5);
        // -0.25 log2 0.25 - 0.75 log2 0.75 = 0.5 + 0.311278...
        assert!((entropy(p("0.25")) - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn kl_bound_values() {
        assert!((kl_upper_bound(p("0.3")) - 2.2515).abs() < 5e-5);
        assert_eq!(kl_upper_bound(p("0.5")), 2.0);
        assert!((kl_upper_bound(p("0.1")) - 3.4739).abs() < 5e-5);
    }

    #[test]
    fn normalized_bound_values() {
        let c = MatcherConfig::exact(p("0.5"), p("0.3"), 10_000);
        assert!((normalized_kl_bound(&c).unwrap() - 2.2515e-4).abs() < 5e-9);
        let c = MatcherConfig::exact(p("0.5"), p("0.3"), 100);
        assert!((normalized_kl_bound(&c).unwrap() - 2.2515e-2).abs() < 5e-7);
        let c = MatcherConfig::exact(p("0.5"), p("0.5"), 1);
        assert_eq!(normalized_kl_bound(&c).unwrap(), 2.0);
        assert!(normalized_kl_bound(&c.with_n(0)).is_err());
    }

    #[test]
    fn log2_of_huge_and_tiny_ratios() {
        let big = BigRational::from_integer(BigInt::from(1) << 2000u32);
        assert!((log2_rational(&big) - 2000.0).abs() < 1e-9);
        let tiny = BigRational::new(BigInt::from(3), BigInt::from(1) << 3000u32);
        assert!((log2_rational(&tiny) - (3f64.log2() - 3000.0)).abs() < 1e-9);
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!((log2_rational(&third) + 3f64.log2()).abs() < 1e-15);
    }
}
