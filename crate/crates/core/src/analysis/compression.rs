use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use super::{enumerate_codebook, entropy, monte_carlo_report};
use crate::codec::MatcherConfig;
use crate::error::{Error, Result};
use crate::prob::Prob;

/// Outcome of running the matcher as a compressor (`p_code = 1/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionCheck {
    pub n: usize,
    /// `E[l(Y)]`, exact for enumeration and a sample mean for Monte Carlo.
    pub expected_length: f64,
    pub length_stderr: f64,
    /// `n H(P_S)`.
    pub source_entropy: f64,
    pub divergence: f64,
    /// `n H(P_S) + 2`.
    pub bound: f64,
    /// `|E[l] - n H(P_S) - D|`; zero up to rounding for enumeration.
    pub identity_residual: f64,
    /// Whether every codeword has target probability exactly `2^-l(c)`, so
    /// that `E[l] = H(P_Y) + D` holds in rational terms. `None` for Monte Carlo.
    pub identity_exact: Option<bool>,
    pub pass: bool,
}

fn require_uniform_target(cfg: &MatcherConfig) -> Result<()> {
    if cfg.p_code != Prob::half() {
        return Err(Error::InvalidArgument(format!(
            "compression check needs p_code = 1/2, got {}",
            cfg.p_code
        )));
    }
    Ok(())
}

/// Enumerates the codebook and checks `E[l] <= n H(P_S) + 2` and the
/// identity `E[l] = n H(P_S) + D`.
pub fn compression_check(cfg: &MatcherConfig) -> Result<CompressionCheck> {
    require_uniform_target(cfg)?;
    let book = enumerate_codebook(cfg)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let identity_exact = book
        .entries
        .iter()
        .all(|e| e.p_z.clone() * Pow::pow(&two, e.codeword.len() as u32) == BigRational::one());
    let expected_length = book.expected_length();
    let divergence = book.informational_divergence();
    let source_entropy = cfg.n as f64 * entropy(cfg.p_src);
    let bound = source_entropy + 2.0;
    let identity_residual = (expected_length - source_entropy - divergence).abs();
    Ok(CompressionCheck {
        n: cfg.n,
        expected_length,
        length_stderr: 0.0,
        source_entropy,
        divergence,
        bound,
        identity_residual,
        identity_exact: Some(identity_exact),
        pass: identity_exact && expected_length <= bound,
    })
}

/// Monte Carlo version for large `n`: passes when the sample mean length is
/// within three standard errors of the bound.
pub fn compression_check_mc(cfg: &MatcherConfig, trials: usize, seed: u64) -> Result<CompressionCheck> {
    require_uniform_target(cfg)?;
    let r = monte_carlo_report(cfg, trials, seed)?;
    let source_entropy = cfg.n as f64 * entropy(cfg.p_src);
    let bound = source_entropy + 2.0;
    Ok(CompressionCheck {
        n: cfg.n,
        expected_length: r.expected_length,
        length_stderr: r.length_stderr,
        source_entropy,
        divergence: r.kl_bits,
        bound,
        identity_residual: (r.expected_length - source_entropy - r.kl_bits).abs(),
        identity_exact: None,
        pass: r.expected_length <= bound + 3.0 * r.length_stderr,
    })
}
