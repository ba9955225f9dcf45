use std::fmt;
use std::io::Write;

use super::{
    enumerate_codebook, entropy, monte_carlo_report, optimal_codebook_bruteforce, MatchReport, DEFAULT_ENUMERATION_CAP,
    OPTIMAL_MAX_N,
};
use crate::codec::MatcherConfig;
use crate::error::{Error, Result};
use crate::interval::BackendId;
use crate::prob::Prob;

pub const CSV_HEADER: &str = "n,mode,kl_bits,kl_normalized,expected_length,rate,stderr,kl_upper_bound,entropy_target";

/// Parameters of a divergence and rate sweep over block lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub p_src: Prob,
    pub p_code: Prob,
    /// Block lengths evaluated by exhaustive enumeration.
    pub exact_ns: Vec<usize>,
    /// Block lengths evaluated by Monte Carlo.
    pub mc_ns: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Backend for the Monte Carlo rows. Enumeration always uses exact arithmetic.
    pub backend: BackendId,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if let Some(&n) = self.exact_ns.iter().find(|&&n| n > DEFAULT_ENUMERATION_CAP) {
            return Err(Error::BlockTooLarge { n, limit: DEFAULT_ENUMERATION_CAP });
        }
        if !self.mc_ns.is_empty() && self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        self.backend.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exact,
    Mc,
    OptimalOracle,
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::Exact => "exact",
            SweepMode::Mc => "mc",
            SweepMode::OptimalOracle => "optimal-oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub mode: SweepMode,
    pub report: MatchReport,
    /// `H(P_Z)`, the value the rate converges to.
    pub entropy_target: f64,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let r = &self.report;
        format!(
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            self.mode,
            format_sig(r.kl_bits),
            format_sig(r.normalized_kl),
            format_sig(r.expected_length),
            format_sig(r.rate),
            format_sig(r.stderr),
            format_sig(r.kl_upper),
            format_sig(self.entropy_target),
        )
    }
}

/// Runs the sweep. Rows come out as: for each enumerated `n` its exact row
/// followed by the optimal-code row when `n` is small enough, then the Monte
/// Carlo rows.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let target = entropy(spec.p_code);
    let row = |mode, report| SweepRow { mode, report, entropy_target: target };
    let mut rows = Vec::new();
    for &n in &spec.exact_ns {
        let cfg = MatcherConfig::exact(spec.p_src, spec.p_code, n);
        rows.push(row(SweepMode::Exact, enumerate_codebook(&cfg)?.report()));
        if n <= OPTIMAL_MAX_N {
            let (book, _) = optimal_codebook_bruteforce(n, spec.p_src, spec.p_code)?;
            rows.push(row(SweepMode::OptimalOracle, book.report()));
        }
    }
    for &n in &spec.mc_ns {
        let cfg = MatcherConfig::new(spec.p_src, spec.p_code, n, spec.backend)?;
        rows.push(row(SweepMode::Mc, monte_carlo_report(&cfg, spec.trials, spec.seed)?));
    }
    Ok(rows)
}

pub fn write_csv(rows: &[SweepRow], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.to_csv())?;
    }
    Ok(())
}

/// Formats with 12 significant digits, switching to exponent notation for
/// very small or very large magnitudes like C's `%.12g`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
