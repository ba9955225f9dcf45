use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{entropy, kl_upper_bound, MatchReport};
use crate::bits::BitSequence;
use crate::codec::{encode, MatcherConfig};
use crate::error::{Error, Result};
use crate::prob::Prob;

/// The generator for one trial. Each trial has its own stream, so results do
/// not depend on how trials are scheduled across threads.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws `n` bits with `P(0) = p` exactly.
pub fn sample_block(rng: &mut impl Rng, p: Prob, n: usize) -> BitSequence {
    let (num, den) = (p.numerator(), p.denominator());
    (0..n).map(|_| rng.random_range(0..den) >= num).collect()
}

struct Trial {
    kl: f64,
    len: f64,
}

fn run_trial(cfg: &MatcherConfig, seed: u64, index: u64, logs: &[f64; 4]) -> Result<Trial> {
    let mut rng = trial_rng(seed, index);
    let source = sample_block(&mut rng, cfg.p_src, cfg.n);
    let codeword = encode(&source, cfg)?;
    let [s0, s1, c0, c1] = *logs;
    let kl = source.count_zeros() as f64 * s0 + source.count_ones() as f64 * s1
        - codeword.count_zeros() as f64 * c0
        - codeword.count_ones() as f64 * c1;
    Ok(Trial { kl, len: codeword.len() as f64 })
}

fn mean_and_stderr(xs: impl Iterator<Item = f64> + Clone, count: usize) -> (f64, f64) {
    let n = count as f64;
    let mean = xs.clone().sum::<f64>() / n;
    if count < 2 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Estimates divergence, expected length and rate from `trials` random
/// source blocks. The result depends only on `(cfg, trials, seed)`.
pub fn monte_carlo_report(cfg: &MatcherConfig, trials: usize, seed: u64) -> Result<MatchReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let logs = [
        cfg.p_src.to_f64().log2(),
        cfg.p_src.complement().to_f64().log2(),
        cfg.p_code.to_f64().log2(),
        cfg.p_code.complement().to_f64().log2(),
    ];
    let samples = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(cfg, seed, i, &logs))
        .collect::<Result<Vec<_>>>()?;
    // summation runs in trial order whatever the thread schedule was
    let (kl, kl_se) = mean_and_stderr(samples.iter().map(|t| t.kl), trials);
    let (len, len_se) = mean_and_stderr(samples.iter().map(|t| t.len), trials);
    let nh = cfg.n as f64 * entropy(cfg.p_src);
    let positive = len > 0.0;
    Ok(MatchReport {
        n: cfg.n,
        kl_bits: kl,
        expected_length: len,
        normalized_kl: if positive { kl / len } else { 0.0 },
        rate: if positive { nh / len } else { 0.0 },
        kl_upper: kl_upper_bound(cfg.p_code),
        stderr: kl_se,
        length_stderr: len_se,
        normalized_stderr: if positive { kl_se / len } else { 0.0 },
        rate_stderr: if positive { nh * len_se / (len * len) } else { 0.0 },
        trials,
    })
}
