//! Exhaustive search for the minimum-divergence fixed-to-variable code.
//!
//! A full binary tree with `2^n` leaves is summarized by the multiset of
//! `(zeros, ones)` counts along its leaf paths, since that is all the target
//! probability of a leaf depends on. For a fixed tree the best assignment
//! pairs source blocks and leaves in matching probability order, so only the
//! distinct multisets need to be scored.

use std::collections::HashMap;

use super::codebook::Codebook;
use crate::bits::BitSequence;
use crate::error::{Error, Result};
use crate::prob::Prob;

/// Largest block length the exhaustive search accepts.
pub const OPTIMAL_MAX_N: usize = 4;

type Leaves = Vec<(u8, u8)>;

/// How a leaf multiset was first built: `None` for the single leaf,
/// otherwise `(left leaves, left index, right index)`.
type Origin = Option<(usize, usize, usize)>;

struct Shapes {
    // by_leaves[k] holds every distinct multiset of trees with k leaves
    by_leaves: Vec<Vec<(Leaves, Origin)>>,
}

impl Shapes {
    fn build(max_leaves: usize) -> Self {
        let mut by_leaves: Vec<Vec<(Leaves, Origin)>> = vec![Vec::new(), vec![(vec![(0, 0)], None)]];
        for k in 2..=max_leaves {
            let mut seen: HashMap<Leaves, ()> = HashMap::new();
            let mut level = Vec::new();
            for i in 1..k {
                for (li, (left, _)) in by_leaves[i].iter().enumerate() {
                    for (ri, (right, _)) in by_leaves[k - i].iter().enumerate() {
                        let leaves = join(left, right);
                        if seen.insert(leaves.clone(), ()).is_none() {
                            level.push((leaves, Some((i, li, ri))));
                        }
                    }
                }
            }
            by_leaves.push(level);
        }
        Shapes { by_leaves }
    }

    fn codewords(&self, k: usize, idx: usize, prefix: &mut BitSequence, out: &mut Vec<BitSequence>) {
        match self.by_leaves[k][idx].1 {
            None => out.push(prefix.clone()),
            Some((i, li, ri)) => {
                prefix.push(false);
                self.codewords(i, li, prefix, out);
                prefix.pop();
                prefix.push(true);
                self.codewords(k - i, ri, prefix, out);
                prefix.pop();
            }
        }
    }
}

fn join(left: &[(u8, u8)], right: &[(u8, u8)]) -> Leaves {
    let mut leaves: Leaves = left
        .iter()
        .map(|&(z, o)| (z + 1, o))
        .chain(right.iter().map(|&(z, o)| (z, o + 1)))
        .collect();
    leaves.sort_unstable();
    leaves
}

/// Source blocks of length `n`, most probable first, ties in block order.
fn sources_by_probability(n: usize, p_src: Prob) -> Vec<BitSequence> {
    let a = p_src.to_f64().log2();
    let b = p_src.complement().to_f64().log2();
    let mut sources: Vec<(BitSequence, f64)> = (0..1u64 << n)
        .map(|i| {
            let s = BitSequence::from_u64(i, n);
            let w = s.count_zeros() as f64 * a + s.count_ones() as f64 * b;
            (s, w)
        })
        .collect();
    sources.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    sources.into_iter().map(|(s, _)| s).collect()
}

/// Finds the fixed-to-variable code of block length `n` with the smallest
/// informational divergence. Returns the codebook and its divergence.
pub fn optimal_codebook_bruteforce(n: usize, p_src: Prob, p_code: Prob) -> Result<(Codebook, f64)> {
    if n > OPTIMAL_MAX_N {
        return Err(Error::BlockTooLarge { n, limit: OPTIMAL_MAX_N });
    }
    let leaves = 1usize << n;
    let sources = sources_by_probability(n, p_src);
    let (sa, sb) = (p_src.to_f64().log2(), p_src.complement().to_f64().log2());
    // log2 P_S^n of each source block in descending order
    let src_log: Vec<f64> =
        sources.iter().map(|s| s.count_zeros() as f64 * sa + s.count_ones() as f64 * sb).collect();
    let src_p: Vec<f64> = src_log.iter().map(|l| l.exp2()).collect();
    let (ca, cb) = (p_code.to_f64().log2(), p_code.complement().to_f64().log2());

    let shapes = Shapes::build(leaves);
    let score = |multiset: &[(u8, u8)], buf: &mut Vec<(f64, usize)>| -> f64 {
        buf.clear();
        buf.extend(multiset.iter().enumerate().map(|(j, &(z, o))| (z as f64 * ca + o as f64 * cb, j)));
        buf.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
        buf.iter().enumerate().map(|(i, &(lq, _))| src_p[i] * (src_log[i] - lq)).sum()
    };

    let mut buf = Vec::with_capacity(leaves);
    let mut best: Option<(f64, usize)> = None;
    for (idx, (multiset, _)) in shapes.by_leaves[leaves].iter().enumerate() {
        let d = score(multiset, &mut buf);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, idx));
        }
    }
    let (_, idx) = best.expect("at least one tree");

    let mut words = Vec::with_capacity(leaves);
    shapes.codewords(leaves, idx, &mut BitSequence::new(), &mut words);
    let weight = |c: &BitSequence| c.count_zeros() as f64 * ca + c.count_ones() as f64 * cb;
    words.sort_by(|x, y| weight(y).total_cmp(&weight(x)).then_with(|| x.cmp(y)));
    let book = Codebook::from_pairs(p_src, p_code, n, sources.into_iter().zip(words))?;
    let kl = book.informational_divergence();
    Ok((book, kl))
}
