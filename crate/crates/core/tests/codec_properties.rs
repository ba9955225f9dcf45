use std::collections::HashSet;

use adm_core::codec::{Matcher, TraceEvent};
use adm_core::interval::{ExactArithmetic, FixedArithmetic};
use adm_core::{decode, encode, BackendId, BitSequence, Error, MatcherConfig, Prob};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rayon::prelude::*;

const P_CODE_GRID: [&str; 5] = ["0.1", "0.2", "0.3", "0.4", "0.5"];
const P_SRC_GRID: [&str; 3] = ["0.5", "0.3", "0.8"];

fn p(s: &str) -> Prob {
    s.parse().unwrap()
}

fn grid() -> impl Iterator<Item = (Prob, Prob)> {
    P_SRC_GRID.iter().flat_map(|s| P_CODE_GRID.iter().map(move |c| (p(s), p(c))))
}

/// Largest exhaustively tested block length: 12 for a uniform source, 10
/// for the skewed ones, which are slower on the exact backend.
fn max_exhaustive_n(p_src: Prob) -> usize {
    if p_src == Prob::half() {
        12
    } else {
        10
    }
}

fn all_blocks(n: usize) -> impl ParallelIterator<Item = BitSequence> {
    (0..1u64 << n).into_par_iter().map(move |i| BitSequence::from_u64(i, n))
}

fn rat(p: Prob) -> BigRational {
    BigRational::new(BigInt::from(p.numerator()), BigInt::from(p.denominator()))
}

/// Textbook decoder on exact rationals: read codeword bits until the code
/// interval lies inside one of the two source candidates.
fn reference_decode(codeword: &BitSequence, p_src: Prob, p_code: Prob, n: usize) -> Option<(BitSequence, usize)> {
    let (ps, pc) = (rat(p_src), rat(p_code));
    let (mut clo, mut chi) = (BigRational::zero(), BigRational::one());
    let (mut slo, mut shi) = (BigRational::zero(), BigRational::one());
    let mut pos = 0;
    let mut out = BitSequence::new();
    for _ in 0..n {
        let split = &slo + &ps * (&shi - &slo);
        loop {
            if slo <= clo && chi <= split {
                out.push(false);
                shi = split;
                break;
            }
            if split <= clo && chi <= shi {
                out.push(true);
                slo = split;
                break;
            }
            let bit = codeword.get(pos)?;
            pos += 1;
            let cs = &clo + &pc * (&chi - &clo);
            if bit {
                clo = cs;
            } else {
                chi = cs;
            }
        }
    }
    Some((out, pos))
}

#[test]
fn exhaustive_roundtrip_both_backends() {
    for (ps, pc) in grid() {
        for n in 0..=max_exhaustive_n(ps) {
            for backend in [BackendId::Exact, BackendId::default_fixed()] {
                let cfg = MatcherConfig::new(ps, pc, n, backend).unwrap();
                let mut words: Vec<BitSequence> = all_blocks(n)
                    .map(|s| {
                        let c = encode(&s, &cfg).unwrap();
                        let d = decode(&c, &cfg).unwrap();
                        assert_eq!(d.source_word, s, "{cfg:?} codeword {c}");
                        assert!(d.consumed_bits <= c.len());
                        c
                    })
                    .collect();
                assert_eq!(words.iter().collect::<HashSet<_>>().len(), words.len());
                words.sort();
                assert!(words.windows(2).all(|w| !w[1].starts_with(&w[0])), "{cfg:?} is not prefix-free");
            }
        }
    }
}

#[test]
fn decoder_matches_reference_decoder() {
    for (ps, pc) in grid() {
        for n in 1..=8 {
            let cfg = MatcherConfig::exact(ps, pc, n);
            all_blocks(n).for_each(|s| {
                let c = encode(&s, &cfg).unwrap();
                let d = decode(&c, &cfg).unwrap();
                let (src, consumed) = reference_decode(&c, ps, pc, n).expect("reference decoder ran out of bits");
                assert_eq!(d.source_word, src);
                assert_eq!(d.consumed_bits, consumed, "{cfg:?} {s} -> {c}");
            });
        }
    }
}

#[test]
fn encoder_and_decoder_traces_agree() {
    let cfg = MatcherConfig::parse("0.5", "0.3", 10, BackendId::default_fixed()).unwrap();
    let m = Matcher::new(FixedArithmetic::default(), cfg.p_src, cfg.p_code, cfg.n);
    for i in 0..1u64 << cfg.n {
        let s = BitSequence::from_u64(i, cfg.n);
        let mut enc = m.encoder().with_trace();
        for b in s.iter() {
            enc.push(b).unwrap();
        }
        let enc_trace = enc.trace().unwrap().to_vec();
        let c = enc.finish().unwrap().codeword;
        let (r, dec_trace) = m.decoder().with_trace().decode_traced(&c).unwrap();
        assert_eq!(r.source_word, s);
        assert_eq!(enc_trace, dec_trace);
    }
}

#[test]
fn fixed_backend_rescales_on_long_blocks() {
    let m = Matcher::new(FixedArithmetic::default(), p("0.5"), p("0.3"), 500);
    let s: BitSequence = (0..500).map(|i| i % 3 == 0).collect();
    let mut enc = m.encoder().with_trace();
    for b in s.iter() {
        enc.push(b).unwrap();
    }
    let scales = enc
        .trace()
        .unwrap()
        .iter()
        .filter(|e| matches!(e, TraceEvent::Emit { scale: Some(_), .. }))
        .count();
    assert!(scales > 100, "{scales}");
}

#[test]
fn fixed_backend_equals_exact_on_quantized_probabilities() {
    let arith = FixedArithmetic::default();
    let quantized = |q: Prob| Prob::new(q.quantize(arith.fraction_bits()), 1 << arith.fraction_bits()).unwrap();
    for (ps, pc) in grid() {
        for n in 0..=max_exhaustive_n(ps) {
            let fixed = MatcherConfig::new(ps, pc, n, BackendId::default_fixed()).unwrap();
            let exact = MatcherConfig::exact(quantized(ps), quantized(pc), n);
            all_blocks(n).for_each(|s| {
                assert_eq!(encode(&s, &fixed).unwrap(), encode(&s, &exact).unwrap(), "{fixed:?} {s}");
            });
        }
    }
}

#[test]
fn interval_ratio_bound_is_exact() {
    for pc in P_CODE_GRID.map(p) {
        let upper = BigRational::one() / (rat(pc) * rat(pc.complement()));
        for n in 1..=12 {
            let m = Matcher::new(ExactArithmetic, p("0.5"), pc, n);
            all_blocks(n).for_each(|s| {
                let out = m.encode_detailed(&s).unwrap();
                let ratio = out.final_src.width() / out.final_code.width();
                assert!(ratio >= BigRational::one() && ratio <= upper, "{s}: {ratio}");
            });
        }
    }
}

#[test]
fn finalization_picks_the_wider_candidate() {
    for (ps, pc) in grid() {
        for n in 1..=8 {
            let m = Matcher::new(ExactArithmetic, ps, pc, n);
            all_blocks(n).for_each(|s| {
                let out = m.encode_detailed(&s).unwrap();
                let fin = out.finalization.unwrap();
                let (lo, hi) = (fin.low.candidate.width(), fin.high.candidate.width());
                if fin.chose_high {
                    assert!(hi > lo);
                } else {
                    assert!(lo >= hi);
                }
                let chosen = fin.chosen();
                assert!(chosen.src.low() <= chosen.candidate.low() && chosen.candidate.high() <= chosen.src.high());
                assert!(chosen.candidate != chosen.src);
            });
        }
    }
}

#[test]
fn invalid_probabilities_are_rejected() {
    for bad in ["0", "1", "1.0", "-0.2", "1.5", "abc", "0.3x"] {
        assert!(matches!(bad.parse::<Prob>(), Err(Error::InvalidProbability(_))), "{bad}");
    }
}

fn decimal_prob() -> impl Strategy<Value = Prob> {
    (1u64..100).prop_map(|k| Prob::new(k, 100).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn long_blocks_roundtrip_on_fixed_backend(
        ps in decimal_prob(),
        pc in prop_oneof![Just(p("0.1")), Just(p("0.3")), Just(p("0.5")), Just(p("0.7"))],
        bits in proptest::collection::vec(any::<bool>(), 0..3000),
    ) {
        let s = BitSequence::from(bits);
        let cfg = MatcherConfig::new(ps, pc, s.len(), BackendId::default_fixed()).unwrap();
        let c = encode(&s, &cfg).unwrap();
        prop_assert_eq!(decode(&c, &cfg).unwrap().source_word, s);
    }

    #[test]
    fn small_blocks_roundtrip_on_exact_backend(
        ps in decimal_prob(),
        pc in decimal_prob(),
        bits in proptest::collection::vec(any::<bool>(), 0..24),
    ) {
        let s = BitSequence::from(bits);
        let cfg = MatcherConfig::exact(ps, pc, s.len());
        let c = encode(&s, &cfg).unwrap();
        prop_assert_eq!(decode(&c, &cfg).unwrap().source_word, s);
    }

    #[test]
    fn trailing_bits_are_ignored(
        bits in proptest::collection::vec(any::<bool>(), 1..200),
        tail in proptest::collection::vec(any::<bool>(), 0..40),
    ) {
        let s = BitSequence::from(bits);
        let cfg = MatcherConfig::parse("0.5", "0.3", s.len(), BackendId::default_fixed()).unwrap();
        let mut c = encode(&s, &cfg).unwrap();
        let clean = decode(&c, &cfg).unwrap();
        c.extend_from(&BitSequence::from(tail));
        prop_assert_eq!(decode(&c, &cfg).unwrap(), clean);
    }

    #[test]
    fn truncated_codewords_are_reported(
        bits in proptest::collection::vec(any::<bool>(), 1..200),
        cut in 1usize..64,
    ) {
        let s = BitSequence::from(bits);
        let cfg = MatcherConfig::parse("0.5", "0.3", s.len(), BackendId::default_fixed()).unwrap();
        let c = encode(&s, &cfg).unwrap();
        let d = decode(&c, &cfg).unwrap();
        // dropping a bit the decoder needs must fail, never mis-decode
        let keep = d.consumed_bits.saturating_sub(cut);
        let short = c.slice(0, keep);
        let truncated = matches!(decode(&short, &cfg), Err(Error::Truncated { .. }));
        prop_assert!(truncated);
    }
}
