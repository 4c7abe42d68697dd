//! Cross-cutting invariants on randomized valid templates.

mod common;

use common::ChainSampler;
use pgn_core::analysis::{analyze_all, contraction_average, pair_count_reference};
use pgn_core::formulas::delta_mn;
use pgn_core::potential::{check_phi_inequality, potential_phi, potential_psi};
use pgn_core::rational::{int, rat, to_f64, Rational};
use pgn_core::standard::{build_two_param, TwoParamSpec};
use pgn_core::template::Template;

#[test]
fn random_chains_are_valid_balanced_templates() {
    let mut sampler = ChainSampler::new(11);
    for _ in 0..120 {
        let (_, t) = sampler.sample();
        let report = t.validate();
        assert!(report.ok(), "{:?}", report.violations);
        assert!(t.balance_check());
    }
}

#[test]
fn delta_partition_identity_and_cardinalities() {
    // delta + #{(i+, i-) : i+ > i-} = mn with |S+| = m, |S-| = n, and the
    // streaming delta equals the quadratic pair count.
    let mut sampler = ChainSampler::new(23);
    for _ in 0..150 {
        let (dims, t) = sampler.sample();
        for a in analyze_all(&t).unwrap() {
            assert_eq!(a.s_plus.len(), dims.m);
            assert_eq!(a.s_minus.len(), dims.n);
            assert_eq!(a.delta, pair_count_reference(&a.s_plus, &a.s_minus));
            let anti = a
                .s_plus
                .iter()
                .flat_map(|&p| a.s_minus.iter().map(move |&q| (p, q)))
                .filter(|(p, q)| p > q)
                .count();
            assert_eq!(a.delta + anti, dims.mn());
            // Every block has nonnegative M with M+ + M- = block size.
            for ((p, q), (mp, mm)) in a.equality_blocks.iter().zip(&a.block_counts) {
                assert_eq!(mp + mm, q - p);
            }
        }
    }
}

#[test]
fn averages_are_additive_on_random_templates() {
    let mut sampler = ChainSampler::new(37);
    for _ in 0..60 {
        let (_, t) = sampler.sample();
        let t0 = t.start_time().clone();
        let t_end = t.end_time().clone();
        let third = (&t_end - &t0) / int(3);
        let a = t0.clone();
        let b = &t0 + &third;
        let c = t_end.clone();
        let whole = contraction_average(&t, &a, &c).unwrap() * (&c - &a);
        let left = contraction_average(&t, &a, &b).unwrap() * (&b - &a);
        let right = contraction_average(&t, &b, &c).unwrap() * (&c - &b);
        assert_eq!(whole, left + right);
    }
}

#[test]
fn phi_never_fails_and_psi_dominates() {
    let mut sampler = ChainSampler::new(51);
    for _ in 0..80 {
        let (dims, t) = sampler.sample();
        for r in check_phi_inequality(&t).unwrap() {
            assert!(r.ok, "phi inequality failed: {r:?}");
        }
        if dims.n >= 2 {
            // psi >= phi >= 0 pointwise on a few rational samples.
            let t0 = t.start_time().clone();
            let span = t.end_time() - &t0;
            for k in 0..=8i64 {
                let time = &t0 + &span * rat(k, 8);
                let phi = potential_phi(&t, &time).unwrap();
                let psi = potential_psi(&t, &time).unwrap();
                assert!(phi >= int(0));
                assert!(psi >= phi);
            }
        }
    }
}

#[test]
fn template_json_round_trip_random() {
    let mut sampler = ChainSampler::new(67);
    for _ in 0..40 {
        let (_, t) = sampler.sample();
        let s = serde_json::to_string(&t).unwrap();
        let back: Template = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}

#[test]
fn rates_bounded_by_mn_and_ordered() {
    // 0 <= lower <= upper <= mn on equivariant families.
    for (m, n, taun, taud, lam) in [
        (1usize, 2usize, 1i64, 8i64, 4i64),
        (2, 1, 1, 5, 6),
        (2, 2, 1, 9, 3),
        (3, 2, 1, 7, 5),
        (1, 3, 1, 6, 9),
    ] {
        let dims = pgn_core::dims::Dims::new(m, n).unwrap();
        let spec = TwoParamSpec {
            dims,
            tau: rat(taun, taud),
            lambda: int(lam),
        };
        let t = build_two_param(&spec).unwrap();
        let r = pgn_core::rates::asymptotic_rates(&t).unwrap();
        let lower = r.lower.unwrap();
        let upper = r.upper.unwrap();
        assert!(int(0) <= lower);
        assert!(lower <= upper);
        assert!(upper <= int(dims.mn() as i64));
        // Equivariant averages repeat: Delta(f, lambda T) = Delta(f, T) for
        // T past the anchor.
        for k in 1..=3i64 {
            let t1 = int(1) + rat(k, 3);
            let a1 = contraction_average(&t, &int(0), &t1).unwrap();
            let a2 = contraction_average(&t, &int(0), &(int(lam) * &t1)).unwrap();
            let drift = to_f64(&(&a1 - &a2));
            // Not exactly equal (the prefix does not scale), but the
            // window-averages over scaled periods are exactly equal:
            let w1 = contraction_average(&t, &t1, &(int(lam) * &t1)).unwrap();
            let w2 = contraction_average(
                &t,
                &(int(lam) * &t1),
                &(int(lam) * int(lam) * &t1),
            )
            .unwrap();
            assert_eq!(w1, w2);
            assert!(drift.abs() < 2.0);
        }
    }
}

#[test]
fn delta_mn_matches_two_interval_average_everywhere() {
    // The zero-pinned pair realizes delta_mn for every shape up to (5, 5).
    for m in 1..=5 {
        for n in 1..=5 {
            let dims = pgn_core::dims::Dims::new(m, n).unwrap();
            let pair = pgn_core::standard::build_standard_pair(
                dims,
                (int(0), int(0)),
                (int(3), int(0)),
            )
            .unwrap();
            assert_eq!(
                contraction_average(&pair, &int(0), &int(3)).unwrap(),
                delta_mn(dims)
            );
        }
    }
}

#[test]
fn negation_preserves_delta_profile() {
    let mut sampler = ChainSampler::new(91);
    for _ in 0..40 {
        let (_, t) = sampler.sample();
        let neg = t.negate();
        assert!(neg.validate().ok());
        let a: Vec<usize> = analyze_all(&t).unwrap().iter().map(|x| x.delta).collect();
        let b: Vec<usize> = analyze_all(&neg).unwrap().iter().map(|x| x.delta).collect();
        assert_eq!(a, b);
    }
}

#[test]
fn score_concatenation_is_block_exact() {
    use pgn_core::game::{score_from_counts, GameMode};
    // Constant blocks: concatenating [N; a] and [N; b] keeps the score at
    // log N / (-log beta) exactly.
    let counts: Vec<usize> = std::iter::repeat(4).take(13).collect();
    let s = score_from_counts(&counts, 0.5, GameMode::Hausdorff);
    assert_eq!(s.score, 2.0);
    assert_eq!(s.liminf_estimate, s.limsup_estimate);
    // Alternating 1/4 at beta = 1/2 averages to 1.
    let alt: Vec<usize> = (0..400).map(|i| if i % 2 == 0 { 1 } else { 4 }).collect();
    let s = score_from_counts(&alt, 0.5, GameMode::Hausdorff);
    assert!((s.liminf_estimate - 1.0).abs() < 0.01);
    assert!((s.limsup_estimate - 1.0).abs() < 0.01);
}

#[test]
fn convex_hull_function_of_partial_sums() {
    // At any fixed time of a valid template, q -> F_q is convex, so the
    // hull of the partial-sum points reproduces them.
    let mut sampler = ChainSampler::new(101);
    for _ in 0..30 {
        let (dims, t) = sampler.sample();
        let time = t.start_time() + (t.end_time() - t.start_time()) / int(2);
        let v = t.value_at(&time).unwrap();
        let mut pts: Vec<(Rational, Rational)> = vec![(int(0), int(0))];
        let mut acc = int(0);
        for (q, x) in v.iter().enumerate() {
            acc += x;
            pts.push((int(q as i64 + 1), acc.clone()));
        }
        let hull = pgn_core::hull::convex_hull_function(&pts).unwrap();
        for (x, y) in &pts {
            assert_eq!(&hull.eval(x).unwrap(), y);
        }
        assert_eq!(pts.len(), dims.d() + 1);
    }
}
