use proptest::prelude::*;

use projlab::autoform::standard_form;
use projlab::brownian::{advance, stream_rng};
use projlab::devmap::{ProjectiveStructure, Representation};
use projlab::fuchsian::{punctured_torus_group, Letter, Word};
use projlab::moebius::{c64, hyp_distance, HalfPlanePoint, LogNormProduct, MoebiusMap, SpherePoint, C64};
use projlab::stats::{ks_two_sample, spearman};

fn complex() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c64(a, b))
}

fn moebius() -> impl Strategy<Value = MoebiusMap> {
    (complex(), complex(), complex(), complex())
        .prop_filter("non-degenerate", |(a, b, c, d)| (a * d - b * c).norm() > 0.1)
        .prop_map(|(a, b, c, d)| MoebiusMap::new(a, b, c, d).unwrap())
}

fn half_plane() -> impl Strategy<Value = HalfPlanePoint> {
    (-4.0..4.0f64, 0.02..4.0f64).prop_map(|(x, y)| HalfPlanePoint(c64(x, y)))
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..4usize, 0..max).prop_map(|idx| {
        let mut w = Word::identity();
        for i in idx {
            w.push(Letter::ALL[i]);
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moebius_action_is_a_homomorphism(f in moebius(), g in moebius(), z in complex()) {
        let p = SpherePoint::from_complex(z);
        let lhs = (f * g).apply(p);
        let rhs = f.apply(g.apply(p));
        prop_assert!(lhs.chordal(&rhs) < 1e-9);
    }

    #[test]
    fn moebius_inverse_undoes_action(f in moebius(), z in complex()) {
        let p = SpherePoint::from_complex(z);
        prop_assert!(f.inverse().apply(f.apply(p)).chordal(&p) < 1e-9);
        prop_assert!((f * f.inverse()).distance_to_identity() < 1e-9);
    }

    #[test]
    fn trace_square_is_conjugation_invariant(f in moebius(), g in moebius()) {
        let conj = g * f * g.inverse();
        prop_assert!((conj.trace_sq() - f.trace_sq()).norm() < 1e-8 * (1.0 + f.trace_sq().norm()));
    }

    #[test]
    fn log_norm_product_matches_direct_product(ws in prop::collection::vec(moebius(), 1..12)) {
        let mut acc = LogNormProduct::new();
        let mut direct = MoebiusMap::identity();
        for m in &ws {
            acc.push(&m.renormalized());
            direct = direct * m.renormalized();
        }
        prop_assert!((acc.log_norm() - direct.matrix_norm().ln()).abs() < 1e-9);
    }

    #[test]
    fn group_isometries_preserve_distance(w in word(10), a in half_plane(), b in half_plane()) {
        let g = punctured_torus_group();
        let m = g.evaluate(&w);
        let d0 = hyp_distance(a, b);
        let d1 = hyp_distance(m.apply_half_plane(a), m.apply_half_plane(b));
        prop_assert!((d0 - d1).abs() < 1e-7 * (1.0 + d0));
    }

    #[test]
    fn word_times_inverse_is_identity(w in word(16)) {
        let g = punctured_torus_group();
        let m = g.evaluate(&w.concat(&w.inverse()));
        prop_assert!(m.distance_to_identity() < 1e-9);
        prop_assert!(w.concat(&w.inverse()).is_empty());
    }

    #[test]
    fn word_text_round_trips(w in word(20)) {
        let text = w.to_string();
        prop_assert_eq!(text.parse::<Word>().unwrap(), w);
    }

    #[test]
    fn conjugacy_key_is_conjugation_invariant(w in word(10), u in word(6)) {
        let conj = u.concat(&w).concat(&u.inverse());
        prop_assert_eq!(conj.conjugacy_key(), w.conjugacy_key());
    }

    #[test]
    fn reduction_lands_in_domain(tau in half_plane()) {
        let g = punctured_torus_group();
        let (t, e) = g.reduce(tau).unwrap();
        prop_assert!(g.in_domain(t, 1e-9));
        prop_assert!(hyp_distance(e.matrix.apply_half_plane(t), tau) < 1e-8);
        let m = g.evaluate(&e.word);
        prop_assert!(m.distance_up_to_sign(&e.matrix) < 1e-8 * (1.0 + m.max_abs()));
    }

    #[test]
    fn fuchsian_holonomy_is_trivial_deformation(w in word(8)) {
        let g = punctured_torus_group();
        let rep = Representation::fuchsian(&g);
        let a = rep.evaluate(&w);
        let b = g.evaluate(&w);
        prop_assert!(a.distance_up_to_sign(&b) < 1e-9 * (1.0 + b.max_abs()));
    }

    #[test]
    fn spearman_is_bounded_and_symmetric(x in prop::collection::vec(-10.0..10.0f64, 3..40), seed in 0u64..1000) {
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v * ((i as u64 * 7 + seed) % 5) as f64).collect();
        let r = spearman(&x, &y);
        if r.is_finite() {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&r));
            prop_assert!((r - spearman(&y, &x)).abs() < 1e-12);
        }
    }

    #[test]
    fn ks_two_sample_is_symmetric(a in prop::collection::vec(-5.0..5.0f64, 5..60), b in prop::collection::vec(-5.0..5.0f64, 5..60)) {
        let (d1, p1) = ks_two_sample(&a, &b);
        let (d2, p2) = ks_two_sample(&b, &a);
        prop_assert!((d1 - d2).abs() < 1e-12 && (p1 - p2).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&d1));
    }
}

#[test]
fn brownian_deck_word_tracks_the_lift() {
    let g = punctured_torus_group();
    let mut rng = stream_rng(4, 0);
    for _ in 0..20 {
        let end = advance(&g, g.base_point, Word::identity(), 5.0, 0.01, &mut rng, |_, _, _| {}).unwrap();
        assert!(g.in_domain(end.point, 1e-9));
        let lift = g.evaluate(&end.deck).apply_half_plane(end.point);
        assert!(lift.im() > 0.0 && lift.0.is_finite());
    }
}

#[test]
fn brownian_streams_are_reproducible_and_distinct() {
    let g = punctured_torus_group();
    let run = |stream| {
        let mut rng = stream_rng(11, stream);
        advance(&g, g.base_point, Word::identity(), 3.0, 0.01, &mut rng, |_, _, _| {}).unwrap()
    };
    let (a, b, c) = (run(0), run(0), run(1));
    assert_eq!(a.point.0, b.point.0);
    assert_eq!(a.deck, b.deck);
    assert_ne!(a.point.0, c.point.0);
}

#[test]
fn holonomy_is_parabolic_and_equivariant_for_complex_parameter() {
    let s = ProjectiveStructure::standard(c64(1.5, -2.0));
    let rep = s.holonomy().unwrap();
    assert!((rep.commutator().trace_sq() - 4.0).norm() < 1e-6);
    let g = s.group();
    let tau = HalfPlanePoint(c64(0.05, 1.1));
    let d = s.dev(tau).unwrap();
    for l in Letter::ALL {
        let lhs = s.dev(g.letter_matrix(l).apply_half_plane(tau)).unwrap();
        let rhs = rep.letter(l).apply(d);
        assert!(lhs.chordal(&rhs) < 1e-6, "{l:?}: {}", lhs.chordal(&rhs));
    }
}

#[test]
fn cusp_form_is_automorphic_for_long_words() {
    let form = standard_form();
    let g = punctured_torus_group();
    let tau = c64(-0.21, 0.93);
    for text in ["AB", "ABab", "AAbA", "bbAB"] {
        let m = g.evaluate(&text.parse::<Word>().unwrap());
        let j = m.c * tau + m.d;
        let lhs = form.q0(m.apply_half_plane(HalfPlanePoint(tau)).0);
        let rhs = form.q0(tau) * j.powi(4);
        assert!((lhs - rhs).norm() <= 1e-6 * rhs.norm(), "{text}");
    }
}
