use std::collections::BTreeMap;

use otlab_core::dcomplex::fixture::{parse_fixture, same_complex, write_fixture, Manifest};
use otlab_core::dcomplex::synth::{assemble, manifest_of, random_sum, SynthConfig};
use otlab_core::dcomplex::{
    aeppli_dims, bott_chern_dims, build_double_complex, column_cohomology, de_rham_dims, row_cohomology,
    zigzag_decompose, DcError, GaussRat, Matrix, Orientation, Shape,
};
use otlab_core::Precision;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn elementary() -> Vec<Shape> {
    let mut v = vec![];
    for (d, p, q) in [(2, 1, 1), (1, 1, 1), (3, 1, 1), (2, 0, 2), (3, 3, 0), (4, 2, 0), (0, 2, 2), (1, 0, 0)] {
        v.push(Shape::Odd { d, p, q });
    }
    for orientation in [Orientation::Column, Orientation::Row] {
        for r in 1..=3 {
            let (p, q) = match orientation {
                Orientation::Column => (0, 3),
                Orientation::Row => (3, 0),
            };
            v.push(Shape::Even { orientation, r, p, q });
        }
    }
    v.push(Shape::Square { p: 1, q: 1 });
    v
}

#[test]
fn every_elementary_shape_is_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in elementary() {
        let c = assemble(&[s], &mut rng);
        let z = zigzag_decompose(&c).unwrap_or_else(|e| panic!("{s:?}: {e}"));
        assert!(manifest_of(&[s]).matches(&z), "{s:?} gave {z:?}");
        assert_eq!(c.total_dim(), s.size());
    }
}

#[test]
fn elementary_shapes_carry_the_tabulated_cohomology() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let table = |v: Vec<(i32, i32)>| {
        let mut t = BTreeMap::new();
        for b in v {
            *t.entry(b).or_insert(0usize) += 1;
        }
        t
    };
    for s in elementary() {
        let c = assemble(&[s], &mut rng);
        assert_eq!(column_cohomology(&c).unwrap(), table(s.column()), "{s:?} column");
        assert_eq!(row_cohomology(&c).unwrap(), table(s.row()), "{s:?} row");
        assert_eq!(bott_chern_dims(&c).unwrap(), table(s.bott_chern()), "{s:?} bc");
        assert_eq!(aeppli_dims(&c).unwrap(), table(s.aeppli()), "{s:?} aeppli");
        let dr: BTreeMap<i32, usize> = s.de_rham().map(|d| (d, 1)).into_iter().collect();
        assert_eq!(de_rham_dims(&c).unwrap(), dr, "{s:?} de rham");
    }
}

#[test]
fn squares_are_acyclic_for_every_cohomology() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let shapes = vec![Shape::Square { p: 0, q: 0 }, Shape::Square { p: 0, q: 0 }, Shape::Square { p: 1, q: 0 }];
    let c = assemble(&shapes, &mut rng);
    assert!(column_cohomology(&c).unwrap().is_empty());
    assert!(row_cohomology(&c).unwrap().is_empty());
    assert!(bott_chern_dims(&c).unwrap().is_empty());
    assert!(aeppli_dims(&c).unwrap().is_empty());
    assert!(de_rham_dims(&c).unwrap().is_empty());
    let z = zigzag_decompose(&c).unwrap();
    assert_eq!(z.square_count(), 3);
    assert!(z.odd.is_empty() && z.even.is_empty());
}

#[test]
fn random_sums_are_recovered_exactly() {
    let cfg = SynthConfig { box_size: 3, odd: 4, even: 3, squares: 2 };
    for seed in 0..12 {
        let (c, m) = random_sum(seed, &cfg);
        let z = zigzag_decompose(&c).unwrap();
        assert!(m.matches(&z), "seed {seed}");
        assert!(z.residual.iter().all(|r| r.passed));
    }
}

#[test]
fn float_mode_agrees_with_exact_mode() {
    let cfg = SynthConfig { box_size: 3, odd: 3, even: 2, squares: 1 };
    for seed in [3u64, 11] {
        let (c, m) = random_sum(seed, &cfg);
        let f = c.to_float(Precision::new(128));
        let z = zigzag_decompose(&f).unwrap();
        assert!(m.matches(&z), "seed {seed}: {z:?}");
    }
}

#[test]
fn exact_fixtures_round_trip() {
    let (c, m) = random_sum(42, &SynthConfig::default());
    let text = write_fixture(&c, Some(&m));
    let back = parse_fixture::<GaussRat>(&text, ()).unwrap();
    assert!(same_complex(&c, &back.complex));
    assert_eq!(back.expected, Some(m));
    assert_eq!(write_fixture(&back.complex, back.expected.as_ref()), text);
}

#[test]
fn non_complex_is_rejected() {
    // ∂ then ∂ nonzero
    let mut labels = BTreeMap::new();
    labels.insert((0, 0), vec!["a".to_string()]);
    labels.insert((1, 0), vec!["b".to_string()]);
    labels.insert((2, 0), vec!["c".to_string()]);
    let one = |r, c| {
        let mut m = Matrix::zeros(r, c, &());
        m.set(0, 0, GaussRat::real(1));
        m
    };
    let mut d1 = BTreeMap::new();
    d1.insert((0, 0), one(1, 1));
    d1.insert((1, 0), one(1, 1));
    let err = build_double_complex(labels, d1, BTreeMap::new(), ()).unwrap_err();
    assert!(matches!(err, DcError::NotAComplex { .. }), "{err:?}");
}

#[test]
fn empty_manifest_for_empty_complex() {
    let c = assemble(&[], &mut ChaCha8Rng::seed_from_u64(0));
    let z = zigzag_decompose(&c).unwrap();
    assert!(Manifest::from_decomposition(&z).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn decomposition_recovers_any_random_sum(seed in any::<u64>(), odd in 0usize..4, even in 0usize..3, squares in 0usize..2) {
        let cfg = SynthConfig { box_size: 3, odd, even, squares };
        let (c, m) = random_sum(seed, &cfg);
        let z = zigzag_decompose(&c).unwrap();
        prop_assert!(m.matches(&z));
        let total: usize = z.shapes().iter().map(|(s, k)| s.size() * k).sum();
        prop_assert_eq!(total, c.total_dim());
    }
}
