use choimap::forms::{form_from_map, map_from_form};
use choimap::maps::random::{random_hermitian, random_hermitian_preserving, random_real_preserving};
use choimap::maps::{MapSpec, SymmetricRestriction};
use choimap::matrix::rank_one_projector;
use choimap::poly::{rat, MPoly};
use choimap::positivity::{random_unit_vector, stream_rng};
use choimap::{BuiltinMap, ComplexMap, ComplexMatrix, Matrix};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_matrix() -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 9)
        .prop_map(|v| Matrix::from_fn(3, |r, c| Complex64::new(v[3 * r + c].0, v[3 * r + c].1)))
}

fn scalar() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn small_poly() -> impl Strategy<Value = MPoly> {
    let names = ["lam", "a1", "a2", "t"];
    prop::collection::vec((-4i64..=4, 0usize..4, 0u32..3), 1..5).prop_map(move |terms| {
        terms.iter().fold(MPoly::zero(), |acc, &(c, v, e)| {
            let mut m = MPoly::constant(rat(c));
            for _ in 0..e {
                m = &m * &MPoly::named(names[v]).unwrap();
            }
            acc + m
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn apply_is_complex_linear(seed in any::<u64>(), x in complex_matrix(), y in complex_matrix(), a in scalar(), b in scalar()) {
        let m = random_hermitian_preserving(&mut stream_rng(seed, 0), 3);
        let lhs = m.apply(&Matrix::from_fn(3, |r, c| a * x[(r, c)] + b * y[(r, c)])).unwrap();
        let (fx, fy) = (m.apply(&x).unwrap(), m.apply(&y).unwrap());
        let rhs = Matrix::from_fn(3, |r, c| a * fx[(r, c)] + b * fy[(r, c)]);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn determinant_is_product_of_eigenvalues(seed in any::<u64>()) {
        let a = random_hermitian(&mut stream_rng(seed, 1), 3);
        let eig = a.eigenvalues_hermitian(1e-12).unwrap();
        let prod: f64 = eig.iter().product();
        let det = a.determinant();
        prop_assert!(det.im.abs() < 1e-12);
        prop_assert!((det.re - prod).abs() <= 1e-9 * prod.abs().max(1.0));
        prop_assert!(eig.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn choi_map_is_positive_on_rank_one(seed in any::<u64>()) {
        let x = random_unit_vector(&mut stream_rng(seed, 2), 3);
        for which in [BuiltinMap::Choi, BuiltinMap::Psi1, BuiltinMap::Psi3] {
            let img = ComplexMap::builtin(which).apply(&rank_one_projector(&x).unwrap()).unwrap();
            prop_assert!(img.eigenvalues_hermitian(1e-12).unwrap()[0] >= -1e-10);
        }
    }

    #[test]
    fn double_transpose_composition_is_identity(seed in any::<u64>()) {
        let m = random_hermitian_preserving(&mut stream_rng(seed, 3), 3);
        prop_assert!(m.compose_transpose().compose_transpose().maps_equal(&m, 1e-15));
    }

    #[test]
    fn map_spec_json_round_trip(seed in any::<u64>()) {
        let m = random_hermitian_preserving(&mut stream_rng(seed, 4), 3);
        let text = serde_json::to_string(&MapSpec::from_map(&m)).unwrap();
        let back = serde_json::from_str::<MapSpec>(&text).unwrap().into_map().unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn real_preserving_maps_satisfy_proposition(seed in any::<u64>(), hermitian in any::<bool>()) {
        let m = random_real_preserving(&mut stream_rng(seed, 5), 3, hermitian);
        prop_assert!(m.proposition_hermitian_check(1e-12).unwrap());
        prop_assert_eq!(m.preserves_hermitian(1e-12), hermitian);
    }

    #[test]
    fn form_round_trip_on_integer_restrictions(entries in prop::collection::vec(-5i32..=5, 54)) {
        let images = (0..6)
            .map(|k| Matrix::from_fn(3, |r, c| f64::from(entries[9 * k + 3 * r.min(c) + r.max(c)])))
            .collect();
        let m = SymmetricRestriction::new(3, images).unwrap();
        prop_assert_eq!(map_from_form(&form_from_map(&m)), m);
    }

    #[test]
    fn polynomial_ring_laws(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }
}
