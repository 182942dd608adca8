mod common;

use certnorm::cone::hilbert_distance;
use certnorm::norms::dual_weights;
use certnorm::{NormSpec, Side, WeightedPTerm};
use proptest::prelude::*;

fn shaped_spec() -> impl Strategy<Value = (NormSpec, Vec<f64>, Vec<f64>)> {
    (1usize..=6, 0u8..5, any::<u64>()).prop_map(|(n, shape, seed)| {
        let mut r = common::rng(seed);
        let spec = common::random_spec(&mut r, n, shape);
        let x = common::positive_vector(&mut r, n);
        let y = common::positive_vector(&mut r, n);
        (spec, x, y)
    })
}

fn side_eval(spec: &NormSpec, side: Side, x: &[f64]) -> Option<f64> {
    match side {
        Side::Primal => spec.eval(x).ok(),
        Side::Dual => spec.eval_dual(x).ok(),
    }
}

fn other(side: Side) -> Side {
    match side {
        Side::Primal => Side::Dual,
        Side::Dual => Side::Primal,
    }
}

proptest! {
    #[test]
    fn duality_map_attains_hoelder_equality((spec, x, _) in shaped_spec()) {
        let side = spec.working_side();
        let j = spec.duality_map(&x).unwrap();
        let pairing: f64 = j.iter().zip(&x).map(|(a, b)| a * b).sum();
        let norm = side_eval(&spec, side, &x).unwrap();
        prop_assert!((pairing - norm).abs() <= 1e-10 * norm);
        if let Some(dual) = side_eval(&spec, other(side), &j) {
            prop_assert!((dual - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn bidual_of_weighted_leaf(
        (w, x) in (1usize..7).prop_flat_map(|n| (
            prop::collection::vec(1e-2..1e2f64, n),
            prop::collection::vec(0.0..1e2f64, n),
        )),
        p in 1.1..10.0f64,
    ) {
        let spec = NormSpec::weighted(w.clone(), p).unwrap();
        let q = p / (p - 1.0);
        let dual = NormSpec::weighted(dual_weights(&w, p).unwrap(), q).unwrap();
        let a = spec.eval(&x).unwrap();
        let b = dual.eval_dual(&x).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn strictly_monotone((spec, x, y) in shaped_spec(), k in 0usize..6) {
        let i = k % x.len();
        let mut bigger = x.clone();
        bigger[i] += y[i];
        if let (Ok(a), Ok(b)) = (spec.eval(&x), spec.eval(&bigger)) {
            prop_assert!(a < b);
        }
        let (a, b) = (spec.eval_dual(&x), spec.eval_dual(&bigger));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!(a < b);
        }
    }

    #[test]
    fn duality_map_contracts_hilbert_distance((spec, x, y) in shaped_spec()) {
        let bound = spec.birkhoff_bound_j(spec.working_side()).unwrap();
        let d = hilbert_distance(&x, &y).unwrap();
        let jd = hilbert_distance(&spec.duality_map(&x).unwrap(), &spec.duality_map(&y).unwrap())
            .unwrap();
        prop_assert!(jd <= bound * d * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn single_term_composition_is_the_leaf(
        (w, x) in (1usize..7).prop_flat_map(|n| (
            prop::collection::vec(1e-2..1e2f64, n),
            prop::collection::vec(0.0..1e2f64, n),
        )),
        p in 1.1..10.0f64,
    ) {
        let leaf = NormSpec::weighted(w.clone(), p).unwrap();
        let single = NormSpec::composed(vec![WeightedPTerm::new(w, p).unwrap()], p).unwrap();
        let (a, b) = (leaf.eval(&x).unwrap(), single.eval(&x).unwrap());
        prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * a.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn json_round_trip((spec, x, _) in shaped_spec()) {
        let back = NormSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(back.dim(), spec.dim());
        let side = spec.working_side();
        prop_assert_eq!(side_eval(&back, side, &x), side_eval(&spec, side, &x));
    }
}

#[test]
fn composed_example_from_block_norms() {
    // ||(x1, x2)||_2 and |x3| combined in l^2: sqrt(4 + 9 + 16) on (2, 3, 4)
    let spec = NormSpec::composed(
        vec![
            WeightedPTerm::new(vec![1.0, 1.0, 0.0], 2.0).unwrap(),
            WeightedPTerm::new(vec![0.0, 0.0, 1.0], 3.0).unwrap(),
        ],
        2.0,
    )
    .unwrap();
    assert!((spec.eval(&[2.0, 3.0, 4.0]).unwrap() - 29f64.sqrt()).abs() < 1e-14);
    assert_eq!(spec.unit_basis_norms(), vec![1.0, 1.0, 1.0]);
}

#[test]
fn unit_basis_norms_of_weighted_leaf() {
    let spec = NormSpec::weighted(vec![8.0, 27.0], 3.0).unwrap();
    let e = spec.unit_basis_norms();
    assert!((e[0] - 2.0).abs() < 1e-15 && (e[1] - 3.0).abs() < 1e-14);
    assert_eq!(
        NormSpec::lp(3, 4.0).unwrap().unit_basis_norms(),
        vec![1.0; 3]
    );
}

#[test]
fn overlapping_dual_composition_is_not_evaluable() {
    let spec = NormSpec::dual_composed(
        vec![
            WeightedPTerm::new(vec![1.0, 1.0], 3.0).unwrap(),
            WeightedPTerm::new(vec![1.0, 1.0], 4.0).unwrap(),
        ],
        2.0,
    )
    .unwrap();
    assert!(matches!(
        spec.eval(&[1.0, 1.0]),
        Err(certnorm::Error::NotEvaluable(_))
    ));
    assert!(spec.eval_dual(&[1.0, 1.0]).is_ok());
}
