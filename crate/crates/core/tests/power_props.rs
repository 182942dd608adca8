mod common;

use certnorm::cone::hilbert_distance;
use certnorm::oracle::brute_force_norm;
use certnorm::{Error, NonnegMatrix, NonnegVector, NormSpec, ProblemInstance, SolveOptions};
use proptest::prelude::*;
use rand::Rng;

/// Random positive instance. Beta is a leaf, a disjoint composition or a dual
/// composition; overlapping dual compositions only if `overlapping_beta`.
fn instance(seed: u64, max_dim: usize, overlapping_beta: bool, certified: bool) -> ProblemInstance {
    let mut r = common::rng(seed);
    loop {
        let (m, n) = (r.gen_range(1..=max_dim), r.gen_range(2..=max_dim));
        let a = common::positive_matrix(&mut r, m, n);
        let shape = r.gen_range(0..3);
        let alpha = common::random_spec(&mut r, m, shape);
        let shapes: &[u8] = if overlapping_beta {
            &[0, 1, 3, 4]
        } else {
            &[0, 1, 3]
        };
        let shape = shapes[r.gen_range(0..shapes.len())];
        let beta = common::random_spec(&mut r, n, shape);
        let inst = ProblemInstance::new(a, alpha, beta).unwrap();
        if !certified || inst.certificate().unwrap().is_certified() {
            return inst;
        }
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_step_lands_on_unit_sphere(seed in any::<u64>(), c in 1e-3..1e3f64) {
        let inst = instance(seed, 5, true, false);
        let n = inst.matrix().cols();
        let x = common::positive_vector(&mut common::rng(seed ^ 1), n);
        let s = inst.apply_s(&x).unwrap();
        let y = inst.matrix().mul_t_vec(&inst.j_alpha(&inst.matrix().mul_vec(&x).unwrap()).unwrap()).unwrap();
        if let Ok(dual) = inst.beta().eval_dual(&y) {
            prop_assert!((dot(&s, &y) - dual).abs() <= 1e-10 * dual);
        }
        if let Ok(v) = inst.beta().eval(&s) {
            prop_assert!((v - 1.0).abs() <= 1e-10);
        }
        let scaled: Vec<f64> = x.iter().map(|v| c * v).collect();
        prop_assert!(common::sup_diff(&s, &inst.apply_s(&scaled).unwrap()) <= 1e-12);
    }

    #[test]
    fn residuals_contract_geometrically(seed in any::<u64>()) {
        let inst = instance(seed, 5, true, true);
        let res = inst.solve(&SolveOptions::with_tol(1e-12)).unwrap();
        prop_assert!(res.converged);
        let tau = res.certificate.contraction;
        for w in res.residual_history.windows(2) {
            prop_assert!(w[1] <= tau * w[0] * (1.0 + 1e-9) + 1e-14, "{} > {tau} * {}", w[1], w[0]);
        }
    }

    #[test]
    fn limit_is_a_fixed_and_critical_point(seed in any::<u64>()) {
        let inst = instance(seed, 5, false, true);
        let tol = 1e-11;
        let res = inst.solve(&SolveOptions::with_tol(tol)).unwrap();
        let x = res.maximizer.as_slice();
        prop_assert!(common::sup_diff(&inst.apply_s(x).unwrap(), x) <= tol * (1.0 + 1e-6));
        let y = inst.matrix().mul_t_vec(&inst.j_alpha(&inst.matrix().mul_vec(x).unwrap()).unwrap()).unwrap();
        let jb = inst.beta().primal_form().unwrap().gradient(x).unwrap();
        prop_assert!(hilbert_distance(&y, &jb).unwrap() <= 1e-8);
    }

    #[test]
    fn starting_point_does_not_matter(seed in any::<u64>()) {
        let inst = instance(seed, 5, true, true);
        let n = inst.matrix().cols();
        let mut r = common::rng(seed ^ 2);
        let solve_from = |x0: Vec<f64>| {
            let opts = SolveOptions { tol: 1e-12, x0: Some(NonnegVector::new(x0).unwrap()), ..SolveOptions::default() };
            inst.solve(&opts).unwrap().maximizer.into_vec()
        };
        let a = solve_from(common::positive_vector(&mut r, n));
        let b = solve_from(common::positive_vector(&mut r, n));
        prop_assert!(common::sup_diff(&a, &b) <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_lies_in_the_enclosure(seed in any::<u64>()) {
        let inst = instance(seed, 3, false, true);
        let res = inst.solve(&SolveOptions::with_tol(1e-12)).unwrap();
        let oracle = brute_force_norm(&inst, 4, 1500).unwrap();
        prop_assert!(oracle >= res.norm_estimate - 1e-8, "oracle {oracle} < {}", res.norm_estimate);
        let upper = if res.a_priori_gap < 1.0 {
            res.norm_estimate / (1.0 - res.a_priori_gap)
        } else {
            f64::INFINITY
        };
        prop_assert!(oracle <= upper * (1.0 + 1e-12), "oracle {oracle} > {upper}");
        prop_assert!((oracle - res.norm_estimate).abs() <= 1e-6);
    }
}

fn mat(rows: &[&[f64]]) -> NonnegMatrix {
    NonnegMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn uncontracted_matrix_is_refused_when_p_exceeds_q() {
    let c = mat(&[&[0.0, 1.0, 1.0], &[2.0, 2.0, 2.0], &[3.0, 3.0, 0.0]]);
    let inst = ProblemInstance::new(
        c,
        NormSpec::lp(3, 4.0).unwrap(),
        NormSpec::lp(3, 2.0).unwrap(),
    )
    .unwrap();
    match inst.solve(&SolveOptions::default()) {
        Err(Error::NotCertified { tau }) => assert!((tau - 3.0).abs() < 1e-12),
        other => panic!("expected refusal, got {other:?}"),
    }
    let forced = inst
        .solve(&SolveOptions {
            force: true,
            ..SolveOptions::default()
        })
        .unwrap();
    assert!(!forced.certified && forced.upper.is_infinite());
}

#[test]
fn reducible_gram_matrix_is_rejected() {
    let inst = ProblemInstance::new(
        NonnegMatrix::identity(3),
        NormSpec::lp(3, 2.0).unwrap(),
        NormSpec::lp(3, 2.0).unwrap(),
    )
    .unwrap();
    assert_eq!(
        inst.solve(&SolveOptions::default()).unwrap_err(),
        Error::GramReducible
    );
}

#[test]
fn start_must_be_positive() {
    let inst = ProblemInstance::new(
        mat(&[&[1.0, 2.0], &[3.0, 4.0]]),
        NormSpec::lp(2, 2.0).unwrap(),
        NormSpec::lp(2, 2.0).unwrap(),
    )
    .unwrap();
    let opts = SolveOptions {
        x0: Some(NonnegVector::new(vec![1.0, 0.0]).unwrap()),
        ..SolveOptions::default()
    };
    assert_eq!(inst.solve(&opts).unwrap_err(), Error::NonPositiveStart);
}

#[test]
fn budget_exhaustion_is_reported() {
    let inst = ProblemInstance::new(
        mat(&[&[1.0, 2.0], &[3.0, 4.0]]),
        NormSpec::lp(2, 3.0).unwrap(),
        NormSpec::lp(2, 1.5).unwrap(),
    )
    .unwrap();
    let opts = SolveOptions {
        max_iters: 1,
        x0: Some(NonnegVector::new(vec![1.0, 0.01]).unwrap()),
        ..SolveOptions::default()
    };
    let res = inst.solve(&opts).unwrap();
    assert!(!res.converged);
    assert_eq!(res.iterations, 1);
    assert!(res.lower <= res.upper);
}
