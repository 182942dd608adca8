//! Independent reference computations used to check the power method:
//! direct maximization of `f_A`, Gram eigenvalues for the Euclidean case and
//! the critical-point census of the symmetric 2x2 family `[[e, 1], [1, e]]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::matrix::NonnegMatrix;
use crate::norms::{ComposedNormSpec, NormSpec};
use crate::power::ProblemInstance;

const ORACLE_SEED: u64 = 0x0b5e_55ed;

/// `||A||_{2->2}` from the largest eigenvalue of `A^T A`.
pub fn gram_spectral_norm(a: &NonnegMatrix) -> f64 {
    let g = a.transpose().matmul(a).expect("A^T A is always defined");
    let eig = symmetric_eigenvalues(g.data(), g.rows());
    eig.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// A (sub)gradient of the norm on nonnegative vectors; for a max-type outer
/// exponent the gradient of a maximal term is used.
fn norm_gradient(form: &ComposedNormSpec, x: &[f64]) -> Vec<f64> {
    if form.s().is_finite() {
        return form.gradient_unchecked(x);
    }
    let (term, v) = form
        .terms()
        .iter()
        .map(|t| (t, t.value(x)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one term");
    if v == 0.0 {
        return vec![0.0; x.len()];
    }
    x.iter()
        .zip(term.weights())
        .map(|(xi, w)| w * crate::norms::phi(&[*xi / v], term.p())[0])
        .collect()
}

/// Best value of `f_A(x) = ||Ax||_alpha / ||x||_beta` found by projected
/// gradient ascent on the nonnegative orthant.
///
/// Starts: every coordinate vector, the all-ones vector and `restarts`
/// random positive vectors (fixed seed).
pub fn brute_force_norm(inst: &ProblemInstance, restarts: usize, steps: usize) -> Result<f64> {
    brute_force_norm_with_starts(inst, restarts, steps, &[])
}

/// As [`brute_force_norm`] with additional caller-supplied starts.
pub fn brute_force_norm_with_starts(
    inst: &ProblemInstance,
    restarts: usize,
    steps: usize,
    extra: &[Vec<f64>],
) -> Result<f64> {
    let beta = inst.beta().primal_form()?;
    let n = inst.matrix().cols();
    let mut starts: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    starts.push(vec![1.0; n]);
    for r in 0..restarts {
        let mut rng =
            ChaCha8Rng::seed_from_u64(ORACLE_SEED ^ (r as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        starts.push((0..n).map(|_| rng.gen_range(0.01..1.0)).collect());
    }
    starts.extend(extra.iter().cloned());
    let best = starts
        .par_iter()
        .map(|s| ascend(inst, &beta, s, steps))
        .collect::<Result<Vec<f64>>>()?;
    Ok(best.into_iter().fold(0.0, f64::max))
}

fn ascend(
    inst: &ProblemInstance,
    beta: &ComposedNormSpec,
    start: &[f64],
    steps: usize,
) -> Result<f64> {
    let a = inst.matrix();
    let alpha = inst.alpha().primal_form()?;
    let normalize = |x: &[f64]| -> Option<Vec<f64>> {
        let v = beta.value(x);
        (v > 0.0).then(|| x.iter().map(|xi| xi / v).collect())
    };
    let value = |x: &[f64]| alpha.value(&a.mul_vec(x).expect("dimension"));
    let Some(mut x) = normalize(start) else {
        return Ok(0.0);
    };
    let mut f = value(&x);
    let mut step = 0.1;
    for _ in 0..steps {
        let ax = a.mul_vec(&x)?;
        let up = a.mul_t_vec(&norm_gradient(&alpha, &ax))?;
        let down = norm_gradient(beta, &x);
        let g: Vec<f64> = up.iter().zip(&down).map(|(u, d)| u - f * d).collect();
        let try_step = |h: f64| -> Option<(Vec<f64>, f64)> {
            let trial: Vec<f64> = x
                .iter()
                .zip(&g)
                .map(|(xi, gi)| (xi + h * gi).max(0.0))
                .collect();
            normalize(&trial).map(|y| {
                let fy = value(&y);
                (y, fy)
            })
        };
        // best of three step lengths keeps the step near the line optimum
        let best = [0.5 * step, step, 2.0 * step]
            .into_iter()
            .filter_map(|h| try_step(h).map(|(y, fy)| (h, y, fy)))
            .max_by(|a, b| a.2.total_cmp(&b.2));
        match best {
            Some((h, y, fy)) if fy > f => {
                x = y;
                f = fy;
                step = h;
            }
            _ => step *= 0.25,
        }
        if step < 1e-18 {
            break;
        }
    }
    Ok(f)
}

/// `psi(t) = t^{q-1} [(t e + 1 - t)^{p-1} + e (e + t - t e)^{p-1}]`.
pub fn census_psi(eps: f64, p: f64, q: f64, t: f64) -> f64 {
    t.powf(q - 1.0) * ((t * eps + 1.0 - t).powf(p - 1.0) + eps * (eps + t - t * eps).powf(p - 1.0))
}

/// `h(t) = psi(1 - t) - psi(t)`; its zeros in `(0, 1)` are the critical
/// points `(t, 1 - t)` of `f(x) = ||A_e x||_p / ||x||_q`.
pub fn census_h(eps: f64, p: f64, q: f64, t: f64) -> f64 {
    census_psi(eps, p, q, 1.0 - t) - census_psi(eps, p, q, t)
}

/// `((1 - e) / (1 + e))^2 (p - 1) / (q - 1)`.
pub fn census_tau(eps: f64, p: f64, q: f64) -> f64 {
    let k = (1.0 - eps) / (1.0 + eps);
    k * k * (p - 1.0) / (q - 1.0)
}

/// Number of distinct positive critical points of `||A_e x||_p / ||x||_q`
/// on the simplex, found by scanning `h` on `(0, 1/2)` with at least `grid`
/// samples and bisecting every sign change. Points `t` and `1 - t` count
/// separately; `t = 1/2` is always one of them.
pub fn critical_point_census_2x2(eps: f64, p: f64, q: f64, grid: usize) -> Result<usize> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "epsilon = {eps} must be positive"
        )));
    }
    for v in [p, q] {
        if !(v > 1.0 && v.is_finite()) {
            return Err(Error::InvalidExponent(v));
        }
    }
    let h = |t: f64| census_h(eps, p, q, t);
    let grid = grid.max(1000);
    let mut ts: Vec<f64> = (1..grid).map(|i| 0.5 * i as f64 / grid as f64).collect();
    for k in 1..=12 {
        let d = 10f64.powi(-k);
        ts.push(d);
        if k <= 9 {
            ts.push(0.5 - d);
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    let mut roots: Vec<f64> = Vec::new();
    let (mut prev_t, mut prev_h) = (0.0, h(0.0));
    for &t in &ts {
        let ht = h(t);
        if ht == 0.0 {
            roots.push(t);
            continue;
        }
        if prev_h != 0.0 && (ht > 0.0) != (prev_h > 0.0) {
            roots.push(bisect(&h, prev_t, t, prev_h));
        }
        prev_t = t;
        prev_h = ht;
    }
    let mut merged: Vec<f64> = Vec::new();
    for r in roots {
        if merged.last().is_none_or(|m| r - m > 1e-9) && 0.5 - r > 1e-9 {
            merged.push(r);
        }
    }
    Ok(1 + 2 * merged.len())
}

fn bisect(h: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, h_lo: f64) -> f64 {
    let lo_pos = h_lo > 0.0;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let hm = h(mid);
        if hm == 0.0 {
            return mid;
        }
        if (hm > 0.0) == lo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Convenience constructor for `||A x||_p / ||x||_q` on plain `l^p` norms.
pub fn lp_instance(a: NonnegMatrix, p: f64, q: f64) -> Result<ProblemInstance> {
    let (m, n) = (a.rows(), a.cols());
    ProblemInstance::new(a, NormSpec::lp(m, p)?, NormSpec::lp(n, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_norm_of_small_matrix() {
        let a = NonnegMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert!((gram_spectral_norm(&a) - (15.0 + 221f64.sqrt()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn brute_force_l2() {
        let a = NonnegMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let inst = lp_instance(a, 2.0, 2.0).unwrap();
        let v = brute_force_norm(&inst, 4, 2000).unwrap();
        assert!((v - 5.464_985_704_219_043).abs() < 1e-7, "{v}");
    }

    #[test]
    fn brute_force_scalar() {
        let a = NonnegMatrix::from_rows(&[vec![2.5]]).unwrap();
        let inst = ProblemInstance::new(
            a,
            NormSpec::weighted(vec![4.0], 2.0).unwrap(),
            NormSpec::weighted(vec![8.0], 3.0).unwrap(),
        )
        .unwrap();
        let v = brute_force_norm(&inst, 2, 100).unwrap();
        assert!((v - 2.5 * 2.0 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_needs_evaluable_beta() {
        use crate::norms::WeightedPTerm;
        let beta = NormSpec::dual_composed(
            vec![
                WeightedPTerm::new(vec![1.0, 1.0], 3.0).unwrap(),
                WeightedPTerm::new(vec![1.0, 1.0], 4.0).unwrap(),
            ],
            2.0,
        )
        .unwrap();
        let a = NonnegMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let inst = ProblemInstance::new(a, NormSpec::lp(2, 2.0).unwrap(), beta).unwrap();
        assert!(matches!(
            brute_force_norm(&inst, 1, 10),
            Err(Error::NotEvaluable(_))
        ));
    }

    #[test]
    fn census_examples() {
        assert!(census_h(0.3, 3.0, 2.0, 0.5).abs() < 1e-15);
        assert!((census_h(0.3, 3.0, 2.0, 0.0) - (0.3f64.powf(2.0) + 0.3)).abs() < 1e-15);
        assert_eq!(critical_point_census_2x2(0.5, 2.0, 2.0, 1000).unwrap(), 1);
        // tau = (0.9/1.1)^2 * 9 ~ 6
        assert!(critical_point_census_2x2(0.1, 10.0, 2.0, 1000).unwrap() >= 3);
        assert!(critical_point_census_2x2(0.0, 2.0, 2.0, 1000).is_err());
    }
}
