//! Ready-made problem shapes whose contraction factor has a closed form.
//!
//! Each shape assembles a [`ProblemInstance`] from its ingredients and
//! reports both the closed-form factor and the generic certificate `tau`.

use crate::cone::birkhoff_ratio;
use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::norms::{NormSpec, WeightedPTerm};
use crate::power::ProblemInstance;

#[derive(Debug, Clone)]
pub enum CorollaryConfig {
    /// `||Ax||_{w,p} / ||x||_{v,q}` with positive weights.
    /// Closed form `kappa(A)^2 (p-1)/(q-1)`.
    WeightedPair {
        a: NonnegMatrix,
        alpha_weights: Vec<f64>,
        p: f64,
        beta_weights: Vec<f64>,
        q: f64,
    },
    /// `(2||Ax||_p + 3||Bx||_q) / ||x||_r` on the stack `[A; B]`.
    /// Closed form `kappa([A; B])^2 (p+q-2)/(r-1)`.
    StackedSum {
        a: NonnegMatrix,
        b: NonnegMatrix,
        p: f64,
        q: f64,
        r: f64,
    },
    /// `||A(x+y)||_p / sqrt(||x||_q^2 + ||y||_r^2)` with `q, r >= 2`.
    /// Closed form `kappa(A)^2 (p-1)`.
    SplitDomain {
        a: NonnegMatrix,
        p: f64,
        q: f64,
        r: f64,
    },
    /// `[A B]` with `alpha = (||.||_p^theta + ||.||_q^theta)^(1/theta)` and
    /// `beta(x, y) = (||x||_r^theta + ||y||_s^theta)^(1/theta)`,
    /// `1 < s <= theta <= p, q, r`. Closed form
    /// `kappa([A B])^2 (p+q-theta-1)/(s-1)`.
    SideBySide {
        a: NonnegMatrix,
        b: NonnegMatrix,
        p: f64,
        q: f64,
        r: f64,
        s: f64,
        theta: f64,
    },
    /// `M = [[A, A, 0], [0, B, B]]`, `alpha = l^p` and a dual-composed `beta`
    /// with outer exponent `inf` whose two terms overlap on the third block.
    /// Closed form `(p-1)/(q-1) + (p-1)/(r-1)`.
    OverlappingBlocks {
        a: NonnegMatrix,
        b: NonnegMatrix,
        p: f64,
        q: f64,
        r: f64,
    },
    /// `x -> A sigma_p(Bx)` measured in `l^q`, i.e. `B` with the composed
    /// norm of outer exponent `pq` whose terms are the rows of `A`.
    /// Closed form `(pq-1)/(r-1) kappa(B) kappa(B^T)`.
    PowerComposition {
        a: NonnegMatrix,
        b: NonnegMatrix,
        p: f64,
        q: f64,
        r: f64,
    },
}

#[derive(Debug, Clone)]
pub struct CorollaryTau {
    pub closed_form: f64,
    pub generic: f64,
    pub instance: ProblemInstance,
}

fn exponent(v: f64) -> Result<f64> {
    if v > 1.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::OutOfRange(format!(
            "exponent {v} must lie in (1, inf)"
        )))
    }
}

fn positive_square(m: &NonnegMatrix, name: &str) -> Result<usize> {
    if !m.is_square() || !m.is_positive() {
        return Err(Error::OutOfRange(format!(
            "{name} must be a positive square matrix"
        )));
    }
    Ok(m.rows())
}

fn same_size(a: &NonnegMatrix, b: &NonnegMatrix) -> Result<usize> {
    let n = positive_square(a, "A")?;
    let nb = positive_square(b, "B")?;
    if n != nb {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: nb,
        });
    }
    Ok(n)
}

fn block_weights(n: usize, blocks: usize, on: &[usize], value: f64) -> Vec<f64> {
    let mut w = vec![0.0; n * blocks];
    for &b in on {
        w[b * n..(b + 1) * n].iter_mut().for_each(|x| *x = value);
    }
    w
}

fn kappa_sq(m: &NonnegMatrix) -> f64 {
    birkhoff_ratio(m) * birkhoff_ratio(&m.transpose())
}

/// Closed-form and generic contraction factors of a corollary shape.
pub fn corollary_tau(config: &CorollaryConfig) -> Result<CorollaryTau> {
    let (instance, closed_form) = match config {
        CorollaryConfig::WeightedPair {
            a,
            alpha_weights,
            p,
            beta_weights,
            q,
        } => {
            let n = positive_square(a, "A")?;
            let (p, q) = (exponent(*p)?, exponent(*q)?);
            if alpha_weights.len() != n || beta_weights.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: alpha_weights.len(),
                });
            }
            let inst = ProblemInstance::new(
                a.clone(),
                NormSpec::weighted(alpha_weights.clone(), p)?,
                NormSpec::weighted(beta_weights.clone(), q)?,
            )?;
            let k = birkhoff_ratio(a);
            (inst, k * k * (p - 1.0) / (q - 1.0))
        }
        CorollaryConfig::StackedSum { a, b, p, q, r } => {
            let n = same_size(a, b)?;
            if n < 2 {
                return Err(Error::OutOfRange("outer exponent 1 needs n >= 2".into()));
            }
            let (p, q, r) = (exponent(*p)?, exponent(*q)?, exponent(*r)?);
            let stack = NonnegMatrix::from_blocks(&[vec![Some(a)], vec![Some(b)]])?;
            let alpha = NormSpec::composed(
                vec![
                    WeightedPTerm::new(block_weights(n, 2, &[0], 2f64.powf(p)), p)?,
                    WeightedPTerm::new(block_weights(n, 2, &[1], 3f64.powf(q)), q)?,
                ],
                1.0,
            )?;
            let k = birkhoff_ratio(&stack);
            let inst = ProblemInstance::new(stack, alpha, NormSpec::lp(n, r)?)?;
            (inst, k * k * (p + q - 2.0) / (r - 1.0))
        }
        CorollaryConfig::SplitDomain { a, p, q, r } => {
            let n = positive_square(a, "A")?;
            let (p, q, r) = (exponent(*p)?, exponent(*q)?, exponent(*r)?);
            if q < 2.0 || r < 2.0 {
                return Err(Error::OutOfRange("q and r must be at least 2".into()));
            }
            let beta = NormSpec::dual_composed(
                vec![
                    WeightedPTerm::new(vec![1.0; n], q)?,
                    WeightedPTerm::new(vec![1.0; n], r)?,
                ],
                2.0,
            )?;
            let inst = ProblemInstance::new(a.clone(), NormSpec::lp(n, p)?, beta)?;
            let k = birkhoff_ratio(a);
            (inst, k * k * (p - 1.0))
        }
        CorollaryConfig::SideBySide {
            a,
            b,
            p,
            q,
            r,
            s,
            theta,
        } => {
            let n = same_size(a, b)?;
            let (p, q, r, s, theta) = (
                exponent(*p)?,
                exponent(*q)?,
                exponent(*r)?,
                exponent(*s)?,
                exponent(*theta)?,
            );
            if !(s <= theta && theta <= p && theta <= q && theta <= r) {
                return Err(Error::OutOfRange("need 1 < s <= theta <= p, q, r".into()));
            }
            let m = NonnegMatrix::from_blocks(&[vec![Some(a), Some(b)]])?;
            let alpha = NormSpec::composed(
                vec![
                    WeightedPTerm::new(vec![1.0; n], p)?,
                    WeightedPTerm::new(vec![1.0; n], q)?,
                ],
                theta,
            )?;
            let beta = NormSpec::composed(
                vec![
                    WeightedPTerm::new(block_weights(n, 2, &[0], 1.0), r)?,
                    WeightedPTerm::new(block_weights(n, 2, &[1], 1.0), s)?,
                ],
                theta,
            )?;
            let k = birkhoff_ratio(&m);
            let inst = ProblemInstance::new(m, alpha, beta)?;
            (inst, k * k * (p + q - theta - 1.0) / (s - 1.0))
        }
        CorollaryConfig::OverlappingBlocks { a, b, p, q, r } => {
            let n = same_size(a, b)?;
            let (p, q, r) = (exponent(*p)?, exponent(*q)?, exponent(*r)?);
            let m = NonnegMatrix::from_blocks(&[
                vec![Some(a), Some(a), None],
                vec![None, Some(b), Some(b)],
            ])?;
            let beta = NormSpec::dual_composed(
                vec![
                    WeightedPTerm::new(block_weights(n, 3, &[0, 2], 1.0), q)?,
                    WeightedPTerm::new(block_weights(n, 3, &[1, 2], 1.0), r)?,
                ],
                f64::INFINITY,
            )?;
            let inst = ProblemInstance::new(m, NormSpec::lp(2 * n, p)?, beta)?;
            (inst, (p - 1.0) / (q - 1.0) + (p - 1.0) / (r - 1.0))
        }
        CorollaryConfig::PowerComposition { a, b, p, q, r } => {
            let n = same_size(a, b)?;
            let (p, q, r) = (exponent(*p)?, exponent(*q)?, exponent(*r)?);
            let terms = (0..n)
                .map(|i| WeightedPTerm::new(a.row(i).to_vec(), p))
                .collect::<Result<Vec<_>>>()?;
            let alpha = NormSpec::composed(terms, p * q)?;
            let inst = ProblemInstance::new(b.clone(), alpha, NormSpec::lp(n, r)?)?;
            (inst, (p * q - 1.0) / (r - 1.0) * kappa_sq(b))
        }
    };
    let generic = instance.certificate()?.tau;
    Ok(CorollaryTau {
        closed_form,
        generic,
        instance,
    })
}
