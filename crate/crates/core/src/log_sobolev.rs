//! Finite Markov chains: continuous-time semigroups, Birkhoff-ratio bounds
//! on the log-Sobolev constant, spectral gaps and hypercontractivity.

use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{birkhoff_ratio, diameter_report, ln_ratio_from_diameter, ratio_from_diameter};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{is_connected, symmetric_eigenvalues};
use crate::matrix::{NonnegMatrix, NonnegVector};
use crate::norms::NormSpec;
use crate::power::{ProblemInstance, SolveOptions};

/// Tolerance used to validate row sums and stationarity (l1).
pub const STATIONARY_TOL: f64 = 1e-10;
/// Below this time the Birkhoff ratio of the semigroup is too close to one
/// for `sigma_LB(t)` to be trusted.
pub const RELIABLE_T_MIN: f64 = 1e-6;

/// A row-stochastic kernel with a positive stationary distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    k: NonnegMatrix,
    pi: Vec<f64>,
}

fn check_stochastic(k: &NonnegMatrix) -> Result<()> {
    if !k.is_square() {
        return Err(Error::DimensionMismatch {
            expected: k.rows(),
            got: k.cols(),
        });
    }
    let defect = k.stochastic_defect();
    if defect > STATIONARY_TOL {
        return Err(Error::NotStochastic(format!(
            "row sums deviate from 1 by {defect:e}"
        )));
    }
    Ok(())
}

fn stationary_defect(k: &NonnegMatrix, pi: &[f64]) -> f64 {
    let pk = k.mul_t_vec(pi).expect("dimensions checked");
    pk.iter().zip(pi).map(|(a, b)| (a - b).abs()).sum()
}

impl MarkovChain {
    pub fn new(k: NonnegMatrix, pi: Vec<f64>) -> Result<Self> {
        check_stochastic(&k)?;
        check_dim(k.rows(), pi.len())?;
        if pi.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
            return Err(Error::BadStationary("entries must be positive".into()));
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > STATIONARY_TOL {
            return Err(Error::BadStationary(format!("entries sum to {total}")));
        }
        let defect = stationary_defect(&k, &pi);
        if defect > STATIONARY_TOL {
            return Err(Error::BadStationary(format!("|pi K - pi|_1 = {defect:e}")));
        }
        Ok(Self { k, pi })
    }

    /// Computes `pi` by power iteration on the lazy kernel `(I + K) / 2`.
    pub fn from_kernel(k: NonnegMatrix) -> Result<Self> {
        check_stochastic(&k)?;
        let n = k.rows();
        let mut pi = vec![1.0 / n as f64; n];
        for _ in 0..1_000_000 {
            let pk = k.mul_t_vec(&pi)?;
            let next: Vec<f64> = pi.iter().zip(&pk).map(|(a, b)| 0.5 * (a + b)).collect();
            let s: f64 = next.iter().sum();
            let next: Vec<f64> = next.iter().map(|v| v / s).collect();
            let change: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
            pi = next;
            if change < 1e-16 {
                break;
            }
        }
        Self::new(k, pi)
    }

    /// `K = [[1-a, a], [b, 1-b]]` with `pi = (b, a) / (a + b)`.
    pub fn two_state(a: f64, b: f64) -> Result<Self> {
        check_two_state(a, b)?;
        let k = NonnegMatrix::from_rows(&[vec![1.0 - a, a], vec![b, 1.0 - b]])?;
        Self::new(k, vec![b / (a + b), a / (a + b)])
    }

    pub fn kernel(&self) -> &NonnegMatrix {
        &self.k
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// `M* = D_pi^{-1} M^T D_pi`.
    pub fn adjoint(&self, m: &NonnegMatrix) -> Result<NonnegMatrix> {
        let n = self.len();
        check_dim(n, m.rows())?;
        check_dim(n, m.cols())?;
        let inv: Vec<f64> = self.pi.iter().map(|p| 1.0 / p).collect();
        m.transpose().scale(&inv, &self.pi)
    }

    /// The reversibilized chain `((K + K*) / 2, pi)`.
    pub fn reversibilization(&self) -> Result<Self> {
        let r = self.k.combine(0.5, &self.adjoint(&self.k)?, 0.5)?;
        Ok(Self {
            k: r,
            pi: self.pi.clone(),
        })
    }

    pub fn is_reversibly_irreducible(&self) -> bool {
        let k = &self.k;
        is_connected(self.len(), |i, j| k.get(i, j) > 0.0 || k.get(j, i) > 0.0)
    }

    fn require_irreducible(&self) -> Result<()> {
        if self.is_reversibly_irreducible() {
            Ok(())
        } else {
            Err(Error::ReducibleChain)
        }
    }

    /// `H_t = e^{-t} sum_j t^j / j! K^j`, truncated once the stochastic tail
    /// `e^{-t} sum_{j > N} t^j / j!` is at most `tol`.
    pub fn semigroup(&self, t: f64, tol: f64) -> Result<NonnegMatrix> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "t = {t} must be finite and >= 0"
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::OutOfRange(format!(
                "tolerance {tol} must be positive"
            )));
        }
        Ok(exp_series(&self.k, t, Truncation::Absolute(tol)))
    }

    /// `rho(t) = kappa_H(M_t)` for the semigroup `M_t` of the reversibilized chain.
    pub fn rho(&self, t: f64) -> Result<f64> {
        Ok(ratio_from_diameter(self.rho_diameter(t)?))
    }

    /// `ln rho(t)`, accurate when `rho(t)` is close to one.
    pub fn ln_rho(&self, t: f64) -> Result<f64> {
        Ok(ln_ratio_from_diameter(self.rho_diameter(t)?))
    }

    fn rho_diameter(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::OutOfRange(format!("t = {t} must be finite and > 0")));
        }
        self.require_irreducible()?;
        let r = self.reversibilization()?;
        let m = exp_series(&r.k, t, Truncation::Relative(1e-15));
        Ok(diameter_report(&m, 0.0).diameter)
    }

    /// Per-`t` bounds `-ln rho(t) / (2t)` on a grid.
    pub fn sigma_lower_bound(&self, t_grid: &[f64]) -> Result<LscReport> {
        if t_grid.is_empty() {
            return Err(Error::InvalidInput("t grid is empty".into()));
        }
        if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(Error::OutOfRange(format!(
                "grid point {t} must be positive"
            )));
        }
        self.require_irreducible()?;
        let per_t: Vec<TBound> = t_grid
            .par_iter()
            .map(|&t| {
                let ln_rho = self.ln_rho(t)?;
                Ok(TBound {
                    t,
                    rho: ln_rho.exp(),
                    sigma_lb: -ln_rho / (2.0 * t),
                    reliable: t >= RELIABLE_T_MIN,
                })
            })
            .collect::<Result<_>>()?;
        let best = per_t
            .iter()
            .filter(|b| b.reliable)
            .min_by(|a, b| a.sigma_lb.total_cmp(&b.sigma_lb))
            .ok_or_else(|| {
                Error::OutOfRange(format!("no grid point at or above {RELIABLE_T_MIN}"))
            })?;
        Ok(LscReport {
            sigma_lower: best.sigma_lb,
            best_t: best.t,
            sigma_upper: self.spectral_gap()? / 2.0,
            t_grid: t_grid.to_vec(),
            per_t_bounds: per_t,
        })
    }

    /// Smallest nonzero eigenvalue of `I - (K + K*) / 2`.
    pub fn spectral_gap(&self) -> Result<f64> {
        self.require_irreducible()?;
        let n = self.len();
        let r = self.reversibilization()?;
        let sq: Vec<f64> = self.pi.iter().map(|p| p.sqrt()).collect();
        let mut s = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let id = if i == j { 1.0 } else { 0.0 };
                s[i * n + j] = id - sq[i] * r.k.get(i, j) / sq[j];
            }
        }
        let eig = symmetric_eigenvalues(&s, n);
        let scale = eig.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let zeros = eig.iter().filter(|v| v.abs() <= 1e-10 * scale).count();
        if zeros != 1 {
            return Err(Error::ReducibleChain);
        }
        eig.into_iter()
            .find(|v| *v > 1e-10 * scale)
            .ok_or(Error::ReducibleChain)
    }

    /// `(D(x, x), E(x))` with `D(x, y) = <x, (I - K) y>_pi` and the entropy
    /// `sum_i pi_i x_i^2 ln(x_i^2 / ||x||_{pi,2}^2)`.
    pub fn dirichlet_and_entropy(&self, x: &[f64]) -> Result<(f64, f64)> {
        check_dim(self.len(), x.len())?;
        if x.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidInput("x must be nonzero".into()));
        }
        let d = self.dirichlet(x)?;
        let norm2: f64 = self.pi.iter().zip(x).map(|(p, v)| p * v * v).sum();
        let e = self
            .pi
            .iter()
            .zip(x)
            .filter(|(_, v)| **v != 0.0)
            .map(|(p, v)| p * v * v * (v * v / norm2).ln())
            .sum::<f64>();
        Ok((d, e.max(0.0)))
    }

    /// `D(x, x)` from `K` directly.
    pub fn dirichlet(&self, x: &[f64]) -> Result<f64> {
        let kx = self.k.mul_vec(x)?;
        Ok(self
            .pi
            .iter()
            .zip(x)
            .zip(&kx)
            .map(|((p, v), w)| p * v * (v - w))
            .sum())
    }

    /// `||M||_{pi,2->q}` computed through the adjoint problem
    /// `||M*||_{pi,q*->2}`, whose power step is `Phi_q(M M* x)` up to scaling.
    ///
    /// Requires `M` stochastic with `pi M = pi`, `M M*` irreducible and
    /// `1 < q <= 1 + 1 / kappa_H(M M*)`.
    pub fn hypercontractive_check(
        &self,
        m: &NonnegMatrix,
        q: f64,
        x0: Option<NonnegVector>,
    ) -> Result<HypercontractiveReport> {
        check_stochastic(m)?;
        check_dim(self.len(), m.rows())?;
        let defect = stationary_defect(m, &self.pi);
        if defect > STATIONARY_TOL {
            return Err(Error::BadStationary(format!("|pi M - pi|_1 = {defect:e}")));
        }
        let m_star = self.adjoint(m)?;
        let mm = m.matmul(&m_star)?;
        if !is_connected(self.len(), |i, j| mm.get(i, j) > 0.0) {
            return Err(Error::ReducibleChain);
        }
        let kappa = birkhoff_ratio(&mm);
        let q_max = 1.0 + 1.0 / kappa;
        if !(q > 1.0 && q <= q_max * (1.0 + 1e-12)) {
            return Err(Error::OutOfRange(format!("q = {q} outside (1, {q_max}]")));
        }
        let q_star = q / (q - 1.0);
        let inst = ProblemInstance::new(
            m_star,
            NormSpec::weighted(self.pi.clone(), 2.0)?,
            NormSpec::weighted(self.pi.clone(), q_star)?,
        )?;
        let opts = SolveOptions {
            tol: 1e-13,
            max_iters: 1_000_000,
            x0,
            force: true,
            record_trace: false,
        };
        let res = inst.solve(&opts)?;
        Ok(HypercontractiveReport {
            norm: res.norm_estimate,
            maximizer: res.maximizer.into_vec(),
            kappa,
            q_max,
            contraction: res.certificate.contraction,
            iterations: res.iterations,
            converged: res.converged,
        })
    }
}

/// The simplified adjoint power step `||y||_q^{1-q} Phi_q(y)`, `y = M M* x`.
pub fn hypercontractive_step(mm_star: &NonnegMatrix, q: f64, x: &[f64]) -> Result<Vec<f64>> {
    let y = mm_star.mul_vec(x)?;
    let norm = NormSpec::lp(y.len(), q)?.eval(&y)?;
    Ok(crate::norms::phi(&y, q)
        .into_iter()
        .map(|v| v * norm.powf(1.0 - q))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct HypercontractiveReport {
    /// `||M||_{pi,2->q}`.
    pub norm: f64,
    pub maximizer: Vec<f64>,
    /// `kappa_H(M M*)`.
    pub kappa: f64,
    /// `1 + 1 / kappa_H(M M*)`.
    pub q_max: f64,
    pub contraction: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TBound {
    pub t: f64,
    pub rho: f64,
    pub sigma_lb: f64,
    /// False for `t` below [`RELIABLE_T_MIN`].
    pub reliable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LscReport {
    /// Smallest reliable per-`t` value, the grid estimate of
    /// `-lim_{t->0} ln rho(t) / (2t)`.
    pub sigma_lower: f64,
    pub best_t: f64,
    /// Half the spectral gap.
    pub sigma_upper: f64,
    pub t_grid: Vec<f64>,
    pub per_t_bounds: Vec<TBound>,
}

/// `{2^-k : k = 0..=20}`.
pub fn default_t_grid() -> Vec<f64> {
    (0..=20).map(|k| 0.5f64.powi(k)).collect()
}

fn check_two_state(a: f64, b: f64) -> Result<()> {
    for v in [a, b] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::OutOfRange(format!("{v} must lie in (0, 1]")));
        }
    }
    Ok(())
}

/// Log-Sobolev constant of the two-state chain: `(a-b)/(ln a - ln b)`, or `a`
/// when `a = b`.
pub fn two_state_sigma(a: f64, b: f64) -> Result<f64> {
    check_two_state(a, b)?;
    let x = (a / b).ln();
    if x == 0.0 {
        return Ok(a);
    }
    Ok(b * x.exp_m1() / x)
}

/// Closed-form `ln rho(t)` for the two-state chain.
pub fn two_state_ln_rho(a: f64, b: f64, t: f64) -> Result<f64> {
    check_two_state(a, b)?;
    if !(t > 0.0) {
        return Err(Error::OutOfRange(format!("t = {t} must be positive")));
    }
    let xi = a + b;
    let e = (-xi * t).exp();
    let one_minus_e = -(-xi * t).exp_m1();
    let c2 = a / b;
    let root = ((1.0 + c2 * e) * (1.0 + e / c2)).sqrt();
    // rho = (root - (1-e)) / (root + (1-e))
    Ok((-one_minus_e / root).ln_1p() - (one_minus_e / root).ln_1p())
}

pub fn two_state_rho(a: f64, b: f64, t: f64) -> Result<f64> {
    Ok(two_state_ln_rho(a, b, t)?.exp())
}

enum Truncation {
    /// Stochastic tail at most this value.
    Absolute(f64),
    /// Stochastic tail at most this fraction of the smallest positive entry.
    Relative(f64),
}

/// `e^{-t} sum_j t^j/j! K^j` for a stochastic `K`. Long times are split into
/// `2^s` equal steps so that no single series has to resolve a huge `t`.
fn exp_series(k: &NonnegMatrix, t: f64, trunc: Truncation) -> NonnegMatrix {
    const T_SPLIT: f64 = 16.0;
    let n = k.rows();
    if t == 0.0 {
        return NonnegMatrix::identity(n);
    }
    let mut squarings = 0;
    let mut step = t;
    while step > T_SPLIT {
        step /= 2.0;
        squarings += 1;
    }
    let trunc = match trunc {
        Truncation::Absolute(tol) => {
            Truncation::Absolute(tol / f64::from(1u32 << squarings.min(31)))
        }
        rel => rel,
    };
    let mut h = series(k, step, &trunc);
    for _ in 0..squarings {
        h = h.matmul(&h).expect("square");
    }
    h
}

fn series(k: &NonnegMatrix, t: f64, trunc: &Truncation) -> NonnegMatrix {
    let n = k.rows();
    let mut term = NonnegMatrix::identity(n);
    let mut weight = (-t).exp();
    let mut sum: Vec<f64> = term.data().iter().map(|v| v * weight).collect();
    let mut j = 0usize;
    loop {
        // tail after term j: w_{j+1} / (1 - t/(j+2)) once j + 2 > t
        let next_weight = weight * t / (j + 1) as f64;
        let denom = 1.0 - t / (j + 2) as f64;
        if denom > 0.0 {
            let tail = next_weight / denom;
            let ok = match trunc {
                Truncation::Absolute(tol) => tail <= *tol,
                Truncation::Relative(rel) => {
                    let min = sum
                        .iter()
                        .copied()
                        .filter(|v| *v > 0.0)
                        .fold(f64::INFINITY, f64::min);
                    let pattern_full = j + 1 >= n;
                    pattern_full && tail <= rel * min || tail == 0.0
                }
            };
            if ok || j > 10_000 {
                break;
            }
        }
        term = term.matmul(k).expect("square");
        j += 1;
        weight = next_weight;
        for (s, v) in sum.iter_mut().zip(term.data()) {
            *s += weight * v;
        }
    }
    NonnegMatrix::from_raw(n, n, sum)
}
