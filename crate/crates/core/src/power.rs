//! Nonlinear power iteration for `||A||_{beta -> alpha}` with Birkhoff-Hopf
//! contraction certificates.

use serde::Serialize;

use crate::cone::{birkhoff_ratio, hilbert_distance};
use crate::error::{check_dim, Error, Result};
use crate::linalg::is_connected;
use crate::matrix::{NonnegMatrix, NonnegVector};
use crate::norms::{ComposedNormSpec, NormSpec, Side};

/// True iff `A^T A` is irreducible: no zero column, and the graph linking
/// two columns whenever they share a nonzero row is connected.
pub fn check_gram_irreducible(a: &NonnegMatrix) -> bool {
    let n = a.cols();
    if n == 0 {
        return false;
    }
    let cols: Vec<Vec<bool>> = (0..n)
        .map(|j| a.column(j).iter().map(|v| *v > 0.0).collect())
        .collect();
    if cols.iter().any(|c| !c.contains(&true)) {
        return false;
    }
    is_connected(n, |i, j| {
        cols[i].iter().zip(&cols[j]).any(|(x, y)| *x && *y)
    })
}

/// A matrix together with the norms `alpha` (on the range) and `beta` (on
/// the domain).
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    a: NonnegMatrix,
    alpha: NormSpec,
    beta: NormSpec,
    j_alpha: ComposedNormSpec,
    j_beta_star: ComposedNormSpec,
}

impl ProblemInstance {
    /// Requires `alpha` to have an explicit differentiable form and `beta`
    /// an explicit differentiable dual.
    pub fn new(a: NonnegMatrix, alpha: NormSpec, beta: NormSpec) -> Result<Self> {
        check_dim(a.rows(), alpha.dim())?;
        check_dim(a.cols(), beta.dim())?;
        let j_alpha = alpha.primal_form()?;
        let j_beta_star = beta.dual_form()?;
        for (form, what) in [(&j_alpha, "alpha"), (&j_beta_star, "dual of beta")] {
            if !form.is_differentiable() {
                return Err(Error::NotDifferentiable(what.into()));
            }
        }
        Ok(Self {
            a,
            alpha,
            beta,
            j_alpha,
            j_beta_star,
        })
    }

    pub fn matrix(&self) -> &NonnegMatrix {
        &self.a
    }

    pub fn alpha(&self) -> &NormSpec {
        &self.alpha
    }

    pub fn beta(&self) -> &NormSpec {
        &self.beta
    }

    /// `f_A(x) = ||Ax||_alpha / ||x||_beta`.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        let ax = self.a.mul_vec(x)?;
        Ok(self.j_alpha.value(&ax) / self.beta.eval(x)?)
    }

    /// `||Ax||_alpha`.
    pub fn image_norm(&self, x: &[f64]) -> Result<f64> {
        Ok(self.j_alpha.value(&self.a.mul_vec(x)?))
    }

    /// `J_alpha(Ax)`, exposed for the critical-point check.
    pub fn j_alpha(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.j_alpha.gradient(y)
    }

    /// `J_{beta*}(y)`.
    pub fn j_beta_star(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.j_beta_star.gradient(y)
    }

    /// `S_A(x) = J_{beta*}(A^T J_alpha(Ax))`.
    pub fn apply_s(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.a.cols(), x.len())?;
        if x.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidInput("iterate must be nonnegative".into()));
        }
        let ax = self.a.mul_vec(x)?;
        if ax.iter().all(|v| *v == 0.0) {
            return Err(Error::ZeroImage);
        }
        let y = self.a.mul_t_vec(&self.j_alpha.gradient_unchecked(&ax))?;
        Ok(self.j_beta_star.gradient_unchecked(&y))
    }

    /// Operation count of one application of `S_A`: nonzero weights of both
    /// norms plus `nnz(A)`.
    pub fn op_count(&self) -> usize {
        self.alpha.nnz() + self.beta.nnz() + self.a.nnz()
    }

    pub fn certificate(&self) -> Result<Certificate> {
        let kappa_a = birkhoff_ratio(&self.a);
        let kappa_at = birkhoff_ratio(&self.a.transpose());
        let bound_j_alpha = self.alpha.birkhoff_bound_j(Side::Primal)?;
        let bound_j_beta_star = self.beta.birkhoff_bound_j(Side::Dual)?;
        let tau = kappa_a * kappa_at * bound_j_alpha * bound_j_beta_star;

        // When J_alpha is linear, A^T J_alpha(A x) is a multiple of a Gram
        // product whose own Birkhoff ratio can be much smaller.
        let kappa_gram = self.j_alpha.linear_weights().map(|w| {
            let ones = vec![1.0; self.a.cols()];
            let wa = self.a.scale(&w, &ones).expect("dimensions checked");
            birkhoff_ratio(&self.a.transpose().matmul(&wa).expect("dimensions checked"))
        });
        let tau_gram = kappa_gram.map(|k| k * bound_j_beta_star);
        let contraction = tau_gram.map_or(tau, |g| g.min(tau));

        let r = self
            .beta
            .unit_basis_norms()
            .iter()
            .map(|e| 1.0 / e)
            .fold(0.0, f64::max);
        let (gamma, gamma_exact) = self.beta.inf_ball_constant();
        let gamma_alpha = self.j_alpha.value(&vec![1.0; self.a.rows()]);
        Ok(Certificate {
            kappa_a,
            kappa_at,
            bound_j_alpha,
            bound_j_beta_star,
            tau,
            kappa_gram,
            tau_gram,
            contraction,
            r,
            gamma,
            gamma_exact,
            gamma_alpha,
        })
    }

    pub fn solve(&self, opts: &SolveOptions) -> Result<PowerResult> {
        solve(self, opts)
    }
}

/// Contraction bookkeeping for `S_A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub kappa_a: f64,
    pub kappa_at: f64,
    pub bound_j_alpha: f64,
    pub bound_j_beta_star: f64,
    /// Product of the four factors above.
    pub tau: f64,
    /// Birkhoff ratio of `A^T diag(w) A` when `alpha` is a weighted 2-norm.
    pub kappa_gram: Option<f64>,
    pub tau_gram: Option<f64>,
    /// Contraction factor used by the solver: `min(tau, tau_gram)`.
    pub contraction: f64,
    /// `max_i 1 / ||e_i||_beta`.
    pub r: f64,
    /// `||1||_beta`, or the bound `sum_i ||e_i||_beta` when `gamma_exact` is false.
    pub gamma: f64,
    pub gamma_exact: bool,
    /// `||1||_alpha`, reported for comparison only.
    pub gamma_alpha: f64,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.contraction < 1.0
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub x0: Option<NonnegVector>,
    /// Iterate even without a certificate; no enclosure is claimed then.
    pub force: bool,
    /// Keep every iterate in [`PowerResult::trace`].
    pub record_trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 100_000,
            x0: None,
            force: false,
            record_trace: false,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerResult {
    /// `||A x_k||_alpha` at the final iterate.
    pub norm_estimate: f64,
    pub maximizer: NonnegVector,
    pub iterations: usize,
    /// `contraction^k * C_tilde`.
    pub a_priori_gap: f64,
    /// `gamma * r * tau / (1 - tau) * d_H(x_{k-1}, x_k)`.
    pub a_posteriori_gap: f64,
    pub converged: bool,
    /// Whether the enclosure below is backed by a contraction certificate.
    pub certified: bool,
    pub lower: f64,
    pub upper: f64,
    /// `C = r d_H(x_0, x_1) / (1 - tau)`.
    pub constant_c: f64,
    pub constant_c_tilde: f64,
    /// `d_H(x_{k-1}, x_k)` for `k = 1, 2, ...`.
    pub residual_history: Vec<f64>,
    /// `||A x_k||_alpha` for `k = 1, 2, ...`; diagnostic only.
    pub objective_history: Vec<f64>,
    pub certificate: Certificate,
    #[serde(skip)]
    pub trace: Vec<Vec<f64>>,
}

/// Runs the power sequence `x_{k+1} = S_A(x_k)`.
///
/// A certified run (`contraction < 1`) stops once the a-posteriori bound
/// `r tau / (1 - tau) d_H(x_{k-1}, x_k)` drops below `tol`. A forced run
/// stops on `r d_H(x_{k-1}, x_k) <= tol`. Exhausting the budget returns the
/// partial result with `converged = false`.
pub fn solve(inst: &ProblemInstance, opts: &SolveOptions) -> Result<PowerResult> {
    if !check_gram_irreducible(&inst.a) {
        return Err(Error::GramReducible);
    }
    if !(opts.tol > 0.0) {
        return Err(Error::OutOfRange(format!(
            "tolerance {} must be positive",
            opts.tol
        )));
    }
    let cert = inst.certificate()?;
    let certified = cert.is_certified();
    if !certified && !opts.force {
        return Err(Error::NotCertified {
            tau: cert.contraction,
        });
    }
    let n = inst.a.cols();
    let start = match &opts.x0 {
        Some(x0) => {
            check_dim(n, x0.len())?;
            if !x0.is_positive() {
                return Err(Error::NonPositiveStart);
            }
            x0.as_slice().to_vec()
        }
        None => vec![1.0; n],
    };
    let mut x = match inst.beta.eval(&start) {
        Ok(v) => start.iter().map(|s| s / v).collect(),
        // no closed form for ||.||_beta: S_A already lands on the unit sphere
        Err(_) => inst.apply_s(&start)?,
    };

    let tau = cert.contraction;
    let mut trace = Vec::new();
    if opts.record_trace {
        trace.push(x.clone());
    }
    let mut residuals = Vec::new();
    let mut objectives = Vec::new();
    let mut constant_c = f64::NAN;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        let next = inst.apply_s(&x)?;
        let d = hilbert_distance(&x, &next)?;
        iterations += 1;
        if iterations == 1 {
            constant_c = cert.r * d / (1.0 - tau);
        }
        residuals.push(d);
        objectives.push(inst.image_norm(&next)?);
        x = next;
        if opts.record_trace {
            trace.push(x.clone());
        }
        let stop = if certified {
            cert.r * tau / (1.0 - tau) * d
        } else {
            cert.r * d
        };
        if stop <= opts.tol {
            converged = true;
            break;
        }
    }

    let norm_estimate = inst.image_norm(&x)?;
    let last = residuals.last().copied().unwrap_or(f64::INFINITY);
    let (a_priori_gap, a_posteriori_gap, constant_c_tilde) = if certified {
        let ct = constant_c * cert.gamma;
        (
            tau.powi(iterations as i32) * ct,
            cert.gamma * cert.r * tau / (1.0 - tau) * last,
            ct,
        )
    } else {
        (f64::INFINITY, f64::INFINITY, f64::INFINITY)
    };
    let gap = a_priori_gap.min(a_posteriori_gap);
    let upper = if certified && gap < 1.0 {
        norm_estimate / (1.0 - gap)
    } else {
        f64::INFINITY
    };
    Ok(PowerResult {
        norm_estimate,
        maximizer: NonnegVector::new(x).map_err(|_| Error::ZeroImage)?,
        iterations,
        a_priori_gap,
        a_posteriori_gap,
        converged,
        certified,
        lower: norm_estimate,
        upper,
        constant_c,
        constant_c_tilde,
        residual_history: residuals,
        objective_history: objectives,
        certificate: cert,
        trace,
    })
}
