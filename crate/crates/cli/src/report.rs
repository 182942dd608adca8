//! Serializable reports. Non-finite numbers serialize as `null`.

use std::fmt::Write;

use certnorm::cone::DiameterReport;
use certnorm::{LscReport, NormSpec, PowerResult};
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct NormParams {
    pub matrix: String,
    pub alpha: NormSpec,
    pub beta: NormSpec,
    pub tol: f64,
    pub max_iters: usize,
    pub force: bool,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
pub struct NormReport {
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: NormParams,
    pub norm_estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub certified: bool,
    pub tau: f64,
    pub tau_gram: Option<f64>,
    pub contraction: f64,
    pub kappa_A: f64,
    pub kappa_At: f64,
    pub bound_J_alpha: f64,
    pub bound_J_beta_star: f64,
    pub C: f64,
    pub C_tilde: f64,
    pub r: f64,
    pub gamma: f64,
    pub a_priori_gap: f64,
    pub a_posteriori_gap: f64,
    pub iterations: usize,
    pub converged: bool,
    pub maximizer: Vec<f64>,
}

impl NormReport {
    pub fn new(parameters: NormParams, res: &PowerResult) -> Self {
        let c = &res.certificate;
        Self {
            version: VERSION,
            command: "norm",
            parameters,
            norm_estimate: res.norm_estimate,
            lower: res.lower,
            upper: res.upper,
            certified: res.certified,
            tau: c.tau,
            tau_gram: c.tau_gram,
            contraction: c.contraction,
            kappa_A: c.kappa_a,
            kappa_At: c.kappa_at,
            bound_J_alpha: c.bound_j_alpha,
            bound_J_beta_star: c.bound_j_beta_star,
            C: res.constant_c,
            C_tilde: res.constant_c_tilde,
            r: c.r,
            gamma: c.gamma,
            a_priori_gap: res.a_priori_gap,
            a_posteriori_gap: res.a_posteriori_gap,
            iterations: res.iterations,
            converged: res.converged,
            maximizer: res.maximizer.as_slice().to_vec(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "certnorm {} norm of {}",
            self.version, self.parameters.matrix
        );
        let _ = writeln!(s, "norm_estimate      {}", self.norm_estimate);
        let _ = writeln!(s, "enclosure          [{}, {}]", self.lower, self.upper);
        let _ = writeln!(s, "certified          {}", self.certified);
        let _ = writeln!(s, "tau                {:.6e}", self.tau);
        if let Some(g) = self.tau_gram {
            let _ = writeln!(s, "tau (Gram)         {g:.6e}");
        }
        let _ = writeln!(s, "kappa_H(A)         {:.6e}", self.kappa_A);
        let _ = writeln!(s, "kappa_H(A^T)       {:.6e}", self.kappa_At);
        let _ = writeln!(s, "bound J_alpha      {:.6e}", self.bound_J_alpha);
        let _ = writeln!(s, "bound J_beta*      {:.6e}", self.bound_J_beta_star);
        let _ = writeln!(
            s,
            "C, C~, r           {:.6e}, {:.6e}, {:.6e}",
            self.C, self.C_tilde, self.r
        );
        let _ = writeln!(
            s,
            "iterations         {} (converged: {})",
            self.iterations, self.converged
        );
        let _ = writeln!(s, "maximizer          {:?}", self.maximizer);
        s
    }
}

#[derive(Serialize)]
pub struct DiameterSide {
    pub diameter: f64,
    pub kappa: f64,
    pub nonzero_columns: usize,
    pub columns_comparable: bool,
}

impl From<DiameterReport> for DiameterSide {
    fn from(d: DiameterReport) -> Self {
        Self {
            diameter: d.diameter,
            kappa: certnorm::cone::ratio_from_diameter(d.diameter),
            nonzero_columns: d.nonzero_columns,
            columns_comparable: d.columns_comparable,
        }
    }
}

#[derive(Serialize)]
pub struct KappaReport {
    pub version: &'static str,
    pub command: &'static str,
    pub matrix: String,
    pub a: DiameterSide,
    pub a_transpose: DiameterSide,
}

impl KappaReport {
    pub fn new(matrix: String, a: DiameterReport, at: DiameterReport) -> Self {
        Self {
            version: VERSION,
            command: "kappa",
            matrix,
            a: a.into(),
            a_transpose: at.into(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, d) in [("A", &self.a), ("A^T", &self.a_transpose)] {
            let _ = writeln!(
                s,
                "{name:<4} Delta = {:<22} kappa_H = {:<22} comparable columns: {}",
                d.diameter, d.kappa, d.columns_comparable
            );
        }
        s
    }
}

#[derive(Serialize)]
pub struct LscOutput {
    pub version: &'static str,
    pub command: &'static str,
    pub matrix: String,
    pub pi: Vec<f64>,
    #[serde(flatten)]
    pub report: LscReport,
    pub sigma_exact: Option<f64>,
    pub sqrt_ab: Option<f64>,
}

impl LscOutput {
    pub fn new(
        matrix: String,
        pi: Vec<f64>,
        report: LscReport,
        two_state: Option<(f64, f64)>,
    ) -> Self {
        Self {
            version: VERSION,
            command: "lsc",
            matrix,
            pi,
            report,
            sigma_exact: two_state.map(|t| t.0),
            sqrt_ab: two_state.map(|t| t.1),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:>14}  {:>22}  {:>22}", "t", "rho(t)", "sigma_LB(t)");
        for b in &self.report.per_t_bounds {
            let flag = if b.reliable { "" } else { "  (unreliable)" };
            let _ = writeln!(
                s,
                "{:>14.6e}  {:>22.15e}  {:>22.15e}{flag}",
                b.t, b.rho, b.sigma_lb
            );
        }
        let _ = writeln!(
            s,
            "sigma_lower  {:.15e}  (t = {:e})",
            self.report.sigma_lower, self.report.best_t
        );
        let _ = writeln!(
            s,
            "sigma_upper  {:.15e}  (lambda / 2)",
            self.report.sigma_upper
        );
        if let (Some(e), Some(r)) = (self.sigma_exact, self.sqrt_ab) {
            let _ = writeln!(s, "sigma_exact  {e:.15e}");
            let _ = writeln!(s, "sqrt(ab)     {r:.15e}");
        }
        s
    }
}
