//! Monotone vector norms built from weighted `l^p` pieces, their duals and
//! their duality maps.
//!
//! Three shapes are supported:
//!
//! * a weighted leaf `||x||_{w,p} = (sum_i w_i |x_i|^p)^(1/p)` with `w > 0`;
//! * a composed norm `(sum_k ||x||_{w_k,p_k}^s)^(1/s)`;
//! * the dual of a composed norm, i.e. the infimal convolution
//!   `min_{u_1+..+u_h = x} (sum_k ||u_k||_{v_k,q_k}^t)^(1/t)`.
//!
//! Everything the power method needs reduces to one explicit form,
//! [`ComposedNormSpec`]: the leaf is a one-term composition with `s = p`, the
//! dual of a dual-composed norm is the composition of the dual terms with the
//! conjugate outer exponent, and a composition whose term supports are
//! pairwise disjoint has an explicit dual of the same kind. The infimal
//! convolution with overlapping supports has no closed form and is reported
//! as [`Error::NotEvaluable`].

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Which of the two norms of a dual pair an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Primal,
    Dual,
}

/// Hölder conjugate `p / (p - 1)` of an exponent in `(1, inf)`.
pub fn dual_exponent(p: f64) -> Result<f64> {
    if p.is_nan() || p <= 1.0 || p.is_infinite() {
        return Err(Error::InvalidExponent(p));
    }
    Ok(p / (p - 1.0))
}

/// Conjugate of an outer exponent in `[1, inf]`, with `1 <-> inf`.
fn outer_conjugate(s: f64) -> f64 {
    if s == 1.0 {
        f64::INFINITY
    } else if s.is_infinite() {
        1.0
    } else {
        s / (s - 1.0)
    }
}

/// Dual weights `w_i^(1 - p*)`, keeping zero weights at zero.
pub fn dual_weights(weights: &[f64], p: f64) -> Result<Vec<f64>> {
    let e = 1.0 - dual_exponent(p)?;
    Ok(weights
        .iter()
        .map(|&w| if w > 0.0 { w.powf(e) } else { 0.0 })
        .collect())
}

/// Signed power `Phi_p(x)_i = |x_i|^(p-2) x_i`; exact zeros stay zero.
pub fn phi(x: &[f64], p: f64) -> Vec<f64> {
    x.iter().map(|&v| signed_pow(v, p - 1.0)).collect()
}

#[inline]
fn signed_pow(v: f64, e: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * (e * v.abs().ln()).exp()
    }
}

/// A weighted `l^p` (semi)norm `||x||_{w,p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPTerm {
    weights: Vec<f64>,
    p: f64,
}

impl WeightedPTerm {
    pub fn new(weights: Vec<f64>, p: f64) -> Result<Self> {
        dual_exponent(p)?;
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidInput(
                "weights must be finite and nonnegative".into(),
            ));
        }
        if weights.iter().all(|w| *w == 0.0) {
            return Err(Error::InvalidInput("weight vector must be nonzero".into()));
        }
        Ok(Self { weights, p })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Number of positive weights.
    pub fn support_size(&self) -> usize {
        self.weights.iter().filter(|w| **w > 0.0).count()
    }

    /// The dual term `||.||_{w*, p*}`.
    pub fn dual(&self) -> Self {
        Self {
            weights: dual_weights(&self.weights, self.p).expect("exponent validated"),
            p: dual_exponent(self.p).expect("exponent validated"),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let c = self
            .weights
            .iter()
            .zip(x)
            .filter(|(w, _)| **w > 0.0)
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max);
        if c == 0.0 {
            return 0.0;
        }
        let sum: f64 = self
            .weights
            .iter()
            .zip(x)
            .filter(|(w, v)| **w > 0.0 && **v != 0.0)
            .map(|(w, v)| w * (self.p * (v.abs() / c).ln()).exp())
            .sum();
        c * sum.powf(1.0 / self.p)
    }
}

/// `(sum_k ||x||_{w_k,p_k}^s)^(1/s)`; the outer exponent may be `inf` (max)
/// only for forms derived internally as duals.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedNormSpec {
    terms: Vec<WeightedPTerm>,
    s: f64,
}

fn validate_terms(terms: &[WeightedPTerm]) -> Result<usize> {
    let n = terms
        .first()
        .ok_or_else(|| Error::InvalidInput("at least one term is required".into()))?
        .dim();
    for t in terms {
        check_dim(n, t.dim())?;
    }
    if (0..n).any(|i| terms.iter().all(|t| t.weights[i] == 0.0)) {
        return Err(Error::InvalidInput(
            "the sum of the term weights must be entrywise positive".into(),
        ));
    }
    Ok(n)
}

fn supports_disjoint(terms: &[WeightedPTerm]) -> bool {
    let n = terms.first().map_or(0, WeightedPTerm::dim);
    (0..n).all(|i| terms.iter().filter(|t| t.weights[i] > 0.0).count() <= 1)
}

impl ComposedNormSpec {
    /// Validated composed norm with outer exponent `s` in `[1, inf)`.
    /// `s = 1` is accepted only when every term has at least two positive
    /// weights, the condition under which the composition is differentiable.
    pub fn new(terms: Vec<WeightedPTerm>, s: f64) -> Result<Self> {
        validate_terms(&terms)?;
        if !(s >= 1.0 && s.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "outer exponent s = {s} must lie in [1, inf)"
            )));
        }
        let spec = Self { terms, s };
        if s == 1.0 && !spec.is_differentiable() {
            return Err(Error::NotDifferentiable(
                "s = 1 requires every weight vector to have at least two positive entries".into(),
            ));
        }
        Ok(spec)
    }

    fn raw(terms: Vec<WeightedPTerm>, s: f64) -> Self {
        Self { terms, s }
    }

    pub fn terms(&self) -> &[WeightedPTerm] {
        &self.terms
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.terms[0].dim()
    }

    pub fn disjoint_support(&self) -> bool {
        supports_disjoint(&self.terms)
    }

    pub fn is_differentiable(&self) -> bool {
        if self.s.is_infinite() {
            false
        } else if self.s > 1.0 {
            true
        } else {
            self.terms.iter().all(|t| t.support_size() >= 2)
        }
    }

    fn outer(&self, values: impl Iterator<Item = f64>) -> f64 {
        let values: Vec<f64> = values.collect();
        let m = values.iter().copied().fold(0.0, f64::max);
        if m == 0.0 || self.s.is_infinite() {
            return m;
        }
        let sum: f64 = values
            .iter()
            .filter(|v| **v > 0.0)
            .map(|v| (self.s * (v / m).ln()).exp())
            .sum();
        m * sum.powf(1.0 / self.s)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.outer(self.terms.iter().map(|t| t.value(x)))
    }

    /// Explicit dual, available when the term supports are pairwise disjoint.
    pub fn dual(&self) -> Result<Self> {
        if !self.disjoint_support() {
            return Err(Error::NotEvaluable(
                "dual of a composition with overlapping supports is an infimal convolution".into(),
            ));
        }
        Ok(Self::raw(
            self.terms.iter().map(WeightedPTerm::dual).collect(),
            outer_conjugate(self.s),
        ))
    }

    /// Gradient of the norm (duality map `J`); `J(0) = 0`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        if !self.is_differentiable() {
            return Err(Error::NotDifferentiable(format!(
                "composition with outer exponent {}",
                self.s
            )));
        }
        Ok(self.gradient_unchecked(x))
    }

    /// Gradient formula without the differentiability check; on strictly
    /// positive vectors it is the gradient even when `s = 1` and a term has
    /// a single positive weight.
    pub(crate) fn gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let c = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if c == 0.0 {
            return vec![0.0; n];
        }
        let xs: Vec<f64> = x.iter().map(|v| v / c).collect();
        let values: Vec<f64> = self.terms.iter().map(|t| t.value(&xs)).collect();
        let total = self.outer(values.iter().copied());
        let mut out = vec![0.0; n];
        for (term, &v) in self.terms.iter().zip(&values) {
            if v == 0.0 {
                continue;
            }
            let factor = ((1.0 - self.s) * total.ln() + (self.s - term.p) * v.ln()).exp();
            for ((o, &w), &xi) in out.iter_mut().zip(&term.weights).zip(&xs) {
                if w > 0.0 {
                    *o += factor * w * signed_pow(xi, term.p - 1.0);
                }
            }
        }
        out
    }

    /// Upper bound `(s - 1) + sum_k max(0, p_k - s)` on the Birkhoff ratio of
    /// the duality map.
    pub fn kappa_bound(&self) -> Result<f64> {
        if !self.is_differentiable() {
            return Err(Error::NotDifferentiable(format!(
                "composition with outer exponent {}",
                self.s
            )));
        }
        Ok((self.s - 1.0)
            + self
                .terms
                .iter()
                .map(|t| (t.p - self.s).max(0.0))
                .sum::<f64>())
    }

    /// The duality map is a positive multiple of `diag(w) x` (all exponents 2).
    pub(crate) fn linear_weights(&self) -> Option<Vec<f64>> {
        if self.s != 2.0 || self.terms.iter().any(|t| t.p != 2.0) {
            return None;
        }
        let mut w = vec![0.0; self.dim()];
        for t in &self.terms {
            for (a, b) in w.iter_mut().zip(&t.weights) {
                *a += b;
            }
        }
        Some(w)
    }

    /// `(||e_1||, ..., ||e_n||)`.
    pub fn unit_basis_norms(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                self.outer(self.terms.iter().map(|t| {
                    if t.weights[i] > 0.0 {
                        t.weights[i].powf(1.0 / t.p)
                    } else {
                        0.0
                    }
                }))
            })
            .collect()
    }

    pub(crate) fn nnz(&self) -> usize {
        self.terms.iter().map(WeightedPTerm::support_size).sum()
    }
}

/// Dual of a composed norm: `min_{u_1+..+u_h=x} (sum_k ||u_k||_{v_k,q_k}^t)^(1/t)`.
///
/// `t = inf` (whose dual has outer exponent 1) requires every weight vector
/// to carry at least two positive entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DualComposedNormSpec {
    terms: Vec<WeightedPTerm>,
    t: f64,
    disjoint_support: bool,
}

impl DualComposedNormSpec {
    pub fn new(terms: Vec<WeightedPTerm>, t: f64) -> Result<Self> {
        validate_terms(&terms)?;
        if t.is_nan() || t <= 1.0 {
            return Err(Error::OutOfRange(format!(
                "outer exponent t = {t} must lie in (1, inf]"
            )));
        }
        if t.is_infinite() && terms.iter().any(|x| x.support_size() < 2) {
            return Err(Error::NotDifferentiable(
                "t = inf requires every weight vector to have at least two positive entries".into(),
            ));
        }
        let disjoint_support = supports_disjoint(&terms);
        Ok(Self {
            terms,
            t,
            disjoint_support,
        })
    }

    pub fn terms(&self) -> &[WeightedPTerm] {
        &self.terms
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.terms[0].dim()
    }

    pub fn disjoint_support(&self) -> bool {
        self.disjoint_support
    }

    /// The explicit dual norm `(sum_k ||x||_{v_k*, q_k*}^{t*})^(1/t*)`.
    pub fn dual_form(&self) -> ComposedNormSpec {
        ComposedNormSpec::raw(
            self.terms.iter().map(WeightedPTerm::dual).collect(),
            outer_conjugate(self.t),
        )
    }

    /// The norm itself in closed form, available for disjoint supports.
    pub fn primal_form(&self) -> Result<ComposedNormSpec> {
        if !self.disjoint_support {
            return Err(Error::NotEvaluable(
                "infimal convolution over overlapping supports".into(),
            ));
        }
        Ok(ComposedNormSpec::raw(self.terms.clone(), self.t))
    }
}

/// Declarative description of a vector norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNormSpec", into = "RawNormSpec")]
pub enum NormSpec {
    WeightedP(WeightedPTerm),
    Composed(ComposedNormSpec),
    DualComposed(DualComposedNormSpec),
}

impl NormSpec {
    /// Plain `l^p` norm on `R^n`.
    pub fn lp(n: usize, p: f64) -> Result<Self> {
        Self::weighted(vec![1.0; n], p)
    }

    /// Weighted `l^p` norm; the weights must be strictly positive.
    pub fn weighted(weights: Vec<f64>, p: f64) -> Result<Self> {
        if weights.iter().any(|w| *w <= 0.0) {
            return Err(Error::InvalidInput(
                "weighted norm needs strictly positive weights".into(),
            ));
        }
        Ok(Self::WeightedP(WeightedPTerm::new(weights, p)?))
    }

    pub fn composed(terms: Vec<WeightedPTerm>, s: f64) -> Result<Self> {
        Ok(Self::Composed(ComposedNormSpec::new(terms, s)?))
    }

    pub fn dual_composed(terms: Vec<WeightedPTerm>, t: f64) -> Result<Self> {
        Ok(Self::DualComposed(DualComposedNormSpec::new(terms, t)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::WeightedP(t) => t.dim(),
            Self::Composed(c) => c.dim(),
            Self::DualComposed(d) => d.dim(),
        }
    }

    /// Closed form of the norm itself.
    pub fn primal_form(&self) -> Result<ComposedNormSpec> {
        match self {
            Self::WeightedP(t) => Ok(ComposedNormSpec::raw(vec![t.clone()], t.p)),
            Self::Composed(c) => Ok(c.clone()),
            Self::DualComposed(d) => d.primal_form(),
        }
    }

    /// Closed form of the dual norm.
    pub fn dual_form(&self) -> Result<ComposedNormSpec> {
        match self {
            Self::WeightedP(t) => {
                let d = t.dual();
                let p = d.p;
                Ok(ComposedNormSpec::raw(vec![d], p))
            }
            Self::Composed(c) => c.dual(),
            Self::DualComposed(d) => Ok(d.dual_form()),
        }
    }

    pub fn form(&self, side: Side) -> Result<ComposedNormSpec> {
        match side {
            Side::Primal => self.primal_form(),
            Side::Dual => self.dual_form(),
        }
    }

    /// `||x||`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.primal_form()?.value(x))
    }

    /// `||x||_*`.
    pub fn eval_dual(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.dual_form()?.value(x))
    }

    /// The side whose duality map has a closed form and is the one the power
    /// method uses: the norm itself for leaves and compositions, the dual
    /// norm for a dual-composed spec.
    pub fn working_side(&self) -> Side {
        match self {
            Self::DualComposed(_) => Side::Dual,
            _ => Side::Primal,
        }
    }

    /// Duality map of the working side (see [`NormSpec::working_side`]).
    /// Satisfies `<J(x), x> = ||x||` and `||J(x)||_* = 1` on that side.
    pub fn duality_map(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.form(self.working_side())?.gradient(x)
    }

    /// Birkhoff-ratio bound for the duality map of the requested side.
    pub fn birkhoff_bound_j(&self, side: Side) -> Result<f64> {
        self.form(side)?.kappa_bound()
    }

    /// `(||e_1||, ..., ||e_n||)`. For an infimal convolution with overlapping
    /// supports it uses `||e_i|| = 1 / ||e_i||_*`, valid for monotone norms.
    pub fn unit_basis_norms(&self) -> Vec<f64> {
        match self.primal_form() {
            Ok(f) => f.unit_basis_norms(),
            Err(_) => self
                .dual_form()
                .expect("dual of a dual-composed spec is explicit")
                .unit_basis_norms()
                .into_iter()
                .map(|v| 1.0 / v)
                .collect(),
        }
    }

    /// `max_{x != 0} ||x|| / ||x||_inf = ||1||` for monotone norms. The
    /// second component is false when only the upper bound `sum_i ||e_i||`
    /// is available.
    pub fn inf_ball_constant(&self) -> (f64, bool) {
        match self.primal_form() {
            Ok(f) => (f.value(&vec![1.0; self.dim()]), true),
            Err(_) => (self.unit_basis_norms().iter().sum(), false),
        }
    }

    /// Number of positive weights across all terms.
    pub fn nnz(&self) -> usize {
        match self {
            Self::WeightedP(t) => t.support_size(),
            Self::Composed(c) => c.nnz(),
            Self::DualComposed(d) => d.terms.iter().map(WeightedPTerm::support_size).sum(),
        }
    }
}

// JSON schema

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Exponent {
    Number(f64),
    Text(String),
}

impl Exponent {
    fn value(&self) -> Result<f64> {
        match self {
            Self::Number(v) => Ok(*v),
            Self::Text(s) if matches!(s.trim(), "inf" | "infinity" | "Infinity") => {
                Ok(f64::INFINITY)
            }
            Self::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {s:?}"))),
        }
    }

    fn from_f64(v: f64) -> Self {
        if v.is_infinite() {
            Self::Text("inf".into())
        } else {
            Self::Number(v)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawTerm {
    weights: Vec<f64>,
    #[serde(alias = "q")]
    p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RawNormSpec {
    WeightedP {
        weights: Vec<f64>,
        p: f64,
    },
    Composed {
        s: f64,
        terms: Vec<RawTerm>,
    },
    DualComposed {
        t: Exponent,
        terms: Vec<RawTerm>,
        #[serde(default, skip_deserializing)]
        disjoint_support: bool,
    },
}

fn raw_terms(terms: Vec<RawTerm>) -> Result<Vec<WeightedPTerm>> {
    terms
        .into_iter()
        .map(|t| WeightedPTerm::new(t.weights, t.p))
        .collect()
}

impl TryFrom<RawNormSpec> for NormSpec {
    type Error = Error;

    fn try_from(raw: RawNormSpec) -> Result<Self> {
        match raw {
            RawNormSpec::WeightedP { weights, p } => Self::weighted(weights, p),
            RawNormSpec::Composed { s, terms } => Self::composed(raw_terms(terms)?, s),
            RawNormSpec::DualComposed { t, terms, .. } => {
                Self::dual_composed(raw_terms(terms)?, t.value()?)
            }
        }
    }
}

impl From<NormSpec> for RawNormSpec {
    fn from(spec: NormSpec) -> Self {
        let terms = |ts: &[WeightedPTerm]| {
            ts.iter()
                .map(|t| RawTerm {
                    weights: t.weights.clone(),
                    p: t.p,
                })
                .collect()
        };
        match spec {
            NormSpec::WeightedP(t) => RawNormSpec::WeightedP {
                weights: t.weights,
                p: t.p,
            },
            NormSpec::Composed(c) => RawNormSpec::Composed {
                s: c.s,
                terms: terms(&c.terms),
            },
            NormSpec::DualComposed(d) => RawNormSpec::DualComposed {
                t: Exponent::from_f64(d.t),
                terms: terms(&d.terms),
                disjoint_support: d.disjoint_support,
            },
        }
    }
}

impl NormSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("norm specs always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(w: &[f64], p: f64) -> WeightedPTerm {
        WeightedPTerm::new(w.to_vec(), p).unwrap()
    }

    fn sqrt29_spec() -> NormSpec {
        NormSpec::composed(
            vec![term(&[1.0, 1.0, 0.0], 2.0), term(&[0.0, 0.0, 1.0], 3.0)],
            2.0,
        )
        .unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn dual_exponent_examples() {
        assert_eq!(dual_exponent(2.0).unwrap(), 2.0);
        assert!(close(dual_exponent(3.0).unwrap(), 1.5, 1e-15));
        assert!(close(dual_exponent(4.0 / 3.0).unwrap(), 4.0, 1e-14));
        assert!(dual_exponent(1.0).is_err());
        assert!(dual_exponent(0.5).is_err());
        assert!(dual_exponent(f64::INFINITY).is_err());
        assert!(close(
            dual_exponent(dual_exponent(3.7).unwrap()).unwrap(),
            3.7,
            1e-14
        ));
    }

    #[test]
    fn dual_weight_examples() {
        let w = dual_weights(&[4.0, 1.0], 2.0).unwrap();
        assert!(close(w[0], 0.25, 1e-15) && close(w[1], 1.0, 1e-15));
        let w = dual_weights(&[0.0, 9.0], 3.0).unwrap();
        assert_eq!(w[0], 0.0);
        assert!(close(w[1], 1.0 / 3.0, 1e-15));
        assert_eq!(dual_weights(&[1.0, 1.0, 1.0], 5.0).unwrap(), vec![1.0; 3]);
        let back = dual_weights(
            &dual_weights(&[0.3, 7.0], 2.5).unwrap(),
            dual_exponent(2.5).unwrap(),
        )
        .unwrap();
        assert!(close(back[0], 0.3, 1e-14) && close(back[1], 7.0, 1e-14));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&[1.0, 2.0], 3.0), vec![1.0, 4.0]);
        assert_eq!(phi(&[1.5, -2.0], 2.0), vec![1.5, -2.0]);
        let v = phi(&[4.0, 0.0], 1.5);
        assert!(close(v[0], 2.0, 1e-15));
        assert_eq!(v[1], 0.0);
    }

    #[test]
    fn eval_examples() {
        let l2 = NormSpec::lp(2, 2.0).unwrap();
        assert!(close(l2.eval(&[3.0, 4.0]).unwrap(), 5.0, 1e-15));
        assert!(close(
            sqrt29_spec().eval(&[3.0, 4.0, 2.0]).unwrap(),
            29f64.sqrt(),
            1e-15
        ));
        let dual = NormSpec::dual_composed(
            vec![term(&[1.0, 1.0, 0.0], 2.0), term(&[0.0, 0.0, 1.0], 3.0)],
            2.0,
        )
        .unwrap();
        assert!(close(
            dual.eval(&[3.0, 4.0, 2.0]).unwrap(),
            29f64.sqrt(),
            1e-15
        ));
        assert!(l2.eval(&[1.0]).is_err());
    }

    #[test]
    fn overlapping_dual_composed_is_not_evaluable() {
        let spec =
            NormSpec::dual_composed(vec![term(&[1.0, 1.0], 3.0), term(&[1.0, 1.0], 4.0)], 2.0)
                .unwrap();
        assert!(matches!(
            spec.eval(&[1.0, 1.0]),
            Err(Error::NotEvaluable(_))
        ));
        assert!(spec.eval_dual(&[1.0, 1.0]).is_ok());
        assert!(spec.duality_map(&[1.0, 2.0]).is_ok());
    }

    #[test]
    fn eval_dual_examples() {
        let l3 = NormSpec::lp(2, 3.0).unwrap();
        assert!(close(
            l3.eval_dual(&[1.0, 1.0]).unwrap(),
            2f64.powf(2.0 / 3.0),
            1e-15
        ));
        let w = NormSpec::weighted(vec![4.0, 1.0], 2.0).unwrap();
        assert!(close(w.eval_dual(&[2.0, 1.0]).unwrap(), 2f64.sqrt(), 1e-15));
        assert_eq!(sqrt29_spec().eval_dual(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        let overlapping =
            NormSpec::composed(vec![term(&[1.0, 1.0], 2.0), term(&[1.0, 1.0], 3.0)], 2.0).unwrap();
        assert!(matches!(
            overlapping.eval_dual(&[1.0, 1.0]),
            Err(Error::NotEvaluable(_))
        ));
    }

    #[test]
    fn duality_map_examples() {
        let l2 = NormSpec::lp(3, 2.0).unwrap();
        let j = l2.duality_map(&[3.0, 0.0, 4.0]).unwrap();
        assert!(close(j[0], 0.6, 1e-15) && j[1] == 0.0 && close(j[2], 0.8, 1e-15));

        let l3 = NormSpec::lp(2, 3.0).unwrap();
        let j = l3.duality_map(&[1.0, 2.0]).unwrap();
        let c = 9f64.powf(-2.0 / 3.0);
        assert!(close(j[0], c, 1e-14) && close(j[1], 4.0 * c, 1e-14));
        let dot = j[0] + 2.0 * j[1];
        assert!(close(dot, 9f64.powf(1.0 / 3.0), 1e-14));

        let spec = sqrt29_spec();
        let x = [3.0, 4.0, 2.0];
        let j = spec.duality_map(&x).unwrap();
        let dot: f64 = j.iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!(close(dot, 29f64.sqrt(), 1e-14));
        assert!(close(spec.eval_dual(&j).unwrap(), 1.0, 1e-14));

        assert_eq!(spec.duality_map(&[0.0; 3]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn birkhoff_bound_examples() {
        let s1 =
            NormSpec::composed(vec![term(&[1.0, 1.0], 3.0), term(&[1.0, 1.0], 4.5)], 1.0).unwrap();
        assert!(close(
            s1.birkhoff_bound_j(Side::Primal).unwrap(),
            3.0 + 4.5 - 2.0,
            1e-15
        ));
        let w = NormSpec::weighted(vec![2.0, 3.0], 3.0).unwrap();
        assert!(close(w.birkhoff_bound_j(Side::Primal).unwrap(), 2.0, 1e-15));
        assert!(close(w.birkhoff_bound_j(Side::Dual).unwrap(), 0.5, 1e-15));
        let dc = NormSpec::dual_composed(vec![term(&[1.0, 1.0], 2.0), term(&[1.0, 1.0], 5.0)], 2.0)
            .unwrap();
        assert!(close(dc.birkhoff_bound_j(Side::Dual).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn s_equal_one_needs_two_positive_entries() {
        let r = NormSpec::composed(vec![term(&[1.0, 0.0], 2.0), term(&[0.0, 1.0], 2.0)], 1.0);
        assert!(matches!(r, Err(Error::NotDifferentiable(_))));
        let r = NormSpec::dual_composed(
            vec![term(&[1.0, 0.0], 2.0), term(&[0.0, 1.0], 2.0)],
            f64::INFINITY,
        );
        assert!(r.is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(NormSpec::composed(vec![term(&[1.0, 0.0], 2.0)], 2.0).is_err());
        assert!(NormSpec::composed(vec![term(&[1.0, 1.0], 2.0)], 0.5).is_err());
        assert!(NormSpec::weighted(vec![1.0, 0.0], 2.0).is_err());
        assert!(WeightedPTerm::new(vec![0.0, 0.0], 2.0).is_err());
        assert!(WeightedPTerm::new(vec![1.0], 1.0).is_err());
        assert!(NormSpec::composed(vec![term(&[1.0, 1.0], 2.0), term(&[1.0], 2.0)], 2.0).is_err());
    }

    #[test]
    fn unit_basis_norm_examples() {
        let w = NormSpec::weighted(vec![4.0, 9.0], 2.0).unwrap();
        let e = w.unit_basis_norms();
        assert!(close(e[0], 2.0, 1e-15) && close(e[1], 3.0, 1e-15));
        assert_eq!(
            NormSpec::lp(3, 3.3).unwrap().unit_basis_norms(),
            vec![1.0; 3]
        );
        assert_eq!(sqrt29_spec().unit_basis_norms(), vec![1.0; 3]);
    }

    #[test]
    fn unit_basis_norms_of_infimal_convolution() {
        // e_i splits between two weighted scalars a_k |c_k|, giving
        // (sum_k a_k^{-t*})^{-1/t*}
        let spec =
            NormSpec::dual_composed(vec![term(&[4.0, 1.0], 2.0), term(&[1.0, 1.0], 2.0)], 2.0)
                .unwrap();
        let e = spec.unit_basis_norms();
        let expect0 = (1.0f64 / 4.0 + 1.0).powf(-0.5);
        assert!(close(e[0], expect0, 1e-14));
        assert!(close(e[1], 0.5f64.sqrt(), 1e-14));
    }

    #[test]
    fn json_round_trip_and_recomputed_flag() {
        let text = r#"{"type":"dual_composed","t":"inf","disjoint_support":true,
            "terms":[{"weights":[1,1,0],"q":2.0},{"weights":[0,1,1],"q":3.0}]}"#;
        let spec = NormSpec::from_json(text).unwrap();
        match &spec {
            NormSpec::DualComposed(d) => {
                assert!(!d.disjoint_support());
                assert!(d.t().is_infinite());
            }
            _ => panic!("wrong variant"),
        }
        let back = NormSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);

        let w = NormSpec::from_json(r#"{"type":"weighted_p","weights":[1,2],"p":3}"#).unwrap();
        assert_eq!(w, NormSpec::weighted(vec![1.0, 2.0], 3.0).unwrap());
        assert!(NormSpec::from_json(r#"{"type":"weighted_p","weights":[1,2],"p":1}"#).is_err());
        assert!(NormSpec::from_json(r#"{"type":"l7"}"#).is_err());
    }
}
