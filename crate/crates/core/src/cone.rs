//! Hilbert's projective metric on the nonnegative orthant, projective
//! diameters of nonnegative matrices and their Birkhoff contraction ratios.
//!
//! Distances, diameters and sup-ratios are extended reals: `f64::INFINITY`
//! is an ordinary return value (non-comparable vectors, matrices whose
//! nonzero columns lie in different parts of the cone) and never an error.
//!
//! Ratios are evaluated in log space, so widely scaled entries neither
//! overflow nor underflow.

use crate::error::{check_dim, Result};
use crate::matrix::NonnegMatrix;

/// True iff `x` and `y` have the same zero pattern, i.e. `c y <= x <= C y`
/// for some `c, C > 0`.
pub fn comparable(x: &[f64], y: &[f64]) -> Result<bool> {
    check_dim(x.len(), y.len())?;
    Ok(x.iter().zip(y).all(|(a, b)| (*a > 0.0) == (*b > 0.0)))
}

/// `M(x/y) = inf { C > 0 : x <= C y }`.
pub fn sup_ratio(x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(x.len(), y.len())?;
    let mut m = 0.0f64;
    for (&a, &b) in x.iter().zip(y) {
        if a > 0.0 {
            if b > 0.0 {
                m = m.max(a / b);
            } else {
                return Ok(f64::INFINITY);
            }
        }
    }
    Ok(m)
}

/// Hilbert's projective metric `d_H(x, y) = ln(M(x/y) M(y/x))`.
///
/// Zero for `x = y = 0`, `+inf` when the vectors are not comparable.
pub fn hilbert_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(x.len(), y.len())?;
    Ok(pair_distance(x, y, 0.0))
}

/// `d_H` with entries `<= zero_tol` treated as zero. The ratio product is
/// formed directly when it is representable, so proportional vectors give
/// exactly zero; otherwise it is accumulated in log space.
fn pair_distance(x: &[f64], y: &[f64], zero_tol: f64) -> f64 {
    let mut up = 0.0f64;
    let mut down = 0.0f64;
    let mut any = false;
    for (&a, &b) in x.iter().zip(y) {
        match (a > zero_tol, b > zero_tol) {
            (true, true) => {
                up = up.max(a / b);
                down = down.max(b / a);
                any = true;
            }
            (false, false) => {}
            _ => return f64::INFINITY,
        }
    }
    if !any {
        return 0.0;
    }
    let prod = up * down;
    if prod.is_finite() && up >= f64::MIN_POSITIVE && down >= f64::MIN_POSITIVE {
        return prod.ln().max(0.0);
    }
    let mut lup = f64::NEG_INFINITY;
    let mut ldown = f64::NEG_INFINITY;
    for (&a, &b) in x.iter().zip(y) {
        if a > zero_tol {
            let d = a.ln() - b.ln();
            lup = lup.max(d);
            ldown = ldown.max(-d);
        }
    }
    (lup + ldown).max(0.0)
}

/// Structure of the column set used by the diameter formula.
#[derive(Debug, Clone, PartialEq)]
pub struct DiameterReport {
    /// `Delta(A)`, possibly `+inf`.
    pub diameter: f64,
    /// Number of nonzero columns.
    pub nonzero_columns: usize,
    /// Whether all nonzero columns lie in the same part of the cone.
    pub columns_comparable: bool,
}

/// Projective diameter `Delta(A)` from pairwise Hilbert distances of the
/// nonzero columns. Zero columns are ignored; non-comparable nonzero columns
/// give `+inf`.
pub fn projective_diameter(a: &NonnegMatrix) -> f64 {
    diameter_report(a, 0.0).diameter
}

/// As [`projective_diameter`], treating entries `<= zero_tol` as exact zeros.
pub fn projective_diameter_with_tol(a: &NonnegMatrix, zero_tol: f64) -> f64 {
    diameter_report(a, zero_tol).diameter
}

pub fn diameter_report(a: &NonnegMatrix, zero_tol: f64) -> DiameterReport {
    let cols: Vec<Vec<f64>> = (0..a.cols())
        .map(|j| a.column(j))
        .filter(|c| c.iter().any(|v| *v > zero_tol))
        .collect();
    let mut diam = 0.0f64;
    for (idx, ci) in cols.iter().enumerate() {
        for cj in &cols[idx + 1..] {
            let d = pair_distance(ci, cj, zero_tol);
            if d.is_infinite() {
                return DiameterReport {
                    diameter: f64::INFINITY,
                    nonzero_columns: cols.len(),
                    columns_comparable: false,
                };
            }
            diam = diam.max(d);
        }
    }
    DiameterReport {
        diameter: diam,
        nonzero_columns: cols.len(),
        columns_comparable: true,
    }
}

/// `ln max_{i,j,k,l} a_ki a_lj / (a_kj a_li)` for a strictly positive matrix;
/// `None` if some entry is zero.
pub fn cross_ratio_diameter(a: &NonnegMatrix) -> Option<f64> {
    if !a.is_positive() {
        return None;
    }
    let (m, n) = (a.rows(), a.cols());
    let mut best = 1.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    let r = (a.get(k, i) * a.get(l, j)) / (a.get(k, j) * a.get(l, i));
                    best = best.max(r);
                }
            }
        }
    }
    Some(best.ln())
}

/// `tanh(Delta / 4)` with `tanh(inf) = 1`.
pub fn ratio_from_diameter(diameter: f64) -> f64 {
    if diameter.is_infinite() {
        1.0
    } else {
        (diameter / 4.0).tanh()
    }
}

/// `ln tanh(Delta / 4)` without cancellation when the ratio is close to one.
pub fn ln_ratio_from_diameter(diameter: f64) -> f64 {
    let u = (-diameter / 2.0).exp();
    (-u).ln_1p() - u.ln_1p()
}

/// Birkhoff contraction ratio `kappa_H(A) = tanh(Delta(A) / 4)`, in `[0, 1]`.
pub fn birkhoff_ratio(a: &NonnegMatrix) -> f64 {
    ratio_from_diameter(projective_diameter(a))
}
