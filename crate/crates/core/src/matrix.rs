//! Dense nonnegative vectors and matrices.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// A vector with entrywise nonnegative, finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct NonnegVector(Vec<f64>);

impl NonnegVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = entries
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidInput(format!(
                "entry {i} = {v} is not a finite nonnegative number"
            )));
        }
        Ok(Self(entries))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// True when every entry is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&v| v > 0.0)
    }
}

impl Deref for NonnegVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for NonnegVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<NonnegVector> for Vec<f64> {
    fn from(v: NonnegVector) -> Vec<f64> {
        v.0
    }
}

/// Dense row-major matrix with finite nonnegative entries.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct NonnegMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl NonnegMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        if let Some((i, v)) = data
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidInput(format!(
                "entry ({}, {}) = {v} is not a finite nonnegative number",
                i / cols.max(1),
                i % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            check_dim(n, r.len())?;
            data.extend_from_slice(r);
        }
        Self::new(m, n, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        debug_assert!(data.iter().all(|v| *v >= 0.0));
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|v| **v > 0.0).count()
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|v| *v > 0.0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `A^T y`.
    pub fn mul_t_vec(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.rows, y.len())?;
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        Ok(out)
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut data = vec![0.0; m * n];
        for i in 0..m {
            let out = &mut data[i * n..(i + 1) * n];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(other.row(l)) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: m,
            cols: n,
            data,
        })
    }

    /// `diag(left) * self * diag(right)`; both scalings must be nonnegative.
    pub fn scale(&self, left: &[f64], right: &[f64]) -> Result<Self> {
        check_dim(self.rows, left.len())?;
        check_dim(self.cols, right.len())?;
        let mut data = self.data.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[i * self.cols + j] *= left[i] * right[j];
            }
        }
        Self::new(self.rows, self.cols, data)
    }

    /// Entrywise `a * self + b * other`, with `a, b >= 0`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    /// Block matrix assembled from a grid of equally sized blocks; `None` is a zero block.
    pub fn from_blocks(blocks: &[Vec<Option<&NonnegMatrix>>]) -> Result<Self> {
        let br = blocks.len();
        let bc = blocks.first().map_or(0, Vec::len);
        let mut row_sizes = vec![None; br];
        let mut col_sizes = vec![None; bc];
        for (i, brow) in blocks.iter().enumerate() {
            check_dim(bc, brow.len())?;
            for (j, b) in brow.iter().enumerate() {
                if let Some(b) = b {
                    for (slot, size) in [(&mut row_sizes[i], b.rows), (&mut col_sizes[j], b.cols)] {
                        match slot {
                            Some(s) if *s != size => {
                                return Err(Error::DimensionMismatch {
                                    expected: *s,
                                    got: size,
                                })
                            }
                            _ => *slot = Some(size),
                        }
                    }
                }
            }
        }
        let rs: Vec<usize> = row_sizes
            .into_iter()
            .map(|s| {
                s.ok_or_else(|| Error::InvalidInput("block row of zeros has unknown size".into()))
            })
            .collect::<Result<_>>()?;
        let cs: Vec<usize> = col_sizes
            .into_iter()
            .map(|s| {
                s.ok_or_else(|| {
                    Error::InvalidInput("block column of zeros has unknown size".into())
                })
            })
            .collect::<Result<_>>()?;
        let (m, n) = (rs.iter().sum::<usize>(), cs.iter().sum::<usize>());
        let mut data = vec![0.0; m * n];
        let mut r0 = 0;
        for (i, brow) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (j, b) in brow.iter().enumerate() {
                if let Some(b) = b {
                    for r in 0..b.rows {
                        data[(r0 + r) * n + c0..(r0 + r) * n + c0 + b.cols]
                            .copy_from_slice(b.row(r));
                    }
                }
                c0 += cs[j];
            }
            r0 += rs[i];
        }
        Ok(Self {
            rows: m,
            cols: n,
            data,
        })
    }

    /// Maximum absolute row-sum deviation from one.
    pub fn stochastic_defect(&self) -> f64 {
        (0..self.rows)
            .map(|i| (self.row(i).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for NonnegMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "NonnegMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}
