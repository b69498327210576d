//! Minimal dense complex matrices for the precoding path.
//!
//! The systems here are tiny: steering matrices are (2N+1)L x K with K <= a
//! handful, and everything reduces to a K x K Hermitian Gram solve. A direct
//! Cholesky factorization keeps the whole path deterministic and
//! dependency-free.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Column-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from column vectors; all columns must share one length.
    pub fn from_cols(cols: &[Vec<Complex64>]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::InvalidInput(
                "matrix needs at least one column".into(),
            ));
        }
        let rows = cols[0].len();
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::InvalidInput("ragged column lengths".into()));
        }
        let mut data = Vec::with_capacity(rows * cols.len());
        for col in cols {
            data.extend_from_slice(col);
        }
        Ok(Self {
            rows,
            cols: cols.len(),
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[c * self.rows + r]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[c * self.rows + r] = v;
    }

    /// Borrow one column as a slice.
    pub fn col(&self, c: usize) -> &[Complex64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex64::new(0.0, 0.0); self.rows];
        for (c, &xc) in x.iter().enumerate() {
            let col = self.col(c);
            for (r, yr) in y.iter_mut().enumerate() {
                *yr += col[r] * xc;
            }
        }
        y
    }

    /// y = A^H x.
    pub fn herm_mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.rows);
        (0..self.cols)
            .map(|c| self.col(c).iter().zip(x).map(|(a, b)| a.conj() * b).sum())
            .collect()
    }

    /// C = A B.
    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for c in 0..other.cols {
            let y = self.mul_vec(other.col(c));
            for (r, v) in y.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        out
    }

    /// C = A^H B.
    pub fn herm_mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.rows, other.rows);
        let mut out = CMat::zeros(self.cols, other.cols);
        for c in 0..other.cols {
            let y = self.herm_mul_vec(other.col(c));
            for (r, v) in y.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        out
    }

    /// Squared Frobenius norm, i.e. tr(A A^H).
    pub fn frob_sq(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Largest entry-wise deviation from the identity.
    pub fn max_dev_from_identity(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for c in 0..self.cols {
            for r in 0..self.rows {
                let want = if r == c { 1.0 } else { 0.0 };
                dev = dev.max((self.get(r, c) - Complex64::new(want, 0.0)).norm());
            }
        }
        dev
    }
}

/// Cholesky factorization of a Hermitian positive-definite matrix, G = L L^H.
///
/// Returns the lower factor and the squared ratio of extreme diagonal
/// entries, `(max L_ii / min L_ii)^2`, as a cheap condition estimate of G.
/// Fails with the offending pivot index if G is not positive definite.
pub fn cholesky(g: &CMat) -> std::result::Result<(CMat, f64), usize> {
    assert_eq!(g.rows, g.cols);
    let n = g.rows;
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut diag = g.get(j, j).re;
        for k in 0..j {
            diag -= l.get(j, k).norm_sqr();
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return Err(j);
        }
        let ljj = diag.sqrt();
        l.set(j, j, Complex64::new(ljj, 0.0));
        for i in j + 1..n {
            let mut v = g.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, v / ljj);
        }
    }
    let mut dmax = f64::MIN;
    let mut dmin = f64::MAX;
    for i in 0..n {
        let d = l.get(i, i).re;
        dmax = dmax.max(d);
        dmin = dmin.min(d);
    }
    Ok((l, (dmax / dmin) * (dmax / dmin)))
}

/// Solve G x = b given the Cholesky factor L of G.
pub fn cholesky_solve(l: &CMat, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.rows();
    assert_eq!(b.len(), n);
    // Forward: L y = b
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let lik = l.get(i, k);
            y[i] = y[i] - lik * y[k];
        }
        y[i] /= l.get(i, i);
    }
    // Backward: L^H x = y
    for i in (0..n).rev() {
        for k in i + 1..n {
            let lki = l.get(k, i).conj();
            y[i] = y[i] - lki * y[k];
        }
        y[i] /= l.get(i, i);
    }
    y
}
