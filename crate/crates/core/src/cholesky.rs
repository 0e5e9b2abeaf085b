//! Cholesky solves for hermitian positive definite systems.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Scalar, Vector};

/// Lower-triangular factor `L` with `H = L L*`, stored column-major.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<Scalar>,
}

impl Cholesky {
    /// Factors `h`, reading only its lower triangle.
    ///
    /// A pivot at or below `n · eps · max(diag)` is reported as
    /// [`Error::NotPositiveDefinite`].
    pub fn factor(h: &DenseMatrix) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::NotSquare {
                rows: h.rows(),
                cols: h.cols(),
            });
        }
        let n = h.rows();
        let max_diag = (0..n).map(|i| h.get(i, i).re).fold(0.0, f64::max);
        let tolerance = n as f64 * f64::EPSILON * max_diag;
        let mut l = vec![Scalar::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = h.get(j, j).re;
            for k in 0..j {
                d -= l[k * n + j].norm_sqr();
            }
            if d <= tolerance {
                return Err(Error::NotPositiveDefinite {
                    column: j,
                    pivot: d,
                    tolerance,
                });
            }
            let ljj = d.sqrt();
            l[j * n + j] = Scalar::new(ljj, 0.0);
            for i in j + 1..n {
                let mut s = h.get(i, j);
                for k in 0..j {
                    s -= l[k * n + i] * l[k * n + j].conj();
                }
                l[j * n + i] = s / ljj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn solve(&self, rhs: &Vector) -> Result<Vector> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        // L y = rhs
        let mut y = rhs.as_slice().to_vec();
        for i in 0..n {
            let s: Scalar = (0..i).map(|k| self.l[k * n + i] * y[k]).sum();
            y[i] = (y[i] - s) / self.l[i * n + i];
        }
        // L* x = y
        for i in (0..n).rev() {
            let s: Scalar = (i + 1..n).map(|k| self.l[i * n + k].conj() * y[k]).sum();
            y[i] = (y[i] - s) / self.l[i * n + i];
        }
        Vector::new(y)
    }
}

/// Solves `H x = rhs` for hermitian positive definite `H`.
pub fn solve_hermitian_psd(h: &DenseMatrix, rhs: &Vector) -> Result<Vector> {
    Cholesky::factor(h)?.solve(rhs)
}
