//! Determinants by LU elimination with partial pivoting.

use crate::error::{Error, Result};
use crate::logdet::LogDet;
use crate::matrix::{DenseMatrix, Scalar};

/// Determinant of a square matrix.
///
/// Each step picks the row with the largest remaining modulus as pivot. The
/// log-magnitude is the sum of `ln|pivot|`; a pivot that is exactly zero
/// yields [`LogDet::ZERO`].
pub fn det_lu(m: &DenseMatrix) -> Result<LogDet> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.data().to_vec();
    let at = |i: usize, j: usize| j * n + i;

    let mut phase = Scalar::new(1.0, 0.0);
    let mut log_mag = 0.0;
    for k in 0..n {
        let (p, pmag) = (k..n)
            .map(|i| (i, a[at(i, k)].norm()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if pmag == 0.0 {
            return Ok(LogDet::ZERO);
        }
        if p != k {
            for j in k..n {
                a.swap(at(p, j), at(k, j));
            }
            phase = -phase;
        }
        let pivot = a[at(k, k)];
        log_mag += pmag.ln();
        phase *= pivot / pmag;
        for i in k + 1..n {
            let factor = a[at(i, k)] / pivot;
            if factor == Scalar::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = a[at(k, j)];
                a[at(i, j)] -= factor * u;
            }
        }
    }
    Ok(LogDet::new(phase, log_mag))
}
