//! Householder QR factorization with an implicit unitary factor.
//!
//! `Q` is kept as the sequence of reflectors `H_k = I - 2 v v* / (v* v)` and is
//! never formed. `R` is stored as its top `n x n` block.

use crate::error::{Error, Result};
use crate::logdet::LogDet;
use crate::matrix::{dot, DenseMatrix, Scalar, Vector};

#[derive(Debug, Clone)]
struct Reflector {
    /// First row the reflector acts on.
    start: usize,
    v: Vec<Scalar>,
    /// `2 / (v* v)`.
    beta: f64,
}

impl Reflector {
    fn apply(&self, x: &mut [Scalar]) {
        let tail = &mut x[self.start..];
        let w = dot(&self.v, tail) * self.beta;
        for (t, v) in tail.iter_mut().zip(&self.v) {
            *t -= v * w;
        }
    }
}

/// `A P = Q R` with optional column permutation `P`.
#[derive(Debug, Clone)]
pub struct QrFactors {
    rows: usize,
    cols: usize,
    reflectors: Vec<Reflector>,
    r: Vec<Scalar>,
    col_perm: Option<Vec<usize>>,
    rank_estimate: usize,
}

/// Factors `a` (which needs `rows >= cols`).
///
/// With `pivot` set, step `k` moves the remaining column of largest norm into
/// position `k`, so `|R[k,k]|` is nonincreasing. The rank estimate counts
/// diagonal entries with `|R[i,i]| > max(m, n) · eps · max_i |R[i,i]|`.
pub fn householder_qr(a: &DenseMatrix, pivot: bool) -> Result<QrFactors> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(Error::Shape(format!(
            "QR needs at least as many rows as columns, got {m}x{n}"
        )));
    }
    let mut work: Vec<Vec<Scalar>> = (0..n).map(|j| a.column(j).to_vec()).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut reflectors = Vec::with_capacity(n);
    let mut r = vec![Scalar::new(0.0, 0.0); n * n];

    for k in 0..n {
        if pivot {
            let tail_norm = |c: &Vec<Scalar>| c[k..].iter().map(|z| z.norm_sqr()).sum::<f64>();
            let mut best = k;
            let mut best_norm = tail_norm(&work[k]);
            for (j, col) in work.iter().enumerate().skip(k + 1) {
                let s = tail_norm(col);
                if s > best_norm {
                    best = j;
                    best_norm = s;
                }
            }
            work.swap(k, best);
            perm.swap(k, best);
        }

        let x = &work[k][k..];
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x > 0.0 {
            let x0 = x[0];
            let phase = if x0.norm() > 0.0 {
                x0 / x0.norm()
            } else {
                Scalar::new(1.0, 0.0)
            };
            let alpha = -phase * norm_x;
            let mut v = x.to_vec();
            v[0] -= alpha;
            let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let refl = Reflector {
                start: k,
                v,
                beta: 2.0 / vv,
            };
            for col in work.iter_mut().skip(k) {
                refl.apply(col);
            }
            // Exact triangular structure in the reflected column.
            work[k][k] = alpha;
            for z in work[k][k + 1..].iter_mut() {
                *z = Scalar::new(0.0, 0.0);
            }
            reflectors.push(refl);
        }
        for i in 0..=k {
            r[k * n + i] = work[k][i];
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| r[i * n + i].norm()).collect();
    let scale = diag.iter().copied().fold(0.0, f64::max);
    let tolerance = m.max(n) as f64 * f64::EPSILON * scale;
    let rank_estimate = diag.iter().filter(|&&d| d > tolerance).count();

    Ok(QrFactors {
        rows: m,
        cols: n,
        reflectors,
        r,
        col_perm: pivot.then_some(perm),
        rank_estimate,
    })
}

impl QrFactors {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank_estimate(&self) -> usize {
        self.rank_estimate
    }

    /// `perm[j]` is the original index of the column in position `j`.
    pub fn col_perm(&self) -> Option<&[usize]> {
        self.col_perm.as_deref()
    }

    pub fn r(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.cols && j < self.cols);
        self.r[j * self.cols + i]
    }

    /// The `n x n` upper-triangular block of `R`.
    pub fn r_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_parts_unchecked(self.cols, self.cols, self.r.clone())
    }

    pub fn diag_abs(&self) -> Vec<f64> {
        (0..self.cols).map(|i| self.r(i, i).norm()).collect()
    }

    fn check_len(&self, v: &Vector) -> Result<()> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `Q* v`.
    pub fn apply_q_transpose(&self, v: &Vector) -> Result<Vector> {
        self.check_len(v)?;
        let mut x = v.as_slice().to_vec();
        for refl in &self.reflectors {
            refl.apply(&mut x);
        }
        Vector::new(x)
    }

    /// `Q v`.
    pub fn apply_q(&self, v: &Vector) -> Result<Vector> {
        self.check_len(v)?;
        let mut x = v.as_slice().to_vec();
        for refl in self.reflectors.iter().rev() {
            refl.apply(&mut x);
        }
        Vector::new(x)
    }

    /// The full `m x m` unitary factor, assembled column by column.
    pub fn q_matrix(&self) -> Result<DenseMatrix> {
        let cols = (0..self.rows)
            .map(|j| self.apply_q(&Vector::unit(self.rows, j)?))
            .collect::<Result<Vec<_>>>()?;
        DenseMatrix::from_columns(&cols)
    }

    /// `Q [R; 0]` with the column permutation undone.
    pub fn reconstruct(&self) -> Result<DenseMatrix> {
        let (m, n) = (self.rows, self.cols);
        let mut cols = vec![None; n];
        for j in 0..n {
            let mut rj = vec![Scalar::new(0.0, 0.0); m];
            rj[..n].copy_from_slice(&self.r[j * n..(j + 1) * n]);
            let qj = self.apply_q(&Vector::new(rj)?)?;
            let original = self.col_perm.as_ref().map_or(j, |p| p[j]);
            cols[original] = Some(qj);
        }
        let cols: Vec<Vector> = cols.into_iter().map(|c| c.expect("permutation")).collect();
        DenseMatrix::from_columns(&cols)
    }

    /// `det(A* A) = prod |R[i,i]|^2`; zero when the rank estimate is below `n`.
    pub fn gram_logdet(&self) -> LogDet {
        if self.rank_estimate < self.cols {
            return LogDet::ZERO;
        }
        LogDet::positive(2.0 * self.diag_abs().iter().map(|d| d.ln()).sum::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn identity_is_already_triangular() {
        let f = householder_qr(&DenseMatrix::identity(3).unwrap(), false).unwrap();
        assert_eq!(f.rank_estimate(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((f.r(i, j).norm() - expected).abs() < 1e-15);
            }
        }
        assert_eq!(f.gram_logdet().log_mag(), 0.0);
    }

    #[test]
    fn single_column_diagonal_is_its_norm() {
        let a = DenseMatrix::from_real_rows(2, 1, &[1.0, 1.0]).unwrap();
        let f = householder_qr(&a, true).unwrap();
        assert!((f.r(0, 0).norm() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(f.rank_estimate(), 1);
        assert!((f.gram_logdet().log_mag() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn dependent_columns_have_zero_gram() {
        let a = DenseMatrix::from_real_rows(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        for pivot in [false, true] {
            let f = householder_qr(&a, pivot).unwrap();
            assert_eq!(f.rank_estimate(), 1);
            assert!(f.gram_logdet().is_zero());
        }
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let a = DenseMatrix::from_real_rows(3, 2, &[0.0; 6]).unwrap();
        let f = householder_qr(&a, true).unwrap();
        assert_eq!(f.rank_estimate(), 0);
        assert!(f.reconstruct().unwrap().max_abs() == 0.0);
    }

    #[test]
    fn wide_matrix_is_rejected() {
        let a = DenseMatrix::from_real_rows(1, 2, &[1.0, 2.0]).unwrap();
        assert!(matches!(householder_qr(&a, false), Err(Error::Shape(_))));
    }

    #[test]
    fn q_transpose_maps_columns_onto_r() {
        let a = DenseMatrix::new(
            3,
            2,
            vec![
                c(1.0, 1.0),
                c(0.0, 2.0),
                c(-1.0, 0.5),
                c(2.0, 0.0),
                c(0.3, -0.3),
                c(1.0, 1.0),
            ],
        )
        .unwrap();
        for pivot in [false, true] {
            let f = householder_qr(&a, pivot).unwrap();
            for j in 0..2 {
                let original = f.col_perm().map_or(j, |p| p[j]);
                let qa = f.apply_q_transpose(&a.column_vector(original)).unwrap();
                for i in 0..3 {
                    let expected = if i < 2 { f.r(i, j) } else { c(0.0, 0.0) };
                    assert!((qa.get(i) - expected).norm() < 1e-14);
                }
            }
            let back = f.reconstruct().unwrap();
            assert!(back.sub(&a).unwrap().frobenius_norm() <= 1e-14 * a.frobenius_norm());
        }
    }

    #[test]
    fn zero_vector_stays_zero() {
        let a = DenseMatrix::from_real_rows(3, 1, &[1.0, 2.0, 3.0]).unwrap();
        let f = householder_qr(&a, false).unwrap();
        let z = f.apply_q_transpose(&Vector::zeros(3).unwrap()).unwrap();
        assert_eq!(z.norm(), 0.0);
        assert!(matches!(
            f.apply_q_transpose(&Vector::zeros(2).unwrap()),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn pivoted_diagonal_is_nonincreasing() {
        let a = DenseMatrix::from_real_rows(
            4,
            3,
            &[0.1, 3.0, 1.0, 0.2, -1.0, 0.5, 0.0, 2.0, -2.0, 0.1, 0.5, 0.0],
        )
        .unwrap();
        let f = householder_qr(&a, true).unwrap();
        let d = f.diag_abs();
        assert!(d.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(f.col_perm().unwrap()[0], 1);
    }
}
