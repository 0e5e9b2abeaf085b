//! Distance from a vector to the column space of a matrix, computed three
//! independent ways, plus the sum-of-squared-minors identity for
//! `(n+1) x n` matrices.

use std::fmt;

use crate::cholesky::solve_hermitian_psd;
use crate::error::{Error, Result};
use crate::logdet::LogDet;
use crate::lu::det_lu;
use crate::matrix::{DenseMatrix, Scalar, Vector};
use crate::qr::householder_qr;
use crate::sum::log_sum_exp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceMethod {
    /// `sqrt(det((A|b)*(A|b)) / det(A*A))`.
    DetRatio,
    /// `sqrt(b*b - b*A (A*A)^-1 A*b)`.
    Projection,
    /// Trailing coordinates of `Q* b`.
    QrCoordinate,
}

impl DistanceMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DistanceMethod::DetRatio => "det_ratio",
            DistanceMethod::Projection => "projection",
            DistanceMethod::QrCoordinate => "qr_coordinate",
        }
    }
}

impl fmt::Display for DistanceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceResult {
    pub value: f64,
    pub method: DistanceMethod,
    /// `det(A* A)`.
    pub gram_logdet_a: LogDet,
    /// `det((A|b)* (A|b))`.
    pub gram_logdet_ab: LogDet,
}

/// `(A|b)`: `a` with `b` appended as the last column.
pub fn augment(a: &DenseMatrix, b: &Vector) -> Result<DenseMatrix> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let mut data = a.data().to_vec();
    data.extend_from_slice(b.as_slice());
    DenseMatrix::new(a.rows(), a.cols() + 1, data)
}

fn check_rhs(a: &DenseMatrix, b: &Vector) -> Result<()> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    if a.rows() <= a.cols() {
        return Err(Error::Shape(format!(
            "distance needs more rows than columns, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Gram log-determinant of `a`, or `RankDeficient` when the pivoted QR rank
/// estimate falls short of the column count.
fn full_rank_gram_logdet(a: &DenseMatrix) -> Result<LogDet> {
    let f = householder_qr(a, true)?;
    if f.rank_estimate() < a.cols() {
        return Err(Error::RankDeficient {
            rank: f.rank_estimate(),
            required: a.cols(),
        });
    }
    Ok(f.gram_logdet())
}

/// Distance as the square root of a ratio of Gram determinants, evaluated
/// as a difference of log-magnitudes.
pub fn distance_det(a: &DenseMatrix, b: &Vector) -> Result<DistanceResult> {
    check_rhs(a, b)?;
    let gram_a = full_rank_gram_logdet(a)?;
    let gram_ab = householder_qr(&augment(a, b)?, true)?.gram_logdet();
    let value = if gram_ab.is_zero() {
        0.0
    } else {
        (0.5 * (gram_ab.log_mag() - gram_a.log_mag())).exp()
    };
    Ok(DistanceResult {
        value,
        method: DistanceMethod::DetRatio,
        gram_logdet_a: gram_a,
        gram_logdet_ab: gram_ab,
    })
}

/// Distance from the normal-equation expression
/// `b*b - b*A (A*A)^-1 A*b`, with a negative radicand clamped to zero.
pub fn distance_projection(a: &DenseMatrix, b: &Vector) -> Result<DistanceResult> {
    check_rhs(a, b)?;
    let gram_a = full_rank_gram_logdet(a)?;
    let n = a.cols();
    let a_star_b = a.conj_transpose().mul_vec(b)?;
    let x = solve_hermitian_psd(&a.gram(), &a_star_b).map_err(|e| match e {
        Error::NotPositiveDefinite { column, .. } => Error::RankDeficient {
            rank: column,
            required: n,
        },
        other => other,
    })?;
    let radicand = b.dot(b)?.re - a_star_b.dot(&x)?.re;
    let gram_ab = householder_qr(&augment(a, b)?, true)?.gram_logdet();
    Ok(DistanceResult {
        value: radicand.max(0.0).sqrt(),
        method: DistanceMethod::Projection,
        gram_logdet_a: gram_a,
        gram_logdet_ab: gram_ab,
    })
}

/// Distance as the norm of the coordinates of `Q* b` below the triangular
/// block, where `A = Q R` is the unpivoted factorization. For a square-ish
/// `(n+1) x n` matrix this is the modulus of the single last coordinate.
///
/// Works for any rank: when `A` is numerically rank deficient the
/// factorization is redone with column pivoting and the tail is taken below
/// the estimated rank.
pub fn distance_qr(a: &DenseMatrix, b: &Vector) -> Result<DistanceResult> {
    check_rhs(a, b)?;
    let n = a.cols();
    let plain = householder_qr(a, false)?;
    let (factors, rank) = if plain.rank_estimate() == n {
        (plain.clone(), n)
    } else {
        let pivoted = householder_qr(a, true)?;
        let rank = pivoted.rank_estimate();
        (pivoted, rank)
    };
    let c = factors.apply_q_transpose(b)?;
    let value = c.as_slice()[rank..]
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let gram_ab = householder_qr(&augment(a, b)?, false)?.gram_logdet();
    Ok(DistanceResult {
        value,
        method: DistanceMethod::QrCoordinate,
        gram_logdet_a: plain.gram_logdet(),
        gram_logdet_ab: gram_ab,
    })
}

fn check_minor_shape(a: &DenseMatrix) -> Result<()> {
    if a.rows() != a.cols() + 1 {
        return Err(Error::Shape(format!(
            "expected an (n+1) x n matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Determinants of the `n + 1` square minors `A_i` (`A` without row `i`).
pub fn row_minors(a: &DenseMatrix) -> Result<Vec<LogDet>> {
    check_minor_shape(a)?;
    (0..a.rows()).map(|i| det_lu(&a.without_row(i)?)).collect()
}

/// The cofactor vector `b_i = (-1)^(i+n) conj(det A_i)` (0-based `i`), which
/// is orthogonal to every column of the `(n+1) x n` matrix `a`.
pub fn orthogonal_minor_vector(a: &DenseMatrix) -> Result<Vector> {
    let n = a.cols();
    let entries = row_minors(a)?
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            let sign = if (i + n).is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(d.value()?.conj() * sign)
        })
        .collect::<Result<Vec<Scalar>>>()?;
    Vector::new(entries)
}

/// `ln(sum_i |det A_i|^2)`.
pub fn minor_sum_log(a: &DenseMatrix) -> Result<f64> {
    let logs: Vec<f64> = row_minors(a)?.iter().map(|d| 2.0 * d.log_mag()).collect();
    Ok(log_sum_exp(&logs))
}

/// `sum_i |det A_i|^2`, which equals `det(A* A)`.
pub fn minor_sum(a: &DenseMatrix) -> Result<f64> {
    LogDet::positive(minor_sum_log(a)?).magnitude()
}
