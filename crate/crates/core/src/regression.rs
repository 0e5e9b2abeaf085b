//! Multiple linear regression through centered Gram determinants.
//!
//! For samples `X` (m x n) and target `y`, the least-squares loss of the
//! fitting hyperplane `y = a0 + a1 x1 + ... + an xn` is the distance from the
//! centered target to the column space of the centered sample matrix. Both
//! the loss value and the multiple correlation coefficient follow from two
//! Gram determinants, without solving for the coefficients.

use std::collections::HashSet;

use crate::cholesky::solve_hermitian_psd;
use crate::distance::augment;
use crate::error::{Error, Result};
use crate::logdet::LogDet;
use crate::matrix::{DenseMatrix, Scalar, Vector};
use crate::qr::householder_qr;

/// Real sample matrix `X` (m x n) with target `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DenseMatrix,
    y: Vector,
    names: Vec<String>,
}

impl Dataset {
    /// `names` holds the `n` regressor labels followed by the target label.
    pub fn new(x: DenseMatrix, y: Vector, names: Vec<String>) -> Result<Self> {
        if !x.is_real() || !y.is_real() {
            return Err(Error::InvalidDataset("samples must be real".into()));
        }
        if y.len() != x.rows() {
            return Err(Error::DimensionMismatch {
                expected: x.rows(),
                found: y.len(),
            });
        }
        if names.len() != x.cols() + 1 {
            return Err(Error::InvalidDataset(format!(
                "expected {} column names, got {}",
                x.cols() + 1,
                names.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::InvalidDataset(format!(
                "duplicate column name {dup:?}"
            )));
        }
        Ok(Self { x, y, names })
    }

    /// Dataset with labels `x1..xn` and `y`.
    pub fn unnamed(x: DenseMatrix, y: Vector) -> Result<Self> {
        let mut names: Vec<String> = (1..=x.cols()).map(|j| format!("x{j}")).collect();
        names.push("y".into());
        Self::new(x, y, names)
    }

    /// Row-major samples with `n` regressors per row.
    pub fn from_rows(samples: &[f64], n: usize, y: &[f64]) -> Result<Self> {
        let m = y.len();
        Self::unnamed(
            DenseMatrix::from_real_rows(m, n, samples)?,
            Vector::from_real(y)?,
        )
    }

    pub fn x(&self) -> &DenseMatrix {
        &self.x
    }

    pub fn y(&self) -> &Vector {
        &self.y
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of samples `m`.
    pub fn samples(&self) -> usize {
        self.x.rows()
    }

    /// Number of regressors `n`.
    pub fn regressors(&self) -> usize {
        self.x.cols()
    }

    /// `(1|X)`: the sample matrix with a leading column of ones.
    pub fn design_matrix(&self) -> DenseMatrix {
        let m = self.samples();
        DenseMatrix::from_fn(m, self.regressors() + 1, |i, j| {
            if j == 0 {
                Scalar::new(1.0, 0.0)
            } else {
                self.x.get(i, j - 1)
            }
        })
        .expect("finite by construction")
    }

    /// Below this norm the centered target counts as zero.
    pub fn variance_tolerance(&self) -> f64 {
        let max_y = self
            .y
            .as_slice()
            .iter()
            .map(|z| z.re.abs())
            .fold(1.0, f64::max);
        self.samples() as f64 * f64::EPSILON * max_y
    }
}

/// Mean-subtracted samples and the subtracted means.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredView {
    pub x_hat: DenseMatrix,
    pub y_hat: Vector,
    pub x_means: Vec<f64>,
    pub y_mean: f64,
}

/// Arithmetic mean refined by a second pass over the residuals.
fn mean(values: &[f64]) -> f64 {
    let m = values.len() as f64;
    let first = values.iter().sum::<f64>() / m;
    first + values.iter().map(|v| v - first).sum::<f64>() / m
}

fn centered(values: &[f64]) -> (Vec<f64>, f64) {
    let mu = mean(values);
    (values.iter().map(|v| v - mu).collect(), mu)
}

pub fn center(d: &Dataset) -> CenteredView {
    let (m, n) = (d.samples(), d.regressors());
    let mut x_hat = Vec::with_capacity(m * n);
    let mut x_means = Vec::with_capacity(n);
    for j in 0..n {
        let col: Vec<f64> = d.x.column(j).iter().map(|z| z.re).collect();
        let (c, mu) = centered(&col);
        x_hat.extend(c.into_iter().map(|v| Scalar::new(v, 0.0)));
        x_means.push(mu);
    }
    let (y_hat, y_mean) = centered(&d.y.real_parts());
    CenteredView {
        x_hat: DenseMatrix::new(m, n, x_hat).expect("finite by construction"),
        y_hat: Vector::from_real(&y_hat).expect("finite by construction"),
        x_means,
        y_mean,
    }
}

/// Column rank from pivoted QR of `m` or of `m*` when `m` is wide.
pub fn numerical_rank(m: &DenseMatrix) -> usize {
    let tall = if m.rows() >= m.cols() {
        householder_qr(m, true)
    } else {
        householder_qr(&m.conj_transpose(), true)
    };
    tall.expect("tall by construction").rank_estimate()
}

/// Rank of `(1|X)`.
pub fn design_rank(d: &Dataset) -> usize {
    numerical_rank(&d.design_matrix())
}

fn require_full_rank(d: &Dataset) -> Result<()> {
    let rank = design_rank(d);
    let required = d.regressors() + 1;
    if rank < required {
        return Err(Error::RankDeficient { rank, required });
    }
    Ok(())
}

/// Regression coefficients `(a0, a1, ..., an)` from the centered normal
/// equations `X̂ᵗX̂ a1 = X̂ᵗŷ`, with `a0 = ȳ - Σ aj x̄j`.
pub fn normal_solve(d: &Dataset) -> Result<Vec<f64>> {
    require_full_rank(d)?;
    let cv = center(d);
    let n = d.regressors();
    let rhs = cv.x_hat.conj_transpose().mul_vec(&cv.y_hat)?;
    let slopes = solve_hermitian_psd(&cv.x_hat.gram(), &rhs).map_err(|e| match e {
        Error::NotPositiveDefinite { column, .. } => Error::RankDeficient {
            rank: column + 1,
            required: n + 1,
        },
        other => other,
    })?;
    let slopes = slopes.real_parts();
    let intercept = cv.y_mean
        - slopes
            .iter()
            .zip(&cv.x_means)
            .map(|(a, x)| a * x)
            .sum::<f64>();
    let mut a = Vec::with_capacity(n + 1);
    a.push(intercept);
    a.extend(slopes);
    Ok(a)
}

/// `‖(1|X) a - y‖`.
pub fn loss_value_residual(d: &Dataset, a: &[f64]) -> Result<f64> {
    let n = d.regressors();
    if a.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: a.len(),
        });
    }
    let ss: f64 = (0..d.samples())
        .map(|i| {
            let fit = a[0] + (0..n).map(|j| a[j + 1] * d.x.get(i, j).re).sum::<f64>();
            (fit - d.y.get(i).re).powi(2)
        })
        .sum();
    Ok(ss.sqrt())
}

/// Log-determinants of the centered Grams `X̂ᵗX̂` and `(X̂|ŷ)ᵗ(X̂|ŷ)`.
#[derive(Debug, Clone, Copy)]
struct CenteredGrams {
    x: LogDet,
    xy: LogDet,
}

fn centered_grams(d: &Dataset, cv: &CenteredView) -> Result<CenteredGrams> {
    require_full_rank(d)?;
    let n = d.regressors();
    let fx = householder_qr(&cv.x_hat, true)?;
    if fx.rank_estimate() < n {
        return Err(Error::RankDeficient {
            rank: fx.rank_estimate() + 1,
            required: n + 1,
        });
    }
    let xy = householder_qr(&augment(&cv.x_hat, &cv.y_hat)?, true)?.gram_logdet();
    Ok(CenteredGrams {
        x: fx.gram_logdet(),
        xy,
    })
}

/// `sqrt(det((X̂|ŷ)ᵗ(X̂|ŷ)) / det(X̂ᵗX̂))`.
pub fn loss_value_det(d: &Dataset) -> Result<f64> {
    let g = centered_grams(d, &center(d))?;
    if g.xy.is_zero() {
        return Ok(0.0);
    }
    Ok((0.5 * (g.xy.log_mag() - g.x.log_mag())).exp())
}

fn require_variance(d: &Dataset, cv: &CenteredView) -> Result<f64> {
    let norm = cv.y_hat.norm();
    if norm <= d.variance_tolerance() {
        return Err(Error::ZeroVariance);
    }
    Ok(norm)
}

/// `ŷᵗp̂ / ‖p̂‖ / ‖ŷ‖` with `p̂ = X̂ a1` from the normal equations.
pub fn multiple_correlation_projection(d: &Dataset) -> Result<f64> {
    let cv = center(d);
    let y_norm = require_variance(d, &cv)?;
    let a = normal_solve(d)?;
    let slopes = Vector::from_real(&a[1..])?;
    let p_hat = cv.x_hat.mul_vec(&slopes)?;
    let p_norm = p_hat.norm();
    if p_norm <= d.variance_tolerance() {
        return Err(Error::ZeroProjection);
    }
    Ok(cv.y_hat.dot(&p_hat)?.re / p_norm / y_norm)
}

/// `sqrt(1 - det((X̂|ŷ)ᵗ(X̂|ŷ)) / (det(X̂ᵗX̂) ŷᵗŷ))`, radicand clamped to `[0, 1]`.
///
/// With `(X̂|ŷ) = Q R` unpivoted, the leading block of `R` factors `X̂`, so
/// the determinant ratio is `|r|² / (|r|² + ‖t‖²)` where `r = R[n,n]` and `t`
/// is the part of the last column of `R` above the diagonal (`‖t‖ = ‖p̂‖`).
/// The radicand is then evaluated as `‖t‖² / (|r|² + ‖t‖²)`, free of the
/// cancellation in `1 - ratio`.
pub fn multiple_correlation_det(d: &Dataset) -> Result<f64> {
    let cv = center(d);
    require_variance(d, &cv)?;
    centered_grams(d, &cv)?;
    let n = d.regressors();
    let f = householder_qr(&augment(&cv.x_hat, &cv.y_hat)?, false)?;
    let top: f64 = (0..n).map(|i| f.r(i, n).norm_sqr()).sum();
    let corner = f.r(n, n).norm_sqr();
    let total = top + corner;
    if total == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((top / total).clamp(0.0, 1.0).sqrt())
}

/// `X̂ᵗX̂ / (m - 1)`.
pub fn sample_covariance(d: &Dataset) -> Result<DenseMatrix> {
    let m = d.samples();
    if m < 2 {
        return Err(Error::InsufficientSamples {
            required: 2,
            found: m,
        });
    }
    let g = center(d).x_hat.gram();
    let scale = 1.0 / (m - 1) as f64;
    DenseMatrix::from_fn(g.rows(), g.cols(), |i, j| {
        Scalar::new(g.get(i, j).re * scale, 0.0)
    })
}

/// `δ² / (m - 1)` with `δ` from [`loss_value_det`].
pub fn mean_squared_loss(d: &Dataset) -> Result<f64> {
    let m = d.samples();
    if m < 2 {
        return Err(Error::InsufficientSamples {
            required: 2,
            found: m,
        });
    }
    Ok(loss_value_det(d)?.powi(2) / (m - 1) as f64)
}

/// Which computation produced each reported number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportMethods {
    pub loss_value: &'static str,
    pub correlation: &'static str,
    pub correlation_projection: Option<&'static str>,
    pub coefficients: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionReport {
    pub samples: usize,
    pub regressors: usize,
    /// Loss value `δ` from the determinant ratio.
    pub loss_value: f64,
    /// `δ² / (m - 1)`, absent for a single sample.
    pub mean_squared_loss: Option<f64>,
    /// Multiple correlation from the determinant formula.
    pub correlation: f64,
    /// Multiple correlation from its definition; absent without a solve or
    /// when the projection vanishes.
    pub correlation_projection: Option<f64>,
    /// Set when the determinant formula gives a value but the definition is
    /// undefined because `p̂ = 0`.
    pub projection_undefined: bool,
    /// `(a0, ..., an)` when requested.
    pub coefficients: Option<Vec<f64>>,
    /// `‖(1|X)a - y‖` for the solved coefficients.
    pub loss_value_residual: Option<f64>,
    pub rank_full: bool,
    pub methods: ReportMethods,
}

/// Builds a report. With `solve` unset only determinant-path numbers are
/// computed and no regression coefficients are ever formed.
pub fn regression_report(d: &Dataset, solve: bool) -> Result<RegressionReport> {
    require_full_rank(d)?;
    let loss_value = loss_value_det(d)?;
    let correlation = multiple_correlation_det(d)?;
    let mean_squared_loss = match mean_squared_loss(d) {
        Ok(v) => Some(v),
        Err(Error::InsufficientSamples { .. }) => None,
        Err(e) => return Err(e),
    };
    let (correlation_projection, projection_undefined, coefficients, loss_value_residual) = if solve
    {
        let a = normal_solve(d)?;
        let residual = loss_value_residual(d, &a)?;
        match multiple_correlation_projection(d) {
            Ok(rho) => (Some(rho), false, Some(a), Some(residual)),
            Err(Error::ZeroProjection) => (None, true, Some(a), Some(residual)),
            Err(e) => return Err(e),
        }
    } else {
        (None, false, None, None)
    };
    Ok(RegressionReport {
        samples: d.samples(),
        regressors: d.regressors(),
        loss_value,
        mean_squared_loss,
        correlation,
        correlation_projection,
        projection_undefined,
        methods: ReportMethods {
            loss_value: "det_ratio",
            correlation: "det_ratio",
            correlation_projection: correlation_projection.map(|_| "projection"),
            coefficients: coefficients.as_ref().map(|_| "normal_equations"),
        },
        coefficients,
        loss_value_residual,
        rank_full: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_fixture() -> Dataset {
        Dataset::from_rows(&[1.0, 2.0, 3.0, 4.0], 1, &[1.0, 2.0, 2.0, 3.0]).unwrap()
    }

    fn perfect_fixture() -> Dataset {
        Dataset::from_rows(&[1.0, 2.0, 3.0, 4.0], 1, &[2.0, 4.0, 6.0, 8.0]).unwrap()
    }

    #[test]
    fn dataset_validation() {
        let x = DenseMatrix::from_real_rows(2, 1, &[1.0, 2.0]).unwrap();
        let y = Vector::from_real(&[1.0, 2.0]).unwrap();
        assert!(Dataset::new(x.clone(), y.clone(), vec!["a".into(), "a".into()]).is_err());
        assert!(Dataset::new(x.clone(), y.clone(), vec!["a".into()]).is_err());
        assert!(Dataset::new(
            x.clone(),
            Vector::from_real(&[1.0]).unwrap(),
            vec!["a".into(), "b".into()]
        )
        .is_err());
        let cx = Vector::new(vec![Scalar::new(1.0, 1.0), Scalar::new(0.0, 0.0)]).unwrap();
        assert!(Dataset::new(x, cx, vec!["a".into(), "b".into()]).is_err());
    }

    #[test]
    fn centering_constant_and_linear_targets() {
        let d = Dataset::from_rows(&[1.0, 5.0, 2.0, 5.0, 3.0, 5.0], 2, &[1.0, 1.0, 1.0]).unwrap();
        let cv = center(&d);
        assert_eq!(cv.y_mean, 1.0);
        assert_eq!(cv.y_hat.norm(), 0.0);
        // constant second column centers to zero and the rank drops
        assert_eq!(
            cv.x_hat.column(1).iter().map(|z| z.norm()).sum::<f64>(),
            0.0
        );
        assert_eq!(numerical_rank(&cv.x_hat), 1);
        assert_eq!(design_rank(&d), 2);

        let d = Dataset::from_rows(&[0.0, 0.0, 0.0], 1, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(center(&d).y_hat.real_parts(), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn exact_line_through_origin() {
        let a = normal_solve(&perfect_fixture()).unwrap();
        assert!(a[0].abs() < 1e-14 && (a[1] - 2.0).abs() < 1e-14);
        assert!(loss_value_residual(&perfect_fixture(), &a).unwrap() < 1e-12);
        assert!(loss_value_det(&perfect_fixture()).unwrap() < 1e-9);
    }

    #[test]
    fn hand_solved_line() {
        let d = line_fixture();
        let a = normal_solve(&d).unwrap();
        assert!((a[0] - 0.5).abs() < 1e-14);
        assert!((a[1] - 0.6).abs() < 1e-14);
        // residuals (-0.1, 0.3, -0.3, 0.1)
        assert!((loss_value_residual(&d, &[0.5, 0.6]).unwrap() - 0.2f64.sqrt()).abs() < 1e-15);
        // Grams [[5,3],[3,2]] and [5]: ratio 1/5
        assert!((loss_value_det(&d).unwrap() - 0.2f64.sqrt()).abs() < 1e-14);
        assert!((mean_squared_loss(&d).unwrap() - 0.2 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_coefficients_give_target_norm() {
        let d = line_fixture();
        assert!((loss_value_residual(&d, &[0.0, 0.0]).unwrap() - 18f64.sqrt()).abs() < 1e-14);
        assert!(matches!(
            loss_value_residual(&d, &[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn constant_target_has_zero_slopes() {
        let d = Dataset::from_rows(&[1.0, 2.0, 3.0, 4.0], 1, &[7.0; 4]).unwrap();
        let a = normal_solve(&d).unwrap();
        assert!((a[0] - 7.0).abs() < 1e-14 && a[1].abs() < 1e-14);
        assert_eq!(
            multiple_correlation_projection(&d),
            Err(Error::ZeroVariance)
        );
        assert_eq!(multiple_correlation_det(&d), Err(Error::ZeroVariance));
        assert_eq!(regression_report(&d, true), Err(Error::ZeroVariance));
    }

    #[test]
    fn correlation_of_hand_solved_line() {
        let d = line_fixture();
        let expected = 0.9f64.sqrt();
        assert!((multiple_correlation_projection(&d).unwrap() - expected).abs() < 1e-14);
        assert!((multiple_correlation_det(&d).unwrap() - expected).abs() < 1e-14);
        assert!((multiple_correlation_det(&perfect_fixture()).unwrap() - 1.0).abs() < 1e-9);
        assert!((multiple_correlation_projection(&perfect_fixture()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn uncorrelated_target() {
        // x̂ = (-1,0,1), ŷ = (1,-2,1): ŷᵗx̂ = 0
        let d = Dataset::from_rows(&[-1.0, 0.0, 1.0], 1, &[1.0, -2.0, 1.0]).unwrap();
        assert!(multiple_correlation_det(&d).unwrap() < 1e-9);
        assert_eq!(
            multiple_correlation_projection(&d),
            Err(Error::ZeroProjection)
        );
        let report = regression_report(&d, true).unwrap();
        assert!(report.projection_undefined);
        assert_eq!(report.correlation_projection, None);
    }

    #[test]
    fn rank_deficient_design() {
        let d = Dataset::from_rows(
            &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0, 4.0, 8.0],
            2,
            &[1.0, 2.0, 2.0, 3.0],
        )
        .unwrap();
        assert_eq!(design_rank(&d), 2);
        assert!(matches!(
            normal_solve(&d),
            Err(Error::RankDeficient {
                rank: 2,
                required: 3
            })
        ));
        assert!(matches!(
            loss_value_det(&d),
            Err(Error::RankDeficient { .. })
        ));
        assert!(matches!(
            multiple_correlation_det(&d),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn covariance() {
        let d = Dataset::from_rows(&[1.0, 2.0, 3.0], 1, &[0.0, 1.0, 0.0]).unwrap();
        assert!((sample_covariance(&d).unwrap().get(0, 0).re - 1.0).abs() < 1e-15);
        let d = Dataset::from_rows(&[1.0, 1.0, 2.0, 2.0, 4.0, 4.0], 2, &[0.0, 1.0, 0.0]).unwrap();
        let c = sample_covariance(&d).unwrap();
        let v = c.get(0, 0).re;
        assert!(v > 0.0);
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            assert_eq!(c.get(i, j).re, v);
        }
        let single = Dataset::from_rows(&[1.0], 1, &[1.0]).unwrap();
        assert_eq!(
            sample_covariance(&single),
            Err(Error::InsufficientSamples {
                required: 2,
                found: 1
            })
        );
    }

    #[test]
    fn two_samples_exact_fit() {
        let d = Dataset::from_rows(&[0.0, 1.0], 1, &[3.0, 5.0]).unwrap();
        assert!(mean_squared_loss(&d).unwrap() < 1e-20);
        assert!(mean_squared_loss(&perfect_fixture()).unwrap() < 1e-18);
    }

    #[test]
    fn report_without_solve_has_no_coefficients() {
        let r = regression_report(&line_fixture(), false).unwrap();
        assert!(r.coefficients.is_none() && r.correlation_projection.is_none());
        assert_eq!(r.methods.coefficients, None);
        let r = regression_report(&line_fixture(), true).unwrap();
        let a = r.coefficients.unwrap();
        assert!((a[1] - 0.6).abs() < 1e-14);
        assert!((r.correlation_projection.unwrap() - r.correlation).abs() < 1e-14);
    }
}
