//! Distances to column spaces, multilinear-regression loss values and
//! multiple correlation coefficients from determinants of Gram matrices.
//!
//! The distance from `b` to the column space of `A` satisfies
//! `dist(A, b)² · det(A*A) = det((A|b)*(A|b))`. This crate computes that
//! distance three independent ways (determinant ratio, normal-equation
//! projection, Householder QR coordinate), the sum-of-squared-minors identity
//! for `(n+1) x n` matrices, and the regression loss value and multiple
//! correlation coefficient through centered Gram determinants.
//!
//! All determinants are carried as [`LogDet`] values so ratios stay well
//! scaled when the individual determinants are not.

pub mod cholesky;
pub mod distance;
pub mod error;
pub mod logdet;
pub mod lu;
pub mod matrix;
pub mod qr;
pub mod random;
pub mod regression;
pub mod sum;
pub mod verify;

pub use cholesky::solve_hermitian_psd;
pub use distance::{
    augment, distance_det, distance_projection, distance_qr, minor_sum, minor_sum_log,
    orthogonal_minor_vector, DistanceMethod, DistanceResult,
};
pub use error::{Error, Result};
pub use logdet::LogDet;
pub use lu::det_lu;
pub use matrix::{DenseMatrix, Scalar, Vector};
pub use qr::{householder_qr, QrFactors};
pub use regression::{
    center, loss_value_det, loss_value_residual, mean_squared_loss, multiple_correlation_det,
    multiple_correlation_projection, normal_solve, regression_report, sample_covariance,
    CenteredView, Dataset, RegressionReport,
};
