//! Seeded property suites over every identity the crate relies on.
//!
//! Each suite draws independent instances from [`TrialRng::for_trial`], maps
//! every instance to a nonnegative deviation, and passes a trial when the
//! deviation is at most the suite tolerance. Errors and NaN count as
//! failures. Results depend only on `(seed, trials)`.

use crate::cholesky::solve_hermitian_psd;
use crate::distance::{
    augment, distance_det, distance_projection, distance_qr, minor_sum_log,
    orthogonal_minor_vector, DistanceResult,
};
use crate::error::Result;
use crate::logdet::LogDet;
use crate::lu::det_lu;
use crate::matrix::{DenseMatrix, Scalar, Vector};
use crate::qr::householder_qr;
use crate::random::TrialRng;
use crate::regression::{
    center, loss_value_det, loss_value_residual, multiple_correlation_det,
    multiple_correlation_projection, normal_solve, numerical_rank, Dataset,
};

pub const DISTANCE_GRAM_PRODUCT_TOL: f64 = 1e-9;
pub const DISTANCE_AGREEMENT_TOL: f64 = 1e-8;
pub const UNITARY_INVARIANCE_TOL: f64 = 1e-9;
pub const DISTANCE_BOUND_TOL: f64 = 1e-12;
pub const MINOR_SUM_TOL: f64 = 1e-9;
pub const MINOR_ORTHOGONALITY_TOL: f64 = 1e-10;
pub const DET_PRODUCT_TOL: f64 = 1e-10;
pub const DET_CONJUGATE_TOL: f64 = 1e-12;
pub const PSD_SOLVE_TOL: f64 = 1e-9;
pub const GRAM_HERMITIAN_TOL: f64 = 1e-14;
pub const GRAM_PSD_TOL: f64 = 1e-12;
pub const QR_RECONSTRUCTION_TOL: f64 = 1e-12;
pub const GRAM_LOGDET_TOL: f64 = 1e-9;
pub const LOSS_TOL: f64 = 1e-8;
pub const CORRELATION_TOL: f64 = 1e-8;
pub const CORRELATION_RANGE_TOL: f64 = 1e-12;
pub const PYTHAGORAS_TOL: f64 = 1e-8;
pub const MINIMALITY_TOL: f64 = 1e-12;
pub const MEAN_EQUATION_TOL: f64 = 1e-10;
pub const TRANSLATION_TOL: f64 = 1e-9;

type TrialFn = fn(&mut TrialRng) -> Result<f64>;

/// A named property check with its tolerance.
#[derive(Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub tolerance: f64,
    salt: u64,
    trial: TrialFn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    /// Largest deviation seen; infinite when a trial errored or produced NaN.
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

impl Suite {
    /// Same suite with a different pass threshold.
    pub fn with_tolerance(&self, tolerance: f64) -> Suite {
        Suite { tolerance, ..*self }
    }

    pub fn run(&self, seed: u64, trials: usize) -> SuiteOutcome {
        let mut passed = 0;
        let mut max_deviation: f64 = 0.0;
        for t in 0..trials {
            let mut rng = TrialRng::for_trial(seed, self.salt, t as u64);
            let dev = match (self.trial)(&mut rng) {
                Ok(d) if !d.is_nan() => d,
                _ => f64::INFINITY,
            };
            if dev <= self.tolerance {
                passed += 1;
            }
            max_deviation = max_deviation.max(dev);
        }
        SuiteOutcome {
            name: self.name,
            trials,
            passed,
            max_deviation,
            tolerance: self.tolerance,
        }
    }
}

const fn suite(name: &'static str, tolerance: f64, salt: u64, trial: TrialFn) -> Suite {
    Suite {
        name,
        tolerance,
        salt,
        trial,
    }
}

/// Every suite, in reporting order.
pub const SUITES: &[Suite] = &[
    suite("det_product", DET_PRODUCT_TOL, 1, det_product),
    suite("det_conjugate", DET_CONJUGATE_TOL, 2, det_conjugate),
    suite("psd_solve_residual", PSD_SOLVE_TOL, 3, psd_solve_residual),
    suite("gram_hermitian", GRAM_HERMITIAN_TOL, 4, gram_hermitian),
    suite("gram_psd", GRAM_PSD_TOL, 5, gram_psd),
    suite(
        "qr_reconstruction",
        QR_RECONSTRUCTION_TOL,
        6,
        qr_reconstruction,
    ),
    suite("qr_gram_logdet", GRAM_LOGDET_TOL, 7, qr_gram_logdet),
    suite(
        "qr_unitary_invariance",
        GRAM_LOGDET_TOL,
        8,
        qr_unitary_invariance,
    ),
    suite("qr_rank_permutation", 0.0, 9, qr_rank_permutation),
    suite(
        "distance_gram_product",
        DISTANCE_GRAM_PRODUCT_TOL,
        10,
        distance_gram_product,
    ),
    suite(
        "distance_agreement",
        DISTANCE_AGREEMENT_TOL,
        11,
        distance_agreement,
    ),
    suite(
        "distance_unitary_invariance",
        UNITARY_INVARIANCE_TOL,
        12,
        distance_unitary_invariance,
    ),
    suite("distance_bound", DISTANCE_BOUND_TOL, 13, distance_bound),
    suite("minor_sum_identity", MINOR_SUM_TOL, 14, minor_sum_identity),
    suite(
        "minor_vector_orthogonality",
        MINOR_ORTHOGONALITY_TOL,
        15,
        minor_vector_orthogonality,
    ),
    suite(
        "loss_value_equivalence",
        LOSS_TOL,
        16,
        loss_value_equivalence,
    ),
    suite(
        "correlation_equivalence",
        CORRELATION_TOL,
        17,
        correlation_equivalence,
    ),
    suite(
        "correlation_range",
        CORRELATION_RANGE_TOL,
        18,
        correlation_range,
    ),
    suite("pythagoras", PYTHAGORAS_TOL, 19, pythagoras),
    suite("rank_relation", 0.0, 20, rank_relation),
    suite("normal_minimality", MINIMALITY_TOL, 21, normal_minimality),
    suite("mean_equation", MEAN_EQUATION_TOL, 22, mean_equation),
    suite(
        "translation_invariance",
        TRANSLATION_TOL,
        23,
        translation_invariance,
    ),
];

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

pub fn run_all(seed: u64, trials: usize) -> Vec<SuiteOutcome> {
    SUITES.iter().map(|s| s.run(seed, trials)).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `|x / y - 1|` for two determinants.
fn logdet_deviation(x: LogDet, y: LogDet) -> f64 {
    match (x.is_zero(), y.is_zero()) {
        (true, true) => 0.0,
        (false, false) => {
            let ratio = (x.phase() / y.phase()) * (x.log_mag() - y.log_mag()).exp();
            (ratio - Scalar::new(1.0, 0.0)).norm()
        }
        _ => f64::INFINITY,
    }
}

/// Random complex `A` (m x n, `2 <= m <= 12`, `1 <= n < m`) and `b`.
fn complex_instance(rng: &mut TrialRng) -> (DenseMatrix, Vector) {
    let m = rng.range(2, 12);
    let n = rng.range(1, m - 1);
    (rng.complex_matrix(m, n), rng.complex_vector(m))
}

fn dataset(rng: &mut TrialRng) -> Dataset {
    let n = rng.range(1, 8);
    let m = rng.range(n + 2, 40);
    let x = rng.real_values(m * n);
    let y = rng.real_values(m);
    Dataset::from_rows(&x, n, &y).expect("finite")
}

fn det_product(rng: &mut TrialRng) -> Result<f64> {
    let n = rng.range(1, 8);
    let (a, b) = (rng.complex_matrix(n, n), rng.complex_matrix(n, n));
    Ok(logdet_deviation(
        det_lu(&a.matmul(&b)?)?,
        det_lu(&a)? * det_lu(&b)?,
    ))
}

fn det_conjugate(rng: &mut TrialRng) -> Result<f64> {
    let n = rng.range(1, 8);
    let a = rng.complex_matrix(n, n);
    Ok(logdet_deviation(
        det_lu(&a.conj_transpose())?,
        det_lu(&a)?.conj(),
    ))
}

fn psd_solve_residual(rng: &mut TrialRng) -> Result<f64> {
    let n = rng.range(1, 10);
    let g = rng.complex_matrix(n, n);
    let h = DenseMatrix::from_fn(n, n, |i, j| {
        g.gram().get(i, j)
            + if i == j {
                Scalar::new(1.0, 0.0)
            } else {
                Scalar::new(0.0, 0.0)
            }
    })?;
    let rhs = rng.complex_vector(n);
    let x = solve_hermitian_psd(&h, &rhs)?;
    Ok(h.mul_vec(&x)?.sub(&rhs)?.norm() / rhs.norm())
}

fn gram_hermitian(rng: &mut TrialRng) -> Result<f64> {
    let (a, _) = complex_instance(rng);
    let g = a.conj_transpose().matmul(&a)?;
    Ok(g.sub(&g.conj_transpose())?.max_abs())
}

fn gram_psd(rng: &mut TrialRng) -> Result<f64> {
    let m = rng.range(1, 12);
    let n = rng.range(1, 12);
    let a = rng.complex_matrix(m, n);
    let x = rng.complex_vector(n);
    let q = x.dot(&a.conj_transpose().matmul(&a)?.mul_vec(&x)?)?;
    Ok((-q.re).max(0.0))
}

fn qr_reconstruction(rng: &mut TrialRng) -> Result<f64> {
    let m = rng.range(1, 10);
    let n = rng.range(1, m.min(6));
    let a = rng.complex_matrix(m, n);
    let v = rng.complex_vector(m);
    let mut worst: f64 = 0.0;
    for pivot in [false, true] {
        let f = householder_qr(&a, pivot)?;
        worst = worst.max(f.reconstruct()?.sub(&a)?.frobenius_norm() / a.frobenius_norm());
        worst = worst.max(rel(f.apply_q_transpose(&v)?.norm(), v.norm()));
    }
    Ok(worst)
}

fn qr_gram_logdet(rng: &mut TrialRng) -> Result<f64> {
    let m = rng.range(1, 10);
    let n = rng.range(1, m.min(6));
    let a = rng.complex_matrix(m, n);
    let via_qr = householder_qr(&a, true)?.gram_logdet();
    Ok(logdet_deviation(via_qr, det_lu(&a.gram())?))
}

fn qr_unitary_invariance(rng: &mut TrialRng) -> Result<f64> {
    let m = rng.range(1, 10);
    let n = rng.range(1, m.min(6));
    let a = rng.complex_matrix(m, n);
    let u = rng.unitary(m);
    let before = householder_qr(&a, true)?.gram_logdet();
    let after = householder_qr(&u.matmul(&a)?, true)?.gram_logdet();
    Ok(logdet_deviation(after, before))
}

/// Product of random `m x r` and `r x n` factors, so the rank is `min(r, n)`.
fn low_rank(rng: &mut TrialRng, m: usize, n: usize) -> Result<DenseMatrix> {
    let r = rng.range(1, n);
    rng.complex_matrix(m, r).matmul(&rng.complex_matrix(r, n))
}

fn qr_rank_permutation(rng: &mut TrialRng) -> Result<f64> {
    let m = rng.range(2, 10);
    let n = rng.range(1, m.min(6));
    let a = low_rank(rng, m, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.range(0, i));
    }
    let r1 = householder_qr(&a, true)?.rank_estimate();
    let r2 = householder_qr(&a.select_columns(&order)?, true)?.rank_estimate();
    Ok(r1.abs_diff(r2) as f64)
}

/// `dist_qr · sqrt(det A*A)` against `sqrt(det (A|b)*(A|b))`. One trial in
/// five duplicates a column of `A` (scaled) to make it rank deficient; then
/// both sides must vanish relative to `‖(A|b)‖_F^(n+1)`.
fn distance_gram_product(rng: &mut TrialRng) -> Result<f64> {
    let (mut a, b) = complex_instance(rng);
    let n = a.cols();
    if n >= 2 && rng.range(0, 4) == 0 {
        let factor = rng.disc();
        a = DenseMatrix::from_fn(a.rows(), n, |i, j| {
            if j == n - 1 {
                a.get(i, 0) * factor
            } else {
                a.get(i, j)
            }
        })?;
    }
    let r = distance_qr(&a, &b)?;
    let lhs = if r.value == 0.0 || r.gram_logdet_a.is_zero() {
        f64::NEG_INFINITY
    } else {
        r.value.ln() + 0.5 * r.gram_logdet_a.log_mag()
    };
    let rhs = 0.5 * r.gram_logdet_ab.log_mag();
    if lhs == f64::NEG_INFINITY && rhs == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if lhs == f64::NEG_INFINITY || rhs == f64::NEG_INFINITY {
        let scale = augment(&a, &b)?.frobenius_norm().powi(n as i32 + 1);
        return Ok(lhs.max(rhs).exp() / scale);
    }
    Ok((lhs - rhs).exp_m1().abs())
}

fn distances(a: &DenseMatrix, b: &Vector) -> Result<[DistanceResult; 3]> {
    Ok([
        distance_det(a, b)?,
        distance_projection(a, b)?,
        distance_qr(a, b)?,
    ])
}

fn distance_agreement(rng: &mut TrialRng) -> Result<f64> {
    let (a, b) = complex_instance(rng);
    let [d, p, q] = distances(&a, &b)?;
    Ok(rel(d.value, p.value)
        .max(rel(d.value, q.value))
        .max(rel(p.value, q.value)))
}

fn distance_unitary_invariance(rng: &mut TrialRng) -> Result<f64> {
    let (a, b) = complex_instance(rng);
    let u = rng.unitary(a.rows());
    let before = distances(&a, &b)?;
    let after = distances(&u.matmul(&a)?, &u.mul_vec(&b)?)?;
    Ok(before
        .iter()
        .zip(&after)
        .map(|(x, y)| rel(x.value, y.value))
        .fold(0.0, f64::max))
}

fn distance_bound(rng: &mut TrialRng) -> Result<f64> {
    let (a, b) = complex_instance(rng);
    let bound = b.norm();
    Ok(distances(&a, &b)?
        .iter()
        .map(|r| (r.value / bound - 1.0).max(0.0))
        .fold(0.0, f64::max))
}

fn minor_instance(rng: &mut TrialRng) -> DenseMatrix {
    let n = rng.range(1, 6);
    rng.complex_matrix(n + 1, n)
}

fn minor_sum_identity(rng: &mut TrialRng) -> Result<f64> {
    let a = minor_instance(rng);
    let gram = householder_qr(&a, true)?.gram_logdet();
    Ok(logdet_deviation(LogDet::positive(minor_sum_log(&a)?), gram))
}

fn minor_vector_orthogonality(rng: &mut TrialRng) -> Result<f64> {
    let a = minor_instance(rng);
    let b = orthogonal_minor_vector(&a)?;
    let orth = a.conj_transpose().mul_vec(&b)?.norm() / (a.frobenius_norm() * b.norm());
    let norm = rel(b.norm().powi(2), minor_sum_log(&a)?.exp());
    Ok(orth.max(norm))
}

fn loss_value_equivalence(rng: &mut TrialRng) -> Result<f64> {
    let d = dataset(rng);
    let residual = loss_value_residual(&d, &normal_solve(&d)?)?;
    Ok(rel(loss_value_det(&d)?, residual))
}

fn correlation_equivalence(rng: &mut TrialRng) -> Result<f64> {
    let d = dataset(rng);
    Ok((multiple_correlation_det(&d)? - multiple_correlation_projection(&d)?).abs())
}

fn correlation_range(rng: &mut TrialRng) -> Result<f64> {
    let d = dataset(rng);
    Ok([
        multiple_correlation_det(&d)?,
        multiple_correlation_projection(&d)?,
    ]
    .iter()
    .map(|&r| (-r).max(r - 1.0).max(0.0))
    .fold(0.0, f64::max))
}

fn pythagoras(rng: &mut TrialRng) -> Result<f64> {
    let d = dataset(rng);
    let rho = multiple_correlation_det(&d)?;
    let delta = loss_value_det(&d)?;
    let y_norm = center(&d).y_hat.norm();
    Ok((rho * rho + (delta / y_norm).powi(2) - 1.0).abs())
}

/// Random `X` with, by case, an injected constant column, a duplicated
/// (scaled) column, or exactly `n + 1` samples.
fn rank_relation(rng: &mut TrialRng) -> Result<f64> {
    let n = rng.range(1, 8);
    let case = rng.range(0, 3);
    let m = if case == 3 {
        n + 1
    } else {
        rng.range(n + 1, 40)
    };
    let mut x = rng.real_values(m * n);
    match case {
        1 => {
            let j = rng.range(0, n - 1);
            let c = rng.symmetric();
            for i in 0..m {
                x[i * n + j] = c;
            }
        }
        2 if n >= 2 => {
            let (src, dst) = (rng.range(0, n - 1), rng.range(0, n - 1));
            let s = rng.symmetric();
            for i in 0..m {
                x[i * n + dst] = if src == dst {
                    x[i * n + src]
                } else {
                    s * x[i * n + src]
                };
            }
        }
        _ => {}
    }
    let d = Dataset::from_rows(&x, n, &rng.real_values(m))?;
    let with_ones = numerical_rank(&d.design_matrix());
    let centered = numerical_rank(&center(&d).x_hat);
    Ok(with_ones.abs_diff(centered + 1) as f64)
}

fn normal_minimality(rng: &mut TrialRng) -> Result<f64> {
    let d = dataset(rng);
    let a = normal_solve(&d)?;
    let best = loss_value_residual(&d, &a)?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let eps = 10f64.powf(-1.0 - 5.0 * rng.unit());
        let perturbed: Vec<f64> = a.iter().map(|v| v + eps * rng.symmetric()).collect();
        worst = worst.max(best - loss_value_residual(&d, &perturbed)?);
    }
    Ok(worst.max(0.0))
}

fn mean_equation(rng: &mut TrialRng) -> Result<f64> {
    let d = dataset(rng);
    let a = normal_solve(&d)?;
    let cv = center(&d);
    let fitted = a[0]
        + a[1..]
            .iter()
            .zip(&cv.x_means)
            .map(|(c, x)| c * x)
            .sum::<f64>();
    Ok((cv.y_mean - fitted).abs())
}

fn translation_invariance(rng: &mut TrialRng) -> Result<f64> {
    let d = dataset(rng);
    let (m, n) = (d.samples(), d.regressors());
    let shift_y = 10.0 * rng.symmetric();
    let shifts: Vec<f64> = (0..n).map(|_| 10.0 * rng.symmetric()).collect();
    let x: Vec<f64> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| d.x().get(i, j).re + shifts[j])
        .collect();
    let y: Vec<f64> = d.y().real_parts().iter().map(|v| v + shift_y).collect();
    let moved = Dataset::from_rows(&x, n, &y)?;
    Ok(rel(loss_value_det(&d)?, loss_value_det(&moved)?).max(rel(
        multiple_correlation_det(&d)?,
        multiple_correlation_det(&moved)?,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_and_salts_are_unique() {
        for (i, a) in SUITES.iter().enumerate() {
            for b in &SUITES[i + 1..] {
                assert_ne!(a.name, b.name);
                assert_ne!(a.salt, b.salt);
            }
        }
        assert!(find_suite("distance_gram_product").is_some());
        assert!(find_suite("nope").is_none());
    }

    #[test]
    fn runs_are_deterministic() {
        let s = find_suite("distance_agreement").unwrap();
        assert_eq!(s.run(7, 5), s.run(7, 5));
    }
}
