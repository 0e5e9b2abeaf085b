//! Determinants carried as a unit phase and a natural-log magnitude.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::matrix::Scalar;

/// `phase · exp(log_mag)`, with `phase = 0` and `log_mag = -inf` for a zero
/// determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    phase: Scalar,
    log_mag: f64,
}

impl LogDet {
    pub const ZERO: LogDet = LogDet {
        phase: Scalar::new(0.0, 0.0),
        log_mag: f64::NEG_INFINITY,
    };

    pub const ONE: LogDet = LogDet {
        phase: Scalar::new(1.0, 0.0),
        log_mag: 0.0,
    };

    /// Normalizes `phase` to unit modulus. A zero phase or `-inf` magnitude
    /// yields [`LogDet::ZERO`].
    pub fn new(phase: Scalar, log_mag: f64) -> Self {
        let r = phase.norm();
        if r == 0.0 || log_mag == f64::NEG_INFINITY || !r.is_finite() {
            return Self::ZERO;
        }
        Self {
            phase: phase / r,
            log_mag,
        }
    }

    /// A real, nonnegative determinant given by its log-magnitude.
    pub fn positive(log_mag: f64) -> Self {
        Self::new(Scalar::new(1.0, 0.0), log_mag)
    }

    pub fn from_value(z: Scalar) -> Self {
        Self::new(z, z.norm().ln())
    }

    pub fn phase(&self) -> Scalar {
        self.phase
    }

    pub fn log_mag(&self) -> f64 {
        self.log_mag
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// `|det|`, or [`Error::Overflow`] when it exceeds double range.
    pub fn magnitude(&self) -> Result<f64> {
        let m = self.log_mag.exp();
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::Overflow {
                log_mag: self.log_mag,
            })
        }
    }

    /// The determinant as a plain scalar.
    pub fn value(&self) -> Result<Scalar> {
        Ok(self.phase * self.magnitude()?)
    }

    pub fn conj(&self) -> Self {
        Self {
            phase: self.phase.conj(),
            log_mag: self.log_mag,
        }
    }
}

impl Mul for LogDet {
    type Output = LogDet;

    fn mul(self, rhs: LogDet) -> LogDet {
        if self.is_zero() || rhs.is_zero() {
            return LogDet::ZERO;
        }
        LogDet::new(self.phase * rhs.phase, self.log_mag + rhs.log_mag)
    }
}
