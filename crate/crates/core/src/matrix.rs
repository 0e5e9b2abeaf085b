//! Dense complex matrices and vectors in column-major storage.
//!
//! Values are immutable after construction: every operation returns a fresh
//! matrix. Constructors reject NaN and infinite entries.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Double-precision complex scalar.
pub type Scalar = Complex64;

fn check_finite(z: Scalar, row: usize, col: usize) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { row, col })
    }
}

/// Column-major complex matrix with at least one row and one column.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    /// Builds a matrix from column-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        for (k, &z) in data.iter().enumerate() {
            check_finite(z, k % rows, k / rows)?;
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    /// Builds a real matrix from row-major values.
    pub fn from_real_rows(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: values.len(),
            });
        }
        Self::from_fn(rows, cols, |i, j| Scalar::new(values[i * cols + j], 0.0))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vector::len);
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            data.extend_from_slice(c.as_slice());
        }
        Self::new(rows, columns.len(), data)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Scalar::new(1.0, 0.0)
            } else {
                Scalar::new(0.0, 0.0)
            }
        })
    }

    pub(crate) fn from_parts_unchecked(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Column-major entries.
    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        assert!(
            row < self.rows && col < self.cols,
            "index ({row}, {col}) out of bounds"
        );
        self.data[col * self.rows + row]
    }

    pub fn column(&self, col: usize) -> &[Scalar] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn column_vector(&self, col: usize) -> Vector {
        Vector::from_parts_unchecked(self.column(col).to_vec())
    }

    /// True when every entry has a zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// `M*`: transpose with entry-wise conjugation.
    pub fn conj_transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                data.push(self.get(i, j).conj());
            }
        }
        Self::from_parts_unchecked(self.cols, self.rows, data)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut data = vec![Scalar::new(0.0, 0.0); self.rows * other.cols];
        for j in 0..other.cols {
            let out = &mut data[j * self.rows..(j + 1) * self.rows];
            for k in 0..self.cols {
                let b = other.get(k, j);
                if b == Scalar::new(0.0, 0.0) {
                    continue;
                }
                for (o, a) in out.iter_mut().zip(self.column(k)) {
                    *o += a * b;
                }
            }
        }
        Self::new(self.rows, other.cols, data)
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = vec![Scalar::new(0.0, 0.0); self.rows];
        for (k, &b) in v.as_slice().iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.column(k)) {
                *o += a * b;
            }
        }
        Vector::new(out)
    }

    /// The Gram matrix `M* M`, exactly hermitian with real diagonal.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut data = vec![Scalar::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..=j {
                let g = dot(self.column(i), self.column(j));
                if i == j {
                    data[j * n + i] = Scalar::new(g.re, 0.0);
                } else {
                    data[j * n + i] = g;
                    data[i * n + j] = g.conj();
                }
            }
        }
        Self::from_parts_unchecked(n, n, data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Copy of the matrix with row `row` deleted.
    pub fn without_row(&self, row: usize) -> Result<Self> {
        if row >= self.rows || self.rows == 1 {
            return Err(Error::Shape(format!(
                "cannot delete row {row} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Self::from_fn(self.rows - 1, self.cols, |i, j| {
            self.get(if i < row { i } else { i + 1 }, j)
        })
    }

    /// Columns in the given order.
    pub fn select_columns(&self, order: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(self.rows * order.len());
        for &j in order {
            if j >= self.cols {
                return Err(Error::DimensionMismatch {
                    expected: self.cols,
                    found: j,
                });
            }
            data.extend_from_slice(self.column(j));
        }
        Self::new(self.rows, order.len(), data)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} minus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(self.rows, self.cols, data)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{}", self.get(i, j)))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `x* y` over raw slices.
pub(crate) fn dot(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Non-empty complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<Scalar>,
}

impl Vector {
    pub fn new(data: Vec<Scalar>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Shape("empty vector".into()));
        }
        for (i, &z) in data.iter().enumerate() {
            check_finite(z, i, 0)?;
        }
        Ok(Self { data })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Scalar::new(v, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![Scalar::new(0.0, 0.0); len])
    }

    /// The `index`-th standard basis vector.
    pub fn unit(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: index,
            });
        }
        let mut data = vec![Scalar::new(0.0, 0.0); len];
        data[index] = Scalar::new(1.0, 0.0);
        Self::new(data)
    }

    pub(crate) fn from_parts_unchecked(data: Vec<Scalar>) -> Self {
        Self { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.data[i]
    }

    /// Real parts, for vectors known to be real.
    pub fn real_parts(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.re).collect()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `self* other`.
    pub fn dot(&self, other: &Self) -> Result<Scalar> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(dot(&self.data, &other.data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Self::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, factor: Scalar) -> Result<Self> {
        Self::new(self.data.iter().map(|z| z * factor).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn sample_3x2() -> DenseMatrix {
        DenseMatrix::new(
            3,
            2,
            vec![
                c(1.0, 2.0),
                c(-0.5, 0.0),
                c(0.25, -1.0),
                c(3.0, 0.5),
                c(0.0, -2.0),
                c(1.5, 1.5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = DenseMatrix::new(2, 1, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 1, col: 0 });
        assert!(Vector::new(vec![c(0.0, f64::INFINITY)]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![c(1.0, 0.0)]).is_err());
        assert!(DenseMatrix::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn conj_transpose_of_imaginary_unit() {
        let m = DenseMatrix::new(1, 1, vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(m.conj_transpose().get(0, 0), c(0.0, -1.0));
    }

    #[test]
    fn conj_transpose_of_real_is_transpose() {
        let m = DenseMatrix::from_real_rows(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let t = m.conj_transpose();
        assert_eq!((t.rows(), t.cols()), (3, 2));
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(t.get(j, i), m.get(i, j));
            }
        }
    }

    #[test]
    fn conj_transpose_is_an_involution() {
        let m = sample_3x2();
        assert_eq!(m.conj_transpose().conj_transpose(), m);
    }

    #[test]
    fn identity_is_neutral() {
        let m = sample_3x2();
        assert_eq!(DenseMatrix::identity(3).unwrap().matmul(&m).unwrap(), m);
    }

    #[test]
    fn permutation_swaps_entries() {
        let p = DenseMatrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let v = DenseMatrix::new(2, 1, vec![c(2.0, 1.0), c(-3.0, 0.5)]).unwrap();
        let pv = p.matmul(&v).unwrap();
        assert_eq!(pv.get(0, 0), c(-3.0, 0.5));
        assert_eq!(pv.get(1, 0), c(2.0, 1.0));
    }

    #[test]
    fn matmul_matches_triple_loop() {
        let a = sample_3x2().conj_transpose();
        let b = sample_3x2();
        let prod = a.matmul(&b).unwrap();
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = c(0.0, 0.0);
                for k in 0..a.cols() {
                    acc += a.get(i, k) * b.get(k, j);
                }
                assert!((prod.get(i, j) - acc).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn matmul_rejects_bad_inner_dimension() {
        let m = sample_3x2();
        assert_eq!(
            m.matmul(&m).unwrap_err(),
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn gram_matches_explicit_product() {
        let m = sample_3x2();
        let explicit = m.conj_transpose().matmul(&m).unwrap();
        let g = m.gram();
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.get(i, j) - explicit.get(i, j)).norm() < 1e-14);
            }
        }
        assert_eq!(g.get(0, 1), g.get(1, 0).conj());
    }

    #[test]
    fn without_row_drops_requested_row() {
        let m = sample_3x2();
        let d = m.without_row(1).unwrap();
        assert_eq!(d.get(0, 0), m.get(0, 0));
        assert_eq!(d.get(1, 1), m.get(2, 1));
        assert!(m.without_row(3).is_err());
    }
}
