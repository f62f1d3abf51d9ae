//! Dense complex matrices, tensor products, and Haar-random unitaries.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::rng::RngStream;

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Column vector from amplitudes.
    pub fn col_vector(amps: &[Complex64]) -> Self {
        Self {
            rows: amps.len(),
            cols: 1,
            entries: amps.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::ShapeMismatch(format!(
                "matvec {}x{} by vector of {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Complex64::ZERO; self.rows];
        for i in 0..self.rows {
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            let mut acc = Complex64::ZERO;
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest |a_ij - b_ij|; matrices must have equal shape.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.entries.clone();
        let mut det = Complex64::ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| {
                    m[a * n + col]
                        .norm()
                        .partial_cmp(&m[b * n + col].norm())
                        .unwrap()
                })
                .unwrap();
            if m[pivot * n + col].norm() == 0.0 {
                return Complex64::ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    m.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let d = m[col * n + col];
            det *= d;
            for row in col + 1..n {
                let factor = m[row * n + col] / d;
                for j in col..n {
                    let sub = factor * m[col * n + j];
                    m[row * n + j] -= sub;
                }
            }
        }
        det
    }

    /// max |(A†A - I)_ij|, the unitarity defect.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("square");
        gram.max_abs_diff(&CMatrix::identity(self.cols))
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Kronecker (tensor) product: entry [(i1,i2),(j1,j2)] = a[i1,j1] * b[i2,j2],
/// with the first factor's indices most significant.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i1 in 0..a.rows {
        for j1 in 0..a.cols {
            let scale = a[(i1, j1)];
            if scale == Complex64::ZERO {
                continue;
            }
            for i2 in 0..b.rows {
                for j2 in 0..b.cols {
                    out[(i1 * b.rows + i2, j1 * b.cols + j2)] = scale * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Draw a Haar-distributed unitary of the given dimension.
///
/// Construction: a complex standard-normal (Ginibre) matrix is
/// orthonormalized column by column with modified Gram-Schmidt, which is a
/// QR factorization whose triangular factor has positive real diagonal, so
/// the orthogonal factor carries the Haar measure.
pub fn haar_unitary(dim: usize, rng: &mut RngStream) -> CMatrix {
    assert!(dim >= 1);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(rng.normal(), rng.normal()))
                .collect()
        })
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: Complex64 = cols[k]
                .iter()
                .zip(&cols[j])
                .map(|(q, v)| q.conj() * v)
                .sum();
            for i in 0..dim {
                let sub = proj * cols[k][i];
                cols[j][i] -= sub;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    let mut out = CMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            out[(i, j)] = *z;
        }
    }
    out
}
