use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Entrywise tolerance used when a matrix is required to be Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Real entries, row-major. Convenient for writing small literals in tests.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Matrix unit `e_jk` (a single one at row `j`, column `k`).
    pub fn unit(n: usize, j: usize, k: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(j, k)] = ONE;
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    pub fn pauli_x() -> Self {
        Self::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2 literal")
    }

    pub fn pauli_y() -> Self {
        Self::from_vec(
            2,
            2,
            vec![ZERO, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), ZERO],
        )
        .expect("2x2 literal")
    }

    pub fn pauli_z() -> Self {
        Self::from_diag(&[1.0, -1.0])
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

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in r..self.cols {
                if (self[(r, c)] - self[(c, r)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Kronecker product with `self` as the slow (left) factor.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        Self::from_fn(rows, cols, |r, c| {
            self[(r / rhs.rows, c / rhs.cols)] * rhs[(r % rhs.rows, c % rhs.cols)]
        })
    }

    /// `⟨v|M|v⟩`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        debug_assert_eq!(self.cols, v.len());
        let mut acc = ZERO;
        for (r, vr) in v.iter().enumerate() {
            let row: Complex64 = self.row(r).iter().zip(v).map(|(a, b)| a * b).sum();
            acc += vr.conj() * row;
        }
        acc
    }

    fn check_same_shape(&self, rhs: &Self) {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

// Elementwise arithmetic panics on shape mismatch, like slice indexing.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |r, c| Complex64::new((r * 4 + c) as f64, r as f64 - c as f64))
    }

    #[test]
    fn identity_is_left_neutral() {
        let m = sample();
        assert_eq!(ComplexMatrix::identity(4).matmul(&m).unwrap(), m);
    }

    #[test]
    fn zero_annihilates() {
        let m = sample();
        assert_eq!(
            m.matmul(&ComplexMatrix::zeros(4, 4)).unwrap(),
            ComplexMatrix::zeros(4, 4)
        );
    }

    #[test]
    fn pauli_x_is_an_involution() {
        let x = ComplexMatrix::pauli_x();
        assert_eq!(x.matmul(&x).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn matmul_rejects_mismatched_shapes() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            a.matmul(&b),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn kron_of_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_puts_left_factor_slowest() {
        let k = ComplexMatrix::pauli_z().kron(&ComplexMatrix::identity(2));
        assert_eq!(k, ComplexMatrix::from_diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn zz_stabilises_phi_plus() {
        let zz = ComplexMatrix::pauli_z().kron(&ComplexMatrix::pauli_z());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [Complex64::new(s, 0.0), ZERO, ZERO, Complex64::new(s, 0.0)];
        let out = zz.apply(&phi).unwrap();
        for (a, b) in out.iter().zip(&phi) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!((zz.quadratic_form(&phi) - ONE).norm() < 1e-15);
    }

    #[test]
    fn kron_trace_factorises() {
        let a = sample();
        let b = ComplexMatrix::pauli_y().scale(Complex64::new(0.5, 2.0));
        let b = &b + &ComplexMatrix::identity(2);
        let lhs = a.kron(&b).trace();
        let rhs = a.trace() * b.trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn hermitian_check() {
        assert!(ComplexMatrix::pauli_y().is_hermitian(HERMITIAN_TOL));
        assert!(!sample().is_hermitian(HERMITIAN_TOL));
        assert!(!ComplexMatrix::zeros(2, 3).is_hermitian(HERMITIAN_TOL));
    }
}
