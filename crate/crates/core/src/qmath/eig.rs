//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies a
//! real Givens rotation to the resulting real symmetric 2×2 block. Sweeps run
//! over all pivots in row order until the off-diagonal Frobenius norm drops
//! below [`OFF_DIAGONAL_TOL`].
//!
//! Eigenvectors belonging to a degenerate cluster come back in an arbitrary
//! orthonormal basis of that cluster. Callers that care about degenerate
//! eigenspaces should only use the cluster projector.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HERMITIAN_TOL};
use super::state::StateVector;
use crate::error::{Error, Result};

pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<StateVector>,
}

impl HermitianEigen {
    /// `Σ λᵢ |vᵢ⟩⟨vᵢ|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (&lambda, v) in self.values.iter().zip(&self.vectors) {
            let p = ComplexMatrix::outer(v.amplitudes(), v.amplitudes());
            m = &m + &p.scale_real(lambda);
        }
        m
    }

    /// Projector onto the span of eigenvectors whose eigenvalue lies within
    /// `tol` of `value`.
    pub fn cluster_projector(&self, value: f64, tol: f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (&lambda, v) in self.values.iter().zip(&self.vectors) {
            if (lambda - value).abs() < tol {
                m = &m + &ComplexMatrix::outer(v.amplitudes(), v.amplitudes());
            }
        }
        m
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalises a Hermitian matrix.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    if !m.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::invalid("matrix is not Hermitian"));
    }
    let n = m.rows();

    // Symmetrise so that rounding in the input cannot leak into the result.
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| 0.5 * (m[(r, c)] + m[(c, r)].conj()));
    let mut v = ComplexMatrix::identity(n);

    let mut converged = off_diagonal_norm(&a) < OFF_DIAGONAL_TOL;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) < OFF_DIAGONAL_TOL;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            off_norm: off_diagonal_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));

    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = order
        .iter()
        .map(|&i| StateVector::normalized((0..n).map(|r| v[(r, i)]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(HermitianEigen { values, vectors })
}

/// One complex Jacobi rotation annihilating `a[p][q]`; `a ← J† a J`, `v ← v J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let modulus = apq.norm();
    if modulus == 0.0 {
        return;
    }
    let phase = apq / modulus;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (aqq - app) / (2.0 * modulus);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J restricted to the (p, q) plane:
    //   [ c              s            ]
    //   [ -s·e^{-iφ}     c·e^{-iφ}    ]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}
