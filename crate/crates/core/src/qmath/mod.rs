//! Dense complex linear algebra for small bipartite systems.
//!
//! Tensor-order convention: subsystem A is the slow factor, so the product
//! basis label `|jk⟩` maps to flat index `j·N_B + k`.

mod eig;
mod matrix;
mod state;

pub use eig::{hermitian_eig, HermitianEigen, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{ComplexMatrix, HERMITIAN_TOL};
pub use state::{partial_trace, DensityMatrix, StateVector, Subsystem, NORM_TOL, PSD_TOL, TRACE_TOL};

use crate::error::Result;

/// Free-function form of [`ComplexMatrix::matmul`].
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

/// Free-function form of [`ComplexMatrix::kron`].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}
