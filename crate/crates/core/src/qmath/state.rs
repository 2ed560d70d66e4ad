use num_complex::Complex64;

use super::eig::hermitian_eig;
use super::matrix::{ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Allowed deviation of `Σ|aᵢ|²` from one.
pub const NORM_TOL: f64 = 1e-10;
/// Allowed deviation of `Tr ρ` from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may carry.
pub const PSD_TOL: f64 = 1e-10;

/// Normalised pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalised.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid("state vector must be non-empty"));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "state vector has squared norm {norm_sqr}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::invalid("cannot normalise a zero or non-finite vector"));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `self ⊗ other`, with `self` the slow index.
    pub fn tensor(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self { amplitudes }
    }

    /// `|ψ⟩⟨ψ|` as a density matrix.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

impl From<&StateVector> for DensityMatrix {
    fn from(v: &StateVector) -> Self {
        v.to_density()
    }
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates a matrix as a density operator.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::invalid("density matrix is not Hermitian"));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::invalid(format!("density matrix has trace {tr}, expected 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::invalid(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers must construct a valid state by other means.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Convex combination `Σ wᵢ ρᵢ`. Weights must be non-negative and sum to one.
    pub fn mixture(components: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::invalid("mixture needs at least one component"));
        };
        let dim = first.dim();
        let mut total = 0.0;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for &(w, rho) in components {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rho.dim(),
                });
            }
            if w.is_nan() || w < 0.0 {
                return Err(Error::invalid(format!("mixture weight {w} is negative")));
            }
            total += w;
            acc = &acc + &rho.matrix.scale_real(w);
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("mixture weights sum to {total}, expected 1")));
        }
        Ok(Self { matrix: acc })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Re Tr(ρ O)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        if op.rows() != self.dim() || op.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: op.rows(),
            });
        }
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..n {
            for c in 0..n {
                acc += self.matrix[(r, c)] * op[(c, r)];
            }
        }
        Ok(acc.re)
    }
}

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Traces out `traced` from a state on `dims.0 ⊗ dims.1`.
pub fn partial_trace(rho: &DensityMatrix, traced: Subsystem, dims: (usize, usize)) -> Result<DensityMatrix> {
    let (da, db) = dims;
    if da * db != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let reduced = match traced {
        Subsystem::B => ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::A => ComplexMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()),
    };
    Ok(DensityMatrix::from_matrix_unchecked(reduced))
}
