//! CHSH scenario on two 4-level systems.
//!
//! The observables are built from SU(4) generators so that `A₁² = A₂² = 1`
//! and `{A₁, A₂} = 0`. With `B₁ = (A₁+A₂)/√2` and `B₂ = (A₂−A₁)/√2` the Bell
//! operator reduces to `√2(A₁⊗A₁ + A₂⊗A₂)`, whose spectrum is `±2√2` on two
//! 4-dimensional sectors and `0` on the remaining eight dimensions.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{hermitian_eig, ComplexMatrix, DensityMatrix, StateVector, HERMITIAN_TOL};

/// `2√2`, the Cirel'son bound.
pub const CIRELSON_BOUND: f64 = 2.0 * SQRT_2;
/// Local hidden variable bound on `|⟨B⟩|`.
pub const LHV_BOUND: f64 = 2.0;
/// Tolerance on `⟨A²⟩ = 1` and vanishing anticommutators.
pub const CLIFFORD_TOL: f64 = 1e-9;

const SPECTRAL_NORM_TOL: f64 = 1e-10;

/// Hermitian operator with spectral norm at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::invalid("observable must be Hermitian"));
        }
        let eig = hermitian_eig(&matrix)?;
        let norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if norm > 1.0 + SPECTRAL_NORM_TOL {
            return Err(Error::invalid(format!(
                "observable has spectral norm {norm}, must not exceed 1"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// The four local observables entering the CHSH operator.
#[derive(Debug, Clone)]
pub struct ChshScenario {
    pub a1: Observable,
    pub a2: Observable,
    pub b1: Observable,
    pub b2: Observable,
}

impl ChshScenario {
    pub fn new(a1: Observable, a2: Observable, b1: Observable, b2: Observable) -> Result<Self> {
        let n = a1.dim();
        for o in [&a2, &b1, &b2] {
            if o.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: o.dim(),
                });
            }
        }
        Ok(Self { a1, a2, b1, b2 })
    }

    /// Local dimension `N`; the joint system has dimension `N²`.
    pub fn local_dim(&self) -> usize {
        self.a1.dim()
    }
}

/// Generalised Gell-Mann matrix `λ_index` of SU(n), 1-based.
///
/// Generators come in blocks `k = 1..n−1`. Block `k` holds, for each `j < k`,
/// the symmetric `e_jk + e_kj` followed by the antisymmetric `−i e_jk + i e_kj`,
/// and closes with the diagonal `diag(1,…,1,−k,0,…)·√(2/(k(k+1)))`. For `n = 3`
/// this is the usual Gell-Mann numbering; for `n = 2` it is the Pauli matrices.
pub fn gell_mann(n: usize, index: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::invalid(format!("SU(n) generators need n >= 2, got {n}")));
    }
    if index == 0 || index > n * n - 1 {
        return Err(Error::invalid(format!(
            "generator index {index} out of range 1..={} for SU({n})",
            n * n - 1
        )));
    }
    // Block k starts at k²; block k has 2k off-diagonal members then one diagonal.
    let k = (1..n).find(|&k| index < (k + 1) * (k + 1)).expect("index within range");
    let offset = index - k * k;
    if offset == 2 * k {
        let scale = (2.0 / (k * (k + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..n)
            .map(|i| match i {
                i if i < k => scale,
                i if i == k => -(k as f64) * scale,
                _ => 0.0,
            })
            .collect();
        return Ok(ComplexMatrix::from_diag(&diag));
    }
    let j = offset / 2;
    let mut m = ComplexMatrix::zeros(n, n);
    if offset.is_multiple_of(2) {
        m[(j, k)] = Complex64::new(1.0, 0.0);
        m[(k, j)] = Complex64::new(1.0, 0.0);
    } else {
        m[(j, k)] = Complex64::new(0.0, -1.0);
        m[(k, j)] = Complex64::new(0.0, 1.0);
    }
    Ok(m)
}

/// `A₁ = (2/√3)λ₈ + (√6/3)λ₁₅`, `A₂ = λ₄ + λ₁₁`, `B₁ = (A₁+A₂)/√2`, `B₂ = (A₂−A₁)/√2`.
pub fn ququart_observables() -> ChshScenario {
    let l = |i| gell_mann(4, i).expect("valid SU(4) index");
    let a1 = &l(8).scale_real(2.0 / 3f64.sqrt()) + &l(15).scale_real(6f64.sqrt() / 3.0);
    let a2 = &l(4) + &l(11);
    let b1 = (&a1 + &a2).scale_real(FRAC_1_SQRT_2);
    let b2 = (&a2 - &a1).scale_real(FRAC_1_SQRT_2);
    let obs = |m| Observable::new(m).expect("CHSH observables are unit bounded");
    ChshScenario::new(obs(a1), obs(a2), obs(b1), obs(b2)).expect("all observables are 4x4")
}

/// `A₁⊗B₁ − A₁⊗B₂ + A₂⊗B₁ + A₂⊗B₂`.
pub fn bell_operator(s: &ChshScenario) -> ComplexMatrix {
    let (a1, a2) = (s.a1.matrix(), s.a2.matrix());
    let (b1, b2) = (s.b1.matrix(), s.b2.matrix());
    let mut b = a1.kron(b1);
    b = &b - &a1.kron(b2);
    b = &b + &a2.kron(b1);
    &b + &a2.kron(b2)
}

/// `Tr(ρ B)` for the scenario's Bell operator.
pub fn chsh_expectation(state: &DensityMatrix, s: &ChshScenario) -> Result<f64> {
    let n = s.local_dim();
    if state.dim() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: state.dim(),
        });
    }
    state.expectation(&bell_operator(s))
}

/// Expectations entering the maximal-violation (Clifford) conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordReport {
    /// `⟨A₁²⟩`, `⟨A₂²⟩`.
    pub a_squared: [f64; 2],
    /// `⟨B₁²⟩`, `⟨B₂²⟩`.
    pub b_squared: [f64; 2],
    /// `⟨{A₁, A₂}⟩`.
    pub a_anticommutator: f64,
    /// `⟨{B₁, B₂}⟩`.
    pub b_anticommutator: f64,
    /// All squares equal one and at least one anticommutator vanishes.
    pub maximal: bool,
}

pub fn check_clifford_conditions(s: &ChshScenario, state: &DensityMatrix) -> Result<CliffordReport> {
    let n = s.local_dim();
    if state.dim() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: state.dim(),
        });
    }
    let id = ComplexMatrix::identity(n);
    let on_a = |m: &ComplexMatrix| state.expectation(&m.kron(&id));
    let on_b = |m: &ComplexMatrix| state.expectation(&id.kron(m));
    let square = |o: &Observable| o.matrix().matmul(o.matrix());
    let anti = |x: &Observable, y: &Observable| -> Result<ComplexMatrix> {
        Ok(&x.matrix().matmul(y.matrix())? + &y.matrix().matmul(x.matrix())?)
    };

    let a_squared = [on_a(&square(&s.a1)?)?, on_a(&square(&s.a2)?)?];
    let b_squared = [on_b(&square(&s.b1)?)?, on_b(&square(&s.b2)?)?];
    let a_anticommutator = on_a(&anti(&s.a1, &s.a2)?)?;
    let b_anticommutator = on_b(&anti(&s.b1, &s.b2)?)?;

    let unit = |x: f64| (x - 1.0).abs() < CLIFFORD_TOL;
    let maximal = a_squared.iter().chain(&b_squared).all(|&x| unit(x))
        && (a_anticommutator.abs() < CLIFFORD_TOL || b_anticommutator.abs() < CLIFFORD_TOL);
    Ok(CliffordReport {
        a_squared,
        b_squared,
        a_anticommutator,
        b_anticommutator,
        maximal,
    })
}

/// One of the two `±2√2` eigenspaces of the fixed-scenario Bell operator.
#[derive(Debug, Clone)]
pub struct BellSector {
    pub sign: i8,
    pub basis: [StateVector; 4],
    pub projector: ComplexMatrix,
}

impl BellSector {
    fn from_pairs(sign: i8, pairs: [((usize, usize), (usize, usize)); 4]) -> Self {
        let basis = pairs.map(|(first, second)| two_term_state(first, second, sign as f64));
        let mut projector = ComplexMatrix::zeros(16, 16);
        for v in &basis {
            projector = &projector + &ComplexMatrix::outer(v.amplitudes(), v.amplitudes());
        }
        Self { sign, basis, projector }
    }

    /// Norm of the component of `v` outside this sector.
    pub fn leakage(&self, v: &StateVector) -> Result<f64> {
        let projected = self.projector.apply(v.amplitudes())?;
        Ok(projected
            .iter()
            .zip(v.amplitudes())
            .map(|(p, a)| (p - a).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// True when `Π ρ Π = ρ` within `tol`.
    pub fn supports(&self, rho: &DensityMatrix, tol: f64) -> Result<bool> {
        let p = &self.projector;
        let sandwiched = p.matmul(rho.matrix())?.matmul(p)?;
        Ok(sandwiched.max_abs_diff(rho.matrix()) < tol)
    }
}

/// `(|ab⟩ + sign·|cd⟩)/√2` on 4⊗4.
fn two_term_state(first: (usize, usize), second: (usize, usize), sign: f64) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    amps[first.0 * 4 + first.1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[second.0 * 4 + second.1] = Complex64::new(sign * FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps).expect("two orthogonal terms with weight 1/2")
}

/// The `H₊` and `H₋` sectors with their analytic bases.
///
/// `H₊`: `η₁ = (|11⟩+|33⟩)/√2`, `η₂ = (|10⟩+|32⟩)/√2`, `η₃ = (|01⟩+|23⟩)/√2`,
/// `η₄ = (|00⟩+|22⟩)/√2`.
/// `H₋`: `φ₁ = (|31⟩−|13⟩)/√2`, `φ₂ = (|30⟩−|12⟩)/√2`, `φ₃ = (|21⟩−|03⟩)/√2`,
/// `φ₄ = (|20⟩−|02⟩)/√2`.
pub fn bell_sectors() -> (BellSector, BellSector) {
    let plus = BellSector::from_pairs(
        1,
        [((1, 1), (3, 3)), ((1, 0), (3, 2)), ((0, 1), (2, 3)), ((0, 0), (2, 2))],
    );
    let minus = BellSector::from_pairs(
        -1,
        [((3, 1), (1, 3)), ((3, 0), (1, 2)), ((2, 1), (0, 3)), ((2, 0), (0, 2))],
    );
    (plus, minus)
}
