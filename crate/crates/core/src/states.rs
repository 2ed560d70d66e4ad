//! State families on 4⊗4: pure and diagonal-mixed states of the `H₊` sector,
//! the white-noise family around the maximally entangled state, and the
//! entanglement parameter `P` of pure sector states.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{hermitian_eig, partial_trace, ComplexMatrix, DensityMatrix, StateVector, Subsystem};
use crate::scenario::bell_sectors;

/// Pairing tolerance for the doubly degenerate reduced spectrum.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// How far a state may leak out of `H₊` and still count as a sector state.
pub const SECTOR_TOL: f64 = 1e-9;

/// Hyperspherical coordinates of a pure `H₊` state.
///
/// `c₁ = cos θ₁`, `c₂ = e^{iγ₁} sin θ₁ cos θ₂`, `c₃ = e^{iγ₂} sin θ₁ sin θ₂ cos θ₃`,
/// `c₄ = e^{iγ₃} sin θ₁ sin θ₂ sin θ₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureBellParams {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl PureBellParams {
    pub fn new(theta: [f64; 3], gamma: [f64; 3]) -> Result<Self> {
        let p = Self {
            theta1: theta[0],
            theta2: theta[1],
            theta3: theta[2],
            gamma1: gamma[0],
            gamma2: gamma[1],
            gamma3: gamma[2],
        };
        p.validate()?;
        Ok(p)
    }

    /// The parameters that produce the maximally entangled state.
    pub fn maximally_entangled() -> Self {
        Self {
            theta1: std::f64::consts::FRAC_PI_4,
            theta2: FRAC_PI_2,
            theta3: FRAC_PI_2,
            gamma1: 0.0,
            gamma2: 0.0,
            gamma3: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in [
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("theta3", self.theta3),
        ] {
            if !(0.0..=FRAC_PI_2).contains(&t) {
                return Err(Error::invalid(format!("{name} = {t} outside [0, pi/2]")));
            }
        }
        for (name, g) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
        ] {
            if !(0.0..TAU).contains(&g) {
                return Err(Error::invalid(format!("{name} = {g} outside [0, 2pi)")));
            }
        }
        Ok(())
    }

    /// Expansion coefficients in the `η` basis.
    pub fn coefficients(&self) -> [Complex64; 4] {
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        let (s3, c3) = self.theta3.sin_cos();
        [
            Complex64::new(c1, 0.0),
            Complex64::from_polar(s1 * c2, self.gamma1),
            Complex64::from_polar(s1 * s2 * c3, self.gamma2),
            Complex64::from_polar(s1 * s2 * s3, self.gamma3),
        ]
    }
}

/// Weights of a mixture diagonal in the `η` basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedBellParams {
    pub p: [f64; 4],
}

impl MixedBellParams {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|&x| x.is_nan() || x < 0.0) {
            return Err(Error::invalid(format!(
                "mixture weights must be non-negative, got {p:?}"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("mixture weights sum to {total}, expected 1")));
        }
        Ok(Self { p })
    }
}

/// `Σ cᵢ |ηᵢ⟩`.
pub fn pure_bell_state(params: &PureBellParams) -> Result<StateVector> {
    params.validate()?;
    let (plus, _) = bell_sectors();
    let coeffs = params.coefficients();
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for (c, eta) in coeffs.iter().zip(&plus.basis) {
        for (a, e) in amps.iter_mut().zip(eta.amplitudes()) {
            *a += c * e;
        }
    }
    StateVector::new(amps)
}

/// `Σ pᵢ |ηᵢ⟩⟨ηᵢ|`.
pub fn mixed_bell_state(params: &MixedBellParams) -> Result<DensityMatrix> {
    let params = MixedBellParams::new(params.p)?;
    let (plus, _) = bell_sectors();
    let projectors: Vec<DensityMatrix> = plus.basis.iter().map(StateVector::to_density).collect();
    let components: Vec<(f64, &DensityMatrix)> = params.p.iter().copied().zip(&projectors).collect();
    DensityMatrix::mixture(&components)
}

/// Independent uniform coordinates: `θᵢ ~ U[0, π/2]`, `γᵢ ~ U[0, 2π)`.
pub fn sample_pure<R: Rng + ?Sized>(rng: &mut R) -> (PureBellParams, StateVector) {
    let theta = [(); 3].map(|_| rng.random_range(0.0..=FRAC_PI_2));
    let gamma = [(); 3].map(|_| rng.random_range(0.0..TAU));
    let params = PureBellParams::new(theta, gamma).expect("sampled within range");
    let state = pure_bell_state(&params).expect("valid parameters");
    (params, state)
}

/// Flat Dirichlet weights from sorted-uniform spacings.
pub fn sample_mixed<R: Rng + ?Sized>(rng: &mut R) -> (MixedBellParams, DensityMatrix) {
    let mut cuts = [(); 3].map(|_| rng.random::<f64>());
    cuts.sort_by(f64::total_cmp);
    let mut p = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], 1.0 - cuts[2]];
    // Spacings sum to one up to rounding; fold the residue into the largest weight.
    let residue = 1.0 - p.iter().sum::<f64>();
    let largest = (0..4).max_by(|&i, &j| p[i].total_cmp(&p[j])).unwrap();
    p[largest] += residue;
    let params = MixedBellParams::new(p).expect("simplex point");
    let rho = mixed_bell_state(&params).expect("valid weights");
    (params, rho)
}

/// `(1/√N) Σⱼ |jj⟩`.
pub fn maximally_entangled(n: usize) -> StateVector {
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        amps[j * n + j] = amp;
    }
    StateVector::new(amps).expect("normalised by construction")
}

/// `p |Ψ_E⟩⟨Ψ_E| + (1 − p) I/N²`.
pub fn noisy_state(p: f64, n: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("noise parameter p = {p} outside [0, 1]")));
    }
    if n < 2 {
        return Err(Error::invalid(format!("local dimension must be >= 2, got {n}")));
    }
    let pure = maximally_entangled(n).to_density();
    let mixed = DensityMatrix::maximally_mixed(n * n);
    let m = &pure.matrix().scale_real(p) + &mixed.matrix().scale_real(1.0 - p);
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Reduced-spectrum summary of a pure `H₊` state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    /// `P ≥ 0`; the reduced spectrum is `(1 ± P)/4`, each twice.
    pub p: f64,
    /// `1 − |P|`: one for maximal entanglement.
    pub measure: f64,
    /// Reduced eigenvalues, descending.
    pub reduced_eigenvalues: [f64; 4],
}

pub fn entanglement_parameter(state: &StateVector) -> Result<EntanglementReport> {
    if state.dim() != 16 {
        return Err(Error::DimensionMismatch {
            expected: 16,
            found: state.dim(),
        });
    }
    let (plus, _) = bell_sectors();
    let leak = plus.leakage(state)?;
    if leak > SECTOR_TOL {
        return Err(Error::invalid(format!(
            "state has a component of norm {leak:e} outside the +2√2 sector"
        )));
    }
    let reduced = partial_trace(&state.to_density(), Subsystem::B, (4, 4))?;
    let eig = hermitian_eig(reduced.matrix())?;
    let mu: [f64; 4] = eig.values.try_into().expect("4x4 reduced state");
    // Descending order pairs (μ₀, μ₁) = (1+P)/4 and (μ₂, μ₃) = (1−P)/4.
    let p = mu[0] + mu[1] - mu[2] - mu[3];
    Ok(EntanglementReport {
        p,
        measure: 1.0 - p.abs(),
        reduced_eigenvalues: mu,
    })
}

impl EntanglementReport {
    /// Largest deviation of the reduced spectrum from `{(1+P)/4 ×2, (1−P)/4 ×2}`.
    pub fn degeneracy_error(&self) -> f64 {
        let hi = (1.0 + self.p) / 4.0;
        let lo = (1.0 - self.p) / 4.0;
        let mu = self.reduced_eigenvalues;
        [mu[0] - hi, mu[1] - hi, mu[2] - lo, mu[3] - lo]
            .iter()
            .fold(0.0f64, |m, d| m.max(d.abs()))
    }
}

/// Reduced density matrix of subsystem A for a pure 4⊗4 state.
pub fn reduced_state(state: &StateVector) -> Result<ComplexMatrix> {
    Ok(partial_trace(&state.to_density(), Subsystem::B, (4, 4))?.into_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::scenario::{chsh_expectation, ququart_observables, CIRELSON_BOUND};
    use std::f64::consts::FRAC_PI_4;

    fn eta(i: usize) -> StateVector {
        bell_sectors().0.basis[i].clone()
    }

    fn close(a: &StateVector, b: &StateVector, tol: f64) -> bool {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn theta1_zero_is_eta1() {
        let p = PureBellParams::new([0.0, 1.0, 0.3], [1.0, 2.0, 3.0]).unwrap();
        assert_eq!(pure_bell_state(&p).unwrap(), eta(0));
    }

    #[test]
    fn all_right_angles_is_eta4() {
        let p = PureBellParams::new([FRAC_PI_2; 3], [0.0; 3]).unwrap();
        assert!(close(&pure_bell_state(&p).unwrap(), &eta(3), 1e-15));
    }

    #[test]
    fn maximally_entangled_parametrisation() {
        let p = PureBellParams::new([FRAC_PI_4, FRAC_PI_2, FRAC_PI_2], [0.0; 3]).unwrap();
        assert!(close(&pure_bell_state(&p).unwrap(), &maximally_entangled(4), 1e-15));
        assert_eq!(p, PureBellParams::maximally_entangled());
    }

    #[test]
    fn out_of_range_parameters_rejected() {
        assert!(PureBellParams::new([-0.1, 0.0, 0.0], [0.0; 3]).is_err());
        assert!(PureBellParams::new([0.0, 1.6, 0.0], [0.0; 3]).is_err());
        assert!(PureBellParams::new([0.0; 3], [0.0, TAU, 0.0]).is_err());
        let mut p = PureBellParams::maximally_entangled();
        p.gamma2 = -1.0;
        assert!(pure_bell_state(&p).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let a: Vec<_> = {
            let mut rng = substream(11, 0);
            (0..5).map(|_| sample_pure(&mut rng).0).collect()
        };
        let b: Vec<_> = {
            let mut rng = substream(11, 0);
            (0..5).map(|_| sample_pure(&mut rng).0).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_states_are_normalised_sector_states() {
        let mut rng = substream(3, 0);
        let s = ququart_observables();
        for _ in 0..200 {
            let (_, psi) = sample_pure(&mut rng);
            assert!((psi.inner(&psi).re - 1.0).abs() < 1e-12);
            let b = chsh_expectation(&psi.to_density(), &s).unwrap();
            assert!((b - CIRELSON_BOUND).abs() < 1e-9);
        }
    }

    #[test]
    fn mean_of_first_weight_is_one_half() {
        let mut rng = substream(5, 0);
        let n = 100_000;
        let mean = (0..n)
            .map(|_| sample_pure(&mut rng).0.coefficients()[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "{mean}");
    }

    #[test]
    fn mixed_corner_and_centre() {
        let rho = mixed_bell_state(&MixedBellParams::new([1.0, 0.0, 0.0, 0.0]).unwrap()).unwrap();
        assert!(rho.matrix().max_abs_diff(&eta(0).to_density().into_matrix()) < 1e-15);
        let rho = mixed_bell_state(&MixedBellParams::new([0.25; 4]).unwrap()).unwrap();
        let quarter = bell_sectors().0.projector.scale_real(0.25);
        assert!(rho.matrix().max_abs_diff(&quarter) < 1e-15);
    }

    #[test]
    fn mixed_params_validation() {
        assert!(MixedBellParams::new([0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(MixedBellParams::new([0.5, 0.5, 0.5, 0.0]).is_err());
        assert!(mixed_bell_state(&MixedBellParams {
            p: [2.0, -1.0, 0.0, 0.0]
        })
        .is_err());
    }

    #[test]
    fn simplex_sampler_mean() {
        let mut rng = substream(9, 0);
        let n = 100_000;
        let mut sums = [0.0; 4];
        for _ in 0..n {
            let (p, _) = sample_mixed(&mut rng);
            for (s, x) in sums.iter_mut().zip(p.p) {
                *s += x;
            }
        }
        for s in sums {
            assert!((s / n as f64 - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn mixed_samples_violate_maximally() {
        let mut rng = substream(21, 0);
        let s = ququart_observables();
        for _ in 0..100 {
            let (_, rho) = sample_mixed(&mut rng);
            assert!((chsh_expectation(&rho, &s).unwrap() - CIRELSON_BOUND).abs() < 1e-9);
        }
    }

    #[test]
    fn noisy_state_endpoints_and_validity() {
        let pure = maximally_entangled(4).to_density();
        assert!(noisy_state(1.0, 4).unwrap().matrix().max_abs_diff(pure.matrix()) < 1e-15);
        assert!(
            noisy_state(0.0, 4)
                .unwrap()
                .matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(16).matrix())
                < 1e-15
        );
        assert!(noisy_state(1.01, 4).is_err());
        assert!(noisy_state(-0.01, 4).is_err());
        for i in 0..=100 {
            let rho = noisy_state(i as f64 / 100.0, 4).unwrap();
            assert!(DensityMatrix::new(rho.into_matrix()).is_ok());
        }
    }

    #[test]
    fn entanglement_of_reference_states() {
        let r = entanglement_parameter(&maximally_entangled(4)).unwrap();
        assert!(r.p.abs() < 1e-12 && (r.measure - 1.0).abs() < 1e-12);

        let r = entanglement_parameter(&eta(0)).unwrap();
        assert!((r.p - 1.0).abs() < 1e-12 && r.measure.abs() < 1e-12);
        let want = [0.5, 0.5, 0.0, 0.0];
        for (g, w) in r.reduced_eigenvalues.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn eta1_reduced_state() {
        let red = reduced_state(&eta(0)).unwrap();
        assert!(red.max_abs_diff(&ComplexMatrix::from_diag(&[0.0, 0.5, 0.0, 0.5])) < 1e-15);
    }

    #[test]
    fn equal_superposition_of_eta1_eta2() {
        // η₁ and η₂ both put Alice on levels {1, 3}, so the reduced spectrum is
        // {1/2, 1/2, 0, 0} and P = 1.
        let amps: Vec<Complex64> = eta(0)
            .amplitudes()
            .iter()
            .zip(eta(1).amplitudes())
            .map(|(a, b)| (a + b) / 2f64.sqrt())
            .collect();
        let psi = StateVector::new(amps).unwrap();
        let r = entanglement_parameter(&psi).unwrap();
        assert!(r.degeneracy_error() < DEGENERACY_TOL);
        assert!((r.p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entanglement_rejects_states_outside_sector() {
        let outside = StateVector::basis(16, 1).unwrap();
        assert!(entanglement_parameter(&outside).is_err());
        assert!(entanglement_parameter(&maximally_entangled(3)).is_err());
    }

    #[test]
    fn reduced_spectrum_structure_on_random_states() {
        let mut rng = substream(77, 0);
        for _ in 0..1000 {
            let (_, psi) = sample_pure(&mut rng);
            let r = entanglement_parameter(&psi).unwrap();
            assert!(r.degeneracy_error() < DEGENERACY_TOL);
            assert!((0.0..=1.0 + 1e-12).contains(&r.p));
        }
    }
}
