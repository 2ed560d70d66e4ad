//! The CGLMP functional `I_N`.
//!
//! Alice and Bob each choose between two Fourier-type bases whose elements
//! carry a tunable phase offset:
//!
//! ```text
//! |K⟩_{A,i} = N^{-1/2} Σ_j exp(i·2π/N·j·( K + αᵢ)) |j⟩
//! |L⟩_{B,i} = N^{-1/2} Σ_j exp(i·2π/N·j·(−L + βᵢ)) |j⟩
//! ```
//!
//! `I_N` is a weighted sum of modular coincidence probabilities over the four
//! setting pairs `(A₁,B₁)`, `(A₂,B₁)`, `(A₂,B₂)`, `(A₁,B₂)`:
//!
//! ```text
//! I_N = Σ_{k=0}^{⌊N/2⌋−1} (1 − 2k/(N−1)) ·
//!       { P(A₁=B₁+k) + P(B₁=A₂+k+1) + P(A₂=B₂+k) + P(B₂=A₁+k)
//!       − P(A₁=B₁−k−1) − P(B₁=A₂−k) − P(A₂=B₂−k−1) − P(B₂=A₁−k−1) }
//! ```
//!
//! Two evaluation routes are provided. [`cglmp_value`] forms every rank-one
//! projector `Π_K ⊗ Π_L` explicitly and traces it against `ρ`. The
//! [`CglmpEvaluator`] decomposes `ρ` once into weighted pure components and
//! contracts amplitudes directly; it is what the optimiser calls.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{hermitian_eig, ComplexMatrix, DensityMatrix, StateVector};

/// Probabilities down to this value are treated as rounding noise and clipped to zero.
pub const NEGATIVE_PROBABILITY_TOL: f64 = 1e-12;

/// Phase offsets `(α₁, α₂, β₁, β₂)` in units of `2π/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseConfiguration {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl PhaseConfiguration {
    /// `(α₁, α₂) = (0, 1/2)`, `(β₁, β₂) = (1/4, −1/4)`: the optimal settings for
    /// the maximally entangled state.
    pub const MAXIMALLY_ENTANGLED_OPTIMUM: Self = Self {
        alpha1: 0.0,
        alpha2: 0.5,
        beta1: 0.25,
        beta2: -0.25,
    };

    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Result<Self> {
        Self::from_array([alpha1, alpha2, beta1, beta2])
    }

    pub fn from_array(x: [f64; 4]) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("phases must be finite, got {x:?}")));
        }
        Ok(Self {
            alpha1: x[0],
            alpha2: x[1],
            beta1: x[2],
            beta2: x[3],
        })
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.alpha1, self.alpha2, self.beta1, self.beta2]
    }

    /// Representative with every phase reduced into `[0, n)`.
    pub fn canonical(&self, n: usize) -> Self {
        let m = n as f64;
        Self {
            alpha1: self.alpha1.rem_euclid(m),
            alpha2: self.alpha2.rem_euclid(m),
            beta1: self.beta1.rem_euclid(m),
            beta2: self.beta2.rem_euclid(m),
        }
    }

    pub fn alpha(&self, index: SettingIndex) -> f64 {
        match index {
            SettingIndex::One => self.alpha1,
            SettingIndex::Two => self.alpha2,
        }
    }

    pub fn beta(&self, index: SettingIndex) -> f64 {
        match index {
            SettingIndex::One => self.beta1,
            SettingIndex::Two => self.beta2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SettingIndex {
    One,
    Two,
}

/// One measurement choice `Aᵢ` or `Bᵢ` with its phase offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub party: Party,
    pub setting: SettingIndex,
    pub phase: f64,
    pub dim: usize,
}

impl MeasurementSetting {
    pub fn new(party: Party, setting: SettingIndex, phase: f64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid(format!("measurement dimension must be >= 2, got {dim}")));
        }
        if !phase.is_finite() {
            return Err(Error::invalid("measurement phase must be finite"));
        }
        Ok(Self {
            party,
            setting,
            phase,
            dim,
        })
    }

    /// Setting `Aᵢ` or `Bᵢ` as selected by `phases`.
    pub fn from_phases(party: Party, setting: SettingIndex, phases: &PhaseConfiguration, dim: usize) -> Result<Self> {
        let phase = match party {
            Party::A => phases.alpha(setting),
            Party::B => phases.beta(setting),
        };
        Self::new(party, setting, phase, dim)
    }
}

/// Amplitudes `⟨j|K⟩` of one basis element. The exponent is reduced modulo `N`
/// before scaling so phases that differ by a multiple of `N` agree closely.
fn basis_amplitudes(party: Party, phase: f64, dim: usize, outcome: usize) -> Vec<Complex64> {
    let n = dim as f64;
    let shift = match party {
        Party::A => outcome as f64 + phase,
        Party::B => -(outcome as f64) + phase,
    };
    let norm = 1.0 / n.sqrt();
    (0..dim)
        .map(|j| {
            let turns = (j as f64 * shift).rem_euclid(n);
            Complex64::from_polar(norm, TAU / n * turns)
        })
        .collect()
}

/// Basis vector for `outcome` of the given setting.
pub fn measurement_basis(setting: &MeasurementSetting, outcome: usize) -> Result<StateVector> {
    if outcome >= setting.dim {
        return Err(Error::invalid(format!(
            "outcome {outcome} out of range for dimension {}",
            setting.dim
        )));
    }
    StateVector::new(basis_amplitudes(setting.party, setting.phase, setting.dim, outcome))
}

/// `P[K][L] = P(A = K, B = L)` for one pair of settings.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    dim: usize,
    probabilities: Vec<f64>,
}

impl JointDistribution {
    /// Validates and clips raw probabilities laid out row-major in `K`.
    pub fn from_raw(dim: usize, mut probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: probabilities.len(),
            });
        }
        for p in &mut probabilities {
            if *p < 0.0 {
                if *p < -NEGATIVE_PROBABILITY_TOL {
                    return Err(Error::NegativeProbability(*p));
                }
                *p = 0.0;
            }
        }
        Ok(Self { dim, probabilities })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.probabilities[k * self.dim + l]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn uniform(dim: usize) -> Self {
        let p = 1.0 / (dim * dim) as f64;
        Self {
            dim,
            probabilities: vec![p; dim * dim],
        }
    }
}

/// `P(K, L) = Tr(ρ · Π_K^A ⊗ Π_L^B)` with explicit rank-one projectors.
pub fn joint_distribution(
    state: &DensityMatrix,
    a: &MeasurementSetting,
    b: &MeasurementSetting,
) -> Result<JointDistribution> {
    if a.party != Party::A || b.party != Party::B {
        return Err(Error::invalid("joint distribution needs an A setting and a B setting"));
    }
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    let n = a.dim;
    if state.dim() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: state.dim(),
        });
    }
    let a_vecs: Vec<_> = (0..n).map(|k| measurement_basis(a, k)).collect::<Result<_>>()?;
    let b_vecs: Vec<_> = (0..n).map(|l| measurement_basis(b, l)).collect::<Result<_>>()?;
    let mut probs = Vec::with_capacity(n * n);
    for ak in &a_vecs {
        for bl in &b_vecs {
            let v = ak.tensor(bl);
            let projector = ComplexMatrix::outer(v.amplitudes(), v.amplitudes());
            probs.push(state.expectation(&projector)?);
        }
    }
    JointDistribution::from_raw(n, probs)
}

/// Modular outcome relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `A = B + k (mod N)`.
    AEqualsBPlus,
    /// `B = A + k (mod N)`.
    BEqualsAPlus,
}

pub fn coincidence_probability(d: &JointDistribution, relation: Relation, k: i64) -> f64 {
    let n = d.dim;
    let shift = k.rem_euclid(n as i64) as usize;
    (0..n)
        .map(|i| match relation {
            Relation::AEqualsBPlus => d.get((i + shift) % n, i),
            Relation::BEqualsAPlus => d.get(i, (i + shift) % n),
        })
        .sum()
}

/// Distributions for `(A₁,B₁)`, `(A₂,B₁)`, `(A₂,B₂)`, `(A₁,B₂)`.
struct SettingPairs {
    a1b1: JointDistribution,
    a2b1: JointDistribution,
    a2b2: JointDistribution,
    a1b2: JointDistribution,
}

fn combine(n: usize, d: &SettingPairs) -> f64 {
    use Relation::{AEqualsBPlus as AB, BEqualsAPlus as BA};
    let p = coincidence_probability;
    let mut total = 0.0;
    for k in 0..(n / 2) as i64 {
        let weight = 1.0 - 2.0 * k as f64 / (n - 1) as f64;
        let plus = p(&d.a1b1, AB, k) + p(&d.a2b1, BA, k + 1) + p(&d.a2b2, AB, k) + p(&d.a1b2, BA, k);
        let minus = p(&d.a1b1, AB, -k - 1) + p(&d.a2b1, BA, -k) + p(&d.a2b2, AB, -k - 1) + p(&d.a1b2, BA, -k - 1);
        total += weight * (plus - minus);
    }
    total
}

fn check_dims(state_dim: usize, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("local dimension must be >= 2, got {n}")));
    }
    if state_dim != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: state_dim,
        });
    }
    Ok(())
}

/// `I_N` through explicit projectors.
pub fn cglmp_value(state: &DensityMatrix, phases: &PhaseConfiguration, n: usize) -> Result<f64> {
    check_dims(state.dim(), n)?;
    let setting = |party, idx| MeasurementSetting::from_phases(party, idx, phases, n);
    let (a1, a2) = (
        setting(Party::A, SettingIndex::One)?,
        setting(Party::A, SettingIndex::Two)?,
    );
    let (b1, b2) = (
        setting(Party::B, SettingIndex::One)?,
        setting(Party::B, SettingIndex::Two)?,
    );
    let pairs = SettingPairs {
        a1b1: joint_distribution(state, &a1, &b1)?,
        a2b1: joint_distribution(state, &a2, &b1)?,
        a2b2: joint_distribution(state, &a2, &b2)?,
        a1b2: joint_distribution(state, &a1, &b2)?,
    };
    Ok(combine(n, &pairs))
}

/// Repeated `I_N` evaluation for a fixed state.
///
/// The state is held as `Σ wᵢ |ψᵢ⟩⟨ψᵢ|` and each probability is
/// `Σ wᵢ |⟨K,L|ψᵢ⟩|²`, costing `O(rank·N³)` per distribution.
#[derive(Debug, Clone)]
pub struct CglmpEvaluator {
    n: usize,
    /// Weight and conjugated amplitude grid `ψ̄[j·N + m]` of each component.
    components: Vec<(f64, Vec<Complex64>)>,
}

impl CglmpEvaluator {
    pub fn new(state: &DensityMatrix, n: usize) -> Result<Self> {
        check_dims(state.dim(), n)?;
        let eig = hermitian_eig(state.matrix())?;
        let components = eig
            .values
            .iter()
            .zip(&eig.vectors)
            .filter(|(w, _)| **w != 0.0)
            .map(|(&w, v)| (w, v.amplitudes().to_vec()))
            .collect();
        Ok(Self { n, components })
    }

    pub fn from_pure(state: &StateVector, n: usize) -> Result<Self> {
        check_dims(state.dim(), n)?;
        Ok(Self {
            n,
            components: vec![(1.0, state.amplitudes().to_vec())],
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Distribution for Alice phase `alpha` and Bob phase `beta`.
    pub fn distribution(&self, alpha: f64, beta: f64) -> Result<JointDistribution> {
        let n = self.n;
        // Conjugated basis amplitudes: bra[K][j] = ⟨K|j⟩.
        let bra = |party, phase| -> Vec<Vec<Complex64>> {
            (0..n)
                .map(|k| {
                    basis_amplitudes(party, phase, n, k)
                        .into_iter()
                        .map(|z| z.conj())
                        .collect()
                })
                .collect()
        };
        let a_bra = bra(Party::A, alpha);
        let b_bra = bra(Party::B, beta);

        let mut probs = vec![0.0; n * n];
        let mut partial = vec![Complex64::new(0.0, 0.0); n * n];
        for (w, psi) in &self.components {
            // partial[K][m] = Σ_j ⟨K|j⟩ ψ[j·N + m]
            for (k, ak) in a_bra.iter().enumerate() {
                for m in 0..n {
                    partial[k * n + m] = (0..n).map(|j| ak[j] * psi[j * n + m]).sum();
                }
            }
            for k in 0..n {
                let row = &partial[k * n..(k + 1) * n];
                for (l, bl) in b_bra.iter().enumerate() {
                    let amp: Complex64 = row.iter().zip(bl).map(|(x, y)| x * y).sum();
                    probs[k * n + l] += w * amp.norm_sqr();
                }
            }
        }
        JointDistribution::from_raw(n, probs)
    }

    pub fn try_value(&self, phases: &PhaseConfiguration) -> Result<f64> {
        let pairs = SettingPairs {
            a1b1: self.distribution(phases.alpha1, phases.beta1)?,
            a2b1: self.distribution(phases.alpha2, phases.beta1)?,
            a2b2: self.distribution(phases.alpha2, phases.beta2)?,
            a1b2: self.distribution(phases.alpha1, phases.beta2)?,
        };
        Ok(combine(self.n, &pairs))
    }

    /// `I_N` at `phases`; NaN if the state produces a genuinely negative probability.
    pub fn value(&self, phases: &PhaseConfiguration) -> f64 {
        self.try_value(phases).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{maximally_entangled, noisy_state};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setting(party: Party, phase: f64, n: usize) -> MeasurementSetting {
        MeasurementSetting::new(party, SettingIndex::One, phase, n).unwrap()
    }

    #[test]
    fn uniform_superposition_basis() {
        let v = measurement_basis(&setting(Party::A, 0.0, 4), 0).unwrap();
        for a in v.amplitudes() {
            assert!((a - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn qubit_outcome_one_is_minus_state() {
        let v = measurement_basis(&setting(Party::A, 0.0, 2), 1).unwrap();
        assert!((v.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((v.amplitudes()[1] - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn integer_phase_shift_relabels_outcomes() {
        let n = 5;
        for alpha in [0.0, 1.0, 3.0] {
            for k in 0..n {
                let shifted = measurement_basis(&setting(Party::A, alpha + 1.0, n), k).unwrap();
                let relabelled = measurement_basis(&setting(Party::A, alpha, n), (k + 1) % n).unwrap();
                for (x, y) in shifted.amplitudes().iter().zip(relabelled.amplitudes()) {
                    assert!((x - y).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn outcome_out_of_range_is_rejected() {
        assert!(measurement_basis(&setting(Party::B, 0.0, 3), 3).is_err());
        assert!(MeasurementSetting::new(Party::A, SettingIndex::One, 0.0, 1).is_err());
        assert!(MeasurementSetting::new(Party::A, SettingIndex::One, f64::NAN, 3).is_err());
    }

    #[test]
    fn bases_are_orthonormal() {
        for party in [Party::A, Party::B] {
            let s = setting(party, 0.37, 4);
            for k in 0..4 {
                for l in 0..4 {
                    let ip = measurement_basis(&s, k)
                        .unwrap()
                        .inner(&measurement_basis(&s, l).unwrap());
                    let want = if k == l { 1.0 } else { 0.0 };
                    assert!((ip - c(want, 0.0)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn maximally_entangled_zero_phases_is_perfectly_correlated() {
        let rho = maximally_entangled(4).to_density();
        let d = joint_distribution(&rho, &setting(Party::A, 0.0, 4), &setting(Party::B, 0.0, 4)).unwrap();
        for k in 0..4 {
            for l in 0..4 {
                let want = if k == l { 0.25 } else { 0.0 };
                assert!((d.get(k, l) - want).abs() < 1e-14);
            }
        }
        assert!((coincidence_probability(&d, Relation::AEqualsBPlus, 0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_gives_uniform_distribution() {
        let rho = DensityMatrix::maximally_mixed(16);
        let d = joint_distribution(&rho, &setting(Party::A, 0.3, 4), &setting(Party::B, -1.7, 4)).unwrap();
        for k in 0..4 {
            for l in 0..4 {
                assert!((d.get(k, l) - 1.0 / 16.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn product_basis_state_gives_uniform_distribution() {
        let rho = StateVector::basis(16, 0).unwrap().to_density();
        let d = joint_distribution(&rho, &setting(Party::A, 0.9, 4), &setting(Party::B, 0.1, 4)).unwrap();
        for k in 0..4 {
            for l in 0..4 {
                assert!((d.get(k, l) - 1.0 / 16.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn joint_distribution_rejects_wrong_parties_and_dims() {
        let rho = DensityMatrix::maximally_mixed(16);
        let a = setting(Party::A, 0.0, 4);
        let b = setting(Party::B, 0.0, 4);
        assert!(joint_distribution(&rho, &b, &a).is_err());
        assert!(joint_distribution(&rho, &setting(Party::A, 0.0, 3), &setting(Party::B, 0.0, 3)).is_err());
    }

    #[test]
    fn coincidence_on_uniform_and_modular_k() {
        let d = JointDistribution::uniform(4);
        for k in -5..6 {
            assert!((coincidence_probability(&d, Relation::BEqualsAPlus, k) - 0.25).abs() < 1e-15);
        }
        let raw: Vec<f64> = (0..16).map(|i| (i + 1) as f64 / 136.0).collect();
        let d = JointDistribution::from_raw(4, raw).unwrap();
        for k in -3..4 {
            for rel in [Relation::AEqualsBPlus, Relation::BEqualsAPlus] {
                assert_eq!(
                    coincidence_probability(&d, rel, k),
                    coincidence_probability(&d, rel, k - 4)
                );
            }
        }
    }

    #[test]
    fn coincidence_relations_pick_the_right_cells() {
        // Only P[1][0] is populated: A=1, B=0, so A = B + 1 and B = A − 1 = A + 2 (mod 3).
        let mut raw = vec![0.0; 9];
        raw[3] = 1.0;
        let d = JointDistribution::from_raw(3, raw).unwrap();
        assert_eq!(coincidence_probability(&d, Relation::AEqualsBPlus, 1), 1.0);
        assert_eq!(coincidence_probability(&d, Relation::AEqualsBPlus, 0), 0.0);
        assert_eq!(coincidence_probability(&d, Relation::BEqualsAPlus, -1), 1.0);
        assert_eq!(coincidence_probability(&d, Relation::BEqualsAPlus, 2), 1.0);
        assert_eq!(coincidence_probability(&d, Relation::BEqualsAPlus, 1), 0.0);
    }

    #[test]
    fn negative_probabilities_clip_or_fail() {
        let d = JointDistribution::from_raw(2, vec![0.5, 0.5, -1e-13, 0.0]).unwrap();
        assert_eq!(d.get(1, 0), 0.0);
        assert!(matches!(
            JointDistribution::from_raw(2, vec![0.5, 0.5, -1e-6, 0.0]),
            Err(Error::NegativeProbability(_))
        ));
    }

    // Hand expansion for N = 2, where only the k = 0 term survives:
    //   I₂ = [P(A₁=B₁) + P(B₁=A₂+1) + P(A₂=B₂) + P(B₂=A₁)]
    //      − [P(A₁=B₁−1) + P(B₁=A₂) + P(A₂=B₂−1) + P(B₂=A₁−1)]
    // and mod 2, "x = y ± 1" means "x ≠ y", so I₂ = E₁₁ − E₂₁ + E₂₂ + E₁₂ with
    // E = P(same) − P(different).
    #[test]
    fn n2_reduces_to_correlator_form() {
        let psi = maximally_entangled(2);
        let rho = psi.to_density();
        let phases = PhaseConfiguration::new(0.1, 0.7, -0.4, 0.25).unwrap();
        let e = |alpha: f64, beta: f64| {
            let d = joint_distribution(&rho, &setting(Party::A, alpha, 2), &setting(Party::B, beta, 2)).unwrap();
            d.get(0, 0) + d.get(1, 1) - d.get(0, 1) - d.get(1, 0)
        };
        let expected = e(phases.alpha1, phases.beta1) - e(phases.alpha2, phases.beta1)
            + e(phases.alpha2, phases.beta2)
            + e(phases.alpha1, phases.beta2);
        let got = cglmp_value(&rho, &phases, 2).unwrap();
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
    }

    #[test]
    fn maximally_entangled_n4_at_known_optimum() {
        let rho = maximally_entangled(4).to_density();
        let v = cglmp_value(&rho, &PhaseConfiguration::MAXIMALLY_ENTANGLED_OPTIMUM, 4).unwrap();
        assert!((v - 2.8962).abs() < 5e-5, "I_4 = {v}");
    }

    #[test]
    fn maximally_mixed_scores_zero() {
        let rho = DensityMatrix::maximally_mixed(16);
        let phases = PhaseConfiguration::new(0.2, 1.3, -0.6, 2.2).unwrap();
        assert!(cglmp_value(&rho, &phases, 4).unwrap().abs() < 1e-14);
    }

    #[test]
    fn evaluator_agrees_with_projector_route() {
        let phases = PhaseConfiguration::new(0.31, 0.52, 0.13, -0.44).unwrap();
        for p in [0.0, 0.3, 1.0] {
            let rho = noisy_state(p, 4).unwrap();
            let direct = cglmp_value(&rho, &phases, 4).unwrap();
            let fast = CglmpEvaluator::new(&rho, 4).unwrap().value(&phases);
            assert!((direct - fast).abs() < 1e-12);
        }
        let psi = maximally_entangled(3);
        let direct = cglmp_value(&psi.to_density(), &phases, 3).unwrap();
        let fast = CglmpEvaluator::from_pure(&psi, 3).unwrap().value(&phases);
        assert!((direct - fast).abs() < 1e-12);
    }

    #[test]
    fn dimension_checks() {
        let rho = DensityMatrix::maximally_mixed(9);
        let phases = PhaseConfiguration::MAXIMALLY_ENTANGLED_OPTIMUM;
        assert!(cglmp_value(&rho, &phases, 4).is_err());
        assert!(CglmpEvaluator::new(&rho, 4).is_err());
        assert!(cglmp_value(&DensityMatrix::maximally_mixed(1), &phases, 1).is_err());
    }

    #[test]
    fn canonical_phases_lie_in_period() {
        let p = PhaseConfiguration::new(-0.25, 4.5, 9.0, -8.1).unwrap().canonical(4);
        for x in p.to_array() {
            assert!((0.0..4.0).contains(&x));
        }
        assert_eq!(p.alpha1, 3.75);
        assert!(PhaseConfiguration::new(f64::INFINITY, 0.0, 0.0, 0.0).is_err());
    }
}
