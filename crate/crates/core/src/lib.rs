//! Non-locality measures for bipartite N×N-level quantum systems.
//!
//! The crate evaluates two measures on pure and mixed states:
//!
//! * the CHSH correlator `⟨A₁B₁ − A₁B₂ + A₂B₁ + A₂B₂⟩` for a fixed set of
//!   SU(4) observables whose Bell operator has a `±2√2` spectrum, and
//! * the CGLMP functional `I_N`, built from joint outcome probabilities of
//!   phase-tunable Fourier measurement bases, maximised over the four phases
//!   with a multi-start Nelder–Mead search.
//!
//! Module map:
//!
//! * [`qmath`]: small dense complex linear algebra (Jacobi eigensolver,
//!   Kronecker product, partial trace).
//! * [`scenario`]: Gell-Mann generators, the CHSH observables, Bell operator
//!   and its `H±` sectors.
//! * [`cglmp`]: measurement bases, joint distributions and `I_N`.
//! * [`states`]: pure and mixed Bell-state families, noisy maximally
//!   entangled states, the entanglement parameter `P`.
//! * [`optim`]: Nelder–Mead maximiser and the multi-start `I_N` search.
//! * [`expcli`]: experiment drivers, histogram/power-law fitting, CSV and
//!   JSON export used by the `nonlocal` binary.

pub mod cglmp;
pub mod error;
pub mod expcli;
pub mod optim;
pub mod qmath;
pub mod rng;
pub mod scenario;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
