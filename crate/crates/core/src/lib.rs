//! Non-Hermitian SSH and Kitaev chains under open boundary conditions.
//!
//! The crate builds the single-particle (SSH) and Bogoliubov-de Gennes
//! (Kitaev) matrices with optional PT-symmetric gain/loss, diagonalizes
//! them with a dense complex eigensolver, and classifies the resulting
//! states: real vs. complex energies, conjugate pairs, edge localization,
//! particle-hole balance and numerically-zero modes. On top of that sit
//! parameter sweeps, the (mu, gamma) zero-mode map and a critical-gamma
//! search for complete PT breaking.

pub mod lattice;
pub mod numeric;
pub mod spectral;
pub mod sweep;

pub use lattice::{GainLoss, KitaevParams, Model, ModelError, ModelKind, ModelSpec, PotentialKind, SshParams};
pub use numeric::{eigen_decompose, eigenvalues, infinity_norm, DenseComplexMatrix, EigenDecomposition, EigenError};
pub use spectral::{
    classify_states, count_zero_modes, count_zero_modes_in, occupation_profile, Classification, OccupationProfile,
    PtPhase, PtStatus, SpectralError, StateClassification, Tolerances,
};
pub use sweep::{
    critical_gamma, run_sweep, zero_mode_map, CriticalGammaResult, PhaseMap, SweepAxis, SweepError, SweepResult,
    SweepRow, SweepSpec,
};

pub use num_complex::Complex64;
