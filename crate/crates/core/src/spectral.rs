//! Physics read off an eigendecomposition: real vs. complex energies,
//! conjugate pairs, PT phase, occupation profiles, edge localization,
//! particle-hole balance and zero modes.
//!
//! Expectation values use the normalized right eigenvectors with the
//! ordinary inner product; no biorthogonal (left/right) weighting.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::ModelKind;
use crate::numeric::{EigenDecomposition, DEFAULT_RESIDUAL_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("vector length {len} does not match a {kind:?} chain (expected {expected})")]
    LengthMismatch { kind: ModelKind, len: usize, expected: String },
    #[error("non-real eigenvalue #{index} = {energy} has no conjugate partner within {pairing_tol:e}")]
    UnpairedEigenvalue { index: usize, energy: Complex64, pairing_tol: f64 },
    #[error("edge fraction must lie in (0, 0.5], got {0}")]
    InvalidEdgeFraction(f64),
    #[error("tolerance `{name}` must be positive and finite, got {value}")]
    InvalidTolerance { name: &'static str, value: f64 },
}

/// Every threshold that feeds classification and counting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Modulus below which both `Re E` and `Im E` count as zero.
    pub zero_tol: f64,
    /// `|Im E| < reality_tol` marks a real eigenvalue.
    pub reality_tol: f64,
    /// Maximum distance between a non-real eigenvalue and its partner's conjugate.
    pub pairing_tol: f64,
    /// Fraction of the chain (per end) that counts as edge.
    pub edge_fraction: f64,
    /// Edge weight above which a state is an edge state.
    pub edge_threshold: f64,
    /// Solver residual bound relative to the matrix infinity norm.
    pub residual_tolerance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_tol: 1e-8,
            reality_tol: 1e-9,
            pairing_tol: 1e-8,
            edge_fraction: 0.05,
            edge_threshold: 0.5,
            residual_tolerance: DEFAULT_RESIDUAL_TOLERANCE,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), SpectralError> {
        for (name, value) in [
            ("zero_tol", self.zero_tol),
            ("reality_tol", self.reality_tol),
            ("pairing_tol", self.pairing_tol),
            ("edge_threshold", self.edge_threshold),
            ("residual_tolerance", self.residual_tolerance),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(SpectralError::InvalidTolerance { name, value });
            }
        }
        if !(self.edge_fraction > 0.0 && self.edge_fraction <= 0.5) {
            return Err(SpectralError::InvalidEdgeFraction(self.edge_fraction));
        }
        Ok(())
    }
}

/// Per-site occupation probabilities of one eigenstate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum OccupationProfile {
    Ssh { n: Vec<f64> },
    Kitaev { electron: Vec<f64>, hole: Vec<f64> },
}

impl OccupationProfile {
    pub fn n_sites(&self) -> usize {
        match self {
            Self::Ssh { n } => n.len(),
            Self::Kitaev { electron, .. } => electron.len(),
        }
    }

    /// Total occupation on site `i` (electron plus hole for Kitaev).
    pub fn site_total(&self, i: usize) -> f64 {
        match self {
            Self::Ssh { n } => n[i],
            Self::Kitaev { electron, hole } => electron[i] + hole[i],
        }
    }

    pub fn total(&self) -> f64 {
        (0..self.n_sites()).map(|i| self.site_total(i)).sum()
    }

    /// `max_i |n_e,i - n_h,i|`; `None` for SSH.
    pub fn phs_deviation(&self) -> Option<f64> {
        match self {
            Self::Ssh { .. } => None,
            Self::Kitaev { electron, hole } => {
                Some(electron.iter().zip(hole).map(|(e, h)| (e - h).abs()).fold(0.0, f64::max))
            }
        }
    }

    /// Occupation on the outer `edge_sites` sites at each end.
    pub fn edge_weight(&self, edge_sites: usize) -> f64 {
        let n = self.n_sites();
        let k = edge_sites.min(n);
        let weight: f64 = (0..n).filter(|&i| i < k || i >= n - k).map(|i| self.site_total(i)).sum();
        weight.clamp(0.0, 1.0)
    }
}

/// `<n_i> = |psi_i|^2` (SSH) or `(|u_i|^2, |v_i|^2)` for a Nambu vector `(u, v)`.
pub fn occupation_profile(vector: &[Complex64], kind: ModelKind) -> Result<OccupationProfile, SpectralError> {
    match kind {
        ModelKind::Ssh => {
            if vector.is_empty() {
                return Err(SpectralError::LengthMismatch { kind, len: 0, expected: "at least 1".into() });
            }
            Ok(OccupationProfile::Ssh { n: vector.iter().map(|z| z.norm_sqr()).collect() })
        }
        ModelKind::Kitaev => {
            if vector.is_empty() || !vector.len().is_multiple_of(2) {
                return Err(SpectralError::LengthMismatch {
                    kind,
                    len: vector.len(),
                    expected: "an even length 2N".into(),
                });
            }
            let (u, v) = vector.split_at(vector.len() / 2);
            Ok(OccupationProfile::Kitaev {
                electron: u.iter().map(|z| z.norm_sqr()).collect(),
                hole: v.iter().map(|z| z.norm_sqr()).collect(),
            })
        }
    }
}

/// Number of sites per end for a given edge fraction: `ceil(fraction * N)`.
pub fn edge_site_count(edge_fraction: f64, n_sites: usize) -> usize {
    // 1e-9 absorbs representation error such as 0.05 * 100 = 5.000000000000001.
    let k = (edge_fraction * n_sites as f64 - 1e-9).ceil();
    (k.max(1.0) as usize).min(n_sites)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateClassification {
    pub index: usize,
    pub energy: Complex64,
    pub is_real: bool,
    pub conjugate_partner: Option<usize>,
    pub edge_weight: f64,
    pub is_edge: bool,
    /// Kitaev only.
    pub phs_deviation: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PtStatus {
    Unbroken,
    Broken,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PtPhase {
    pub status: PtStatus,
    pub non_real_count: usize,
    pub real_count: usize,
}

impl PtPhase {
    /// Phase from eigenvalues alone (no pairing check).
    pub fn from_values(values: &[Complex64], reality_tol: f64) -> Self {
        let non_real_count = values.iter().filter(|z| z.im.abs() >= reality_tol).count();
        let status = if non_real_count == 0 { PtStatus::Unbroken } else { PtStatus::Broken };
        Self { status, non_real_count, real_count: values.len() - non_real_count }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub states: Vec<StateClassification>,
    pub phase: PtPhase,
}

impl Classification {
    pub fn edge_states(&self) -> impl Iterator<Item = &StateClassification> {
        self.states.iter().filter(|s| s.is_edge)
    }

    pub fn non_real_states(&self) -> impl Iterator<Item = &StateClassification> {
        self.states.iter().filter(|s| !s.is_real)
    }
}

/// Classifies every eigenstate of `decomp`.
///
/// Non-real eigenvalues are paired greedily, in sorted order, with the
/// unpaired eigenvalue closest to their complex conjugate. A non-real
/// eigenvalue without a partner within `pairing_tol` is an error: PT
/// symmetric matrices have conjugation-closed spectra.
pub fn classify_states(
    decomp: &EigenDecomposition,
    kind: ModelKind,
    tol: &Tolerances,
) -> Result<Classification, SpectralError> {
    tol.validate()?;
    let values = &decomp.values;
    let mut states = Vec::with_capacity(values.len());
    for (index, (&energy, vector)) in values.iter().zip(&decomp.vectors).enumerate() {
        let profile = occupation_profile(vector, kind)?;
        let edge_sites = edge_site_count(tol.edge_fraction, profile.n_sites());
        let edge_weight = profile.edge_weight(edge_sites);
        states.push(StateClassification {
            index,
            energy,
            is_real: energy.im.abs() < tol.reality_tol,
            conjugate_partner: None,
            edge_weight,
            is_edge: edge_weight > tol.edge_threshold,
            phs_deviation: profile.phs_deviation(),
        });
    }

    let non_real: Vec<usize> = states.iter().filter(|s| !s.is_real).map(|s| s.index).collect();
    for &i in &non_real {
        if states[i].conjugate_partner.is_some() {
            continue;
        }
        let target = values[i].conj();
        let best = non_real
            .iter()
            .copied()
            .filter(|&j| j != i && states[j].conjugate_partner.is_none())
            .map(|j| (j, (values[j] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, dist)) if dist <= tol.pairing_tol => {
                states[i].conjugate_partner = Some(j);
                states[j].conjugate_partner = Some(i);
            }
            _ => {
                return Err(SpectralError::UnpairedEigenvalue {
                    index: i,
                    energy: values[i],
                    pairing_tol: tol.pairing_tol,
                })
            }
        }
    }

    let phase = PtPhase::from_values(values, tol.reality_tol);
    Ok(Classification { states, phase })
}

/// Eigenvalues with `|Re E| < zero_tol` and `|Im E| < zero_tol`.
pub fn count_zero_modes_in(values: &[Complex64], zero_tol: f64) -> usize {
    values.iter().filter(|z| z.re.abs() < zero_tol && z.im.abs() < zero_tol).count()
}

pub fn count_zero_modes(decomp: &EigenDecomposition, zero_tol: f64) -> usize {
    count_zero_modes_in(&decomp.values, zero_tol)
}
