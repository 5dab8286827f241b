//! SSH and Kitaev (BdG) chains with open boundaries and PT-symmetric gain/loss.
//!
//! Energies are in units of the hopping `t`, which stays an explicit
//! parameter (default 1).
//!
//! Kitaev matrices use the Nambu ordering `(c_1..c_N, c_1^dag..c_N^dag)`:
//!
//! ```text
//!     [ mu + d_n, t on n±1         | -i delta above, +i delta below ]
//!     [ -i delta above, +i delta below | -mu - d_n, -t on n±1        ]
//! ```
//!
//! where `d` is the gain/loss diagonal. The hole block carries `-d`, so a
//! gain on an electron is an equal loss on the hole at the same site.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::DenseComplexMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("SSH chain needs an even number of sites (complete dimers), got {0}")]
    SshOddSites(usize),
    #[error("staggered gain/loss needs an even number of sites, otherwise it is not PT symmetric (got {0})")]
    StaggeredOddSites(usize),
    #[error("end-cap gain/loss needs at least 2 sites, got {0}")]
    EndCapsTooShort(usize),
    #[error("chain needs at least {min} sites, got {got}")]
    TooFewSites { min: usize, got: usize },
    #[error("hopping t must be positive and finite, got {0}")]
    InvalidHopping(f64),
    #[error("dimerization |delta| must be below 1, got {0}")]
    InvalidDimerization(f64),
    #[error("gain/loss strength gamma must be finite and non-negative, got {0}")]
    InvalidGamma(f64),
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
}

/// Shape of the imaginary on-site potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    None,
    /// `+i gamma` on the first site, `-i gamma` on the last.
    EndCaps,
    /// `i gamma (-1)^n` with 1-based `n`: loss on site 1.
    Staggered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainLoss {
    pub kind: PotentialKind,
    pub gamma: f64,
}

impl GainLoss {
    pub const NONE: GainLoss = GainLoss { kind: PotentialKind::None, gamma: 0.0 };

    pub fn new(kind: PotentialKind, gamma: f64) -> Self {
        Self { kind, gamma }
    }

    pub fn end_caps(gamma: f64) -> Self {
        Self::new(PotentialKind::EndCaps, gamma)
    }

    pub fn staggered(gamma: f64) -> Self {
        Self::new(PotentialKind::Staggered, gamma)
    }

    fn validate(&self, n_sites: usize) -> Result<(), ModelError> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(ModelError::InvalidGamma(self.gamma));
        }
        match self.kind {
            PotentialKind::None => Ok(()),
            PotentialKind::EndCaps if n_sites < 2 => Err(ModelError::EndCapsTooShort(n_sites)),
            PotentialKind::Staggered if !n_sites.is_multiple_of(2) => Err(ModelError::StaggeredOddSites(n_sites)),
            _ => Ok(()),
        }
    }
}

/// Diagonal of the gain/loss potential, one entry per site.
pub fn potential_diagonal(kind: PotentialKind, gamma: f64, n_sites: usize) -> Result<Vec<Complex64>, ModelError> {
    GainLoss::new(kind, gamma).validate(n_sites)?;
    let mut d = vec![Complex64::new(0.0, 0.0); n_sites];
    match kind {
        PotentialKind::None => {}
        PotentialKind::EndCaps => {
            d[0] = Complex64::new(0.0, gamma);
            d[n_sites - 1] = Complex64::new(0.0, -gamma);
        }
        PotentialKind::Staggered => {
            for (i, v) in d.iter_mut().enumerate() {
                // site n = i + 1; (-1)^n is -1 on odd n.
                let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
                *v = Complex64::new(0.0, sign * gamma);
            }
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SshParams {
    pub n_sites: usize,
    pub t: f64,
    /// Dimerization amplitude.
    pub delta: f64,
    /// Dimerization angle in radians.
    pub theta: f64,
}

impl SshParams {
    /// Hoppings `(t_minus, t_plus) = t (1 -/+ delta cos theta)`. `t_minus`
    /// couples sites (2n-1, 2n), `t_plus` couples (2n, 2n+1).
    pub fn hoppings(&self) -> (f64, f64) {
        let d = self.delta * self.theta.cos();
        (self.t * (1.0 - d), self.t * (1.0 + d))
    }

    fn validate(&self) -> Result<(), ModelError> {
        check_finite("theta", self.theta)?;
        check_finite("delta", self.delta)?;
        if self.n_sites < 2 {
            return Err(ModelError::TooFewSites { min: 2, got: self.n_sites });
        }
        if !self.n_sites.is_multiple_of(2) {
            return Err(ModelError::SshOddSites(self.n_sites));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(ModelError::InvalidHopping(self.t));
        }
        if self.delta.abs() >= 1.0 {
            return Err(ModelError::InvalidDimerization(self.delta));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KitaevParams {
    pub n_sites: usize,
    pub t: f64,
    /// p-wave pairing amplitude.
    pub delta_pair: f64,
    /// Chemical potential.
    pub mu: f64,
}

impl KitaevParams {
    fn validate(&self) -> Result<(), ModelError> {
        check_finite("mu", self.mu)?;
        check_finite("delta_pair", self.delta_pair)?;
        if self.n_sites < 1 {
            return Err(ModelError::TooFewSites { min: 1, got: self.n_sites });
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(ModelError::InvalidHopping(self.t));
        }
        Ok(())
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::NonFinite { name, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Ssh,
    Kitaev,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    Ssh(SshParams),
    Kitaev(KitaevParams),
}

/// A chain plus its gain/loss potential: `H = H0 + U`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Model,
    pub potential: GainLoss,
}

impl ModelSpec {
    pub fn ssh(n_sites: usize, t: f64, delta: f64, theta: f64, potential: GainLoss) -> Self {
        Self { model: Model::Ssh(SshParams { n_sites, t, delta, theta }), potential }
    }

    pub fn kitaev(n_sites: usize, t: f64, delta_pair: f64, mu: f64, potential: GainLoss) -> Self {
        Self { model: Model::Kitaev(KitaevParams { n_sites, t, delta_pair, mu }), potential }
    }

    pub fn kind(&self) -> ModelKind {
        match self.model {
            Model::Ssh(_) => ModelKind::Ssh,
            Model::Kitaev(_) => ModelKind::Kitaev,
        }
    }

    pub fn n_sites(&self) -> usize {
        match self.model {
            Model::Ssh(p) => p.n_sites,
            Model::Kitaev(p) => p.n_sites,
        }
    }

    /// Dimension of the matrix: `N` for SSH, `2N` for Kitaev.
    pub fn dim(&self) -> usize {
        match self.model {
            Model::Ssh(p) => p.n_sites,
            Model::Kitaev(p) => 2 * p.n_sites,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.potential.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self.model {
            Model::Ssh(p) => p.validate()?,
            Model::Kitaev(p) => p.validate()?,
        }
        self.potential.validate(self.n_sites())
    }

    pub fn build(&self) -> Result<DenseComplexMatrix, ModelError> {
        match self.model {
            Model::Ssh(p) => build_ssh(&p, &self.potential),
            Model::Kitaev(p) => build_kitaev_bdg(&p, &self.potential),
        }
    }
}

/// `N x N` open SSH chain.
pub fn build_ssh(params: &SshParams, potential: &GainLoss) -> Result<DenseComplexMatrix, ModelError> {
    params.validate()?;
    let n = params.n_sites;
    let d = potential_diagonal(potential.kind, potential.gamma, n)?;
    let (t_minus, t_plus) = params.hoppings();
    let mut m = DenseComplexMatrix::zeros(n);
    for (i, v) in d.into_iter().enumerate() {
        m[(i, i)] = v;
    }
    for i in 0..n - 1 {
        // 0-based even i is 1-based odd: intra-dimer bond.
        let hop = Complex64::new(if i % 2 == 0 { t_minus } else { t_plus }, 0.0);
        m[(i, i + 1)] = hop;
        m[(i + 1, i)] = hop;
    }
    Ok(m)
}

/// `2N x 2N` Bogoliubov-de Gennes matrix of the open Kitaev chain.
pub fn build_kitaev_bdg(params: &KitaevParams, potential: &GainLoss) -> Result<DenseComplexMatrix, ModelError> {
    params.validate()?;
    let n = params.n_sites;
    let d = potential_diagonal(potential.kind, potential.gamma, n)?;
    let mut m = DenseComplexMatrix::zeros(2 * n);
    let mu = Complex64::new(params.mu, 0.0);
    let hop = Complex64::new(params.t, 0.0);
    let pair_above = Complex64::new(0.0, -params.delta_pair);
    let pair_below = Complex64::new(0.0, params.delta_pair);
    for (i, v) in d.into_iter().enumerate() {
        m[(i, i)] = mu + v;
        m[(n + i, n + i)] = -mu - v;
    }
    for i in 0..n.saturating_sub(1) {
        m[(i, i + 1)] = hop;
        m[(i + 1, i)] = hop;
        m[(n + i, n + i + 1)] = -hop;
        m[(n + i + 1, n + i)] = -hop;
        m[(i, n + i + 1)] = pair_above;
        m[(i + 1, n + i)] = pair_below;
        m[(n + i, i + 1)] = pair_above;
        m[(n + i + 1, i)] = pair_below;
    }
    Ok(m)
}

/// `P conj(M) P` where `P` reverses site order (within each Nambu block for
/// Kitaev matrices, selected by `kind`).
pub fn pt_transform(m: &DenseComplexMatrix, kind: ModelKind) -> DenseComplexMatrix {
    let dim = m.dim();
    let perm = site_reversal(dim, kind);
    let mut out = DenseComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            out[(perm[i], perm[j])] = m[(i, j)].conj();
        }
    }
    out
}

fn site_reversal(dim: usize, kind: ModelKind) -> Vec<usize> {
    match kind {
        ModelKind::Ssh => (0..dim).rev().collect(),
        ModelKind::Kitaev => {
            let n = dim / 2;
            (0..dim).map(|i| if i < n { n - 1 - i } else { n + (2 * n - 1 - i) }).collect()
        }
    }
}
