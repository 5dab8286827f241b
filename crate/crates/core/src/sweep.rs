//! Parameter sweeps, the (mu, gamma) zero-mode map and the critical gamma
//! of complete PT breaking.
//!
//! Every grid point is an independent diagonalization. Points are
//! evaluated on the current rayon pool and assembled by grid index, so the
//! output does not depend on the number of workers.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Model, ModelError, ModelKind, ModelSpec, PotentialKind};
use crate::numeric::{eigen_decompose, eigenvalues, EigenError};
use crate::spectral::{classify_states, count_zero_modes_in, PtPhase, SpectralError, Tolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tolerance(#[from] SpectralError),
    #[error("axis `{axis}` does not apply to the {kind:?} model")]
    InvalidAxis { axis: SweepAxis, kind: ModelKind },
    #[error("a gamma scan needs a gain/loss potential (u1 or u2)")]
    NoPotential,
    #[error("invalid range: start {start}, stop {stop}, {steps} steps (need start < stop and steps >= 2)")]
    InvalidRange { start: f64, stop: f64, steps: usize },
    #[error("invalid critical-gamma settings: gamma_hi {gamma_hi}, scan_step {scan_step}, refine_tol {refine_tol}")]
    InvalidScan { gamma_hi: f64, scan_step: f64, refine_tol: f64 },
    #[error("solver failed at {axis} = {value}: {source}")]
    Solver { axis: SweepAxis, value: f64, source: EigenError },
    #[error("classification failed at {axis} = {value}: {source}")]
    Classification { axis: SweepAxis, value: f64, source: SpectralError },
    #[error("solver failed at grid point mu = {mu}, gamma = {gamma}: {source}")]
    Grid { mu: f64, gamma: f64, source: EigenError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Theta,
    Mu,
    Gamma,
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweepAxis::Theta => "theta",
            SweepAxis::Mu => "mu",
            SweepAxis::Gamma => "gamma",
        })
    }
}

/// `steps` uniformly spaced points from `start` to `stop`, both included.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![start],
        _ => {
            let last = (steps - 1) as f64;
            (0..steps).map(|k| if k == steps - 1 { stop } else { start + (stop - start) * (k as f64 / last) }).collect()
        }
    }
}

/// `spec` with the swept parameter set to `value`.
pub fn set_axis(spec: &ModelSpec, axis: SweepAxis, value: f64) -> Result<ModelSpec, SweepError> {
    let mut out = *spec;
    match (axis, &mut out.model) {
        (SweepAxis::Theta, Model::Ssh(p)) => p.theta = value,
        (SweepAxis::Mu, Model::Kitaev(p)) => p.mu = value,
        (SweepAxis::Gamma, _) => {
            if spec.potential.kind == PotentialKind::None {
                return Err(SweepError::NoPotential);
            }
            out.potential.gamma = value;
        }
        _ => return Err(SweepError::InvalidAxis { axis, kind: spec.kind() }),
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ModelSpec,
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub tolerances: Tolerances,
    /// Compute eigenvectors and per-state edge flags (slower).
    pub resolve_states: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_value: f64,
    /// Sorted by `(re, im)`.
    pub eigenvalues: Vec<Complex64>,
    pub non_real_count: usize,
    pub zero_mode_count: usize,
    pub edge_flags: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
}

fn check_range(start: f64, stop: f64, steps: usize) -> Result<(), SweepError> {
    if !(start.is_finite() && stop.is_finite() && start < stop && steps >= 2) {
        return Err(SweepError::InvalidRange { start, stop, steps });
    }
    Ok(())
}

/// Diagonalizes the model at every axis value and classifies the spectrum.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    check_range(spec.start, spec.stop, spec.steps)?;
    spec.tolerances.validate()?;
    let axis = spec.axis;
    let values = linspace(spec.start, spec.stop, spec.steps);
    let models = values
        .iter()
        .map(|&v| {
            let m = set_axis(&spec.base, axis, v)?;
            m.validate()?;
            Ok(m)
        })
        .collect::<Result<Vec<_>, SweepError>>()?;

    let tol = spec.tolerances;
    let rows: Vec<Result<SweepRow, SweepError>> = models
        .par_iter()
        .zip(values.par_iter())
        .map(|(model, &value)| {
            let matrix = model.build()?;
            if spec.resolve_states {
                let d = eigen_decompose(&matrix, tol.residual_tolerance).map_err(|source| SweepError::Solver {
                    axis,
                    value,
                    source,
                })?;
                let cls = classify_states(&d, model.kind(), &tol).map_err(|source| SweepError::Classification {
                    axis,
                    value,
                    source,
                })?;
                Ok(SweepRow {
                    axis_value: value,
                    non_real_count: cls.phase.non_real_count,
                    zero_mode_count: count_zero_modes_in(&d.values, tol.zero_tol),
                    edge_flags: Some(cls.states.iter().map(|s| s.is_edge).collect()),
                    eigenvalues: d.values,
                })
            } else {
                let ev = eigenvalues(&matrix).map_err(|source| SweepError::Solver { axis, value, source })?;
                Ok(SweepRow {
                    axis_value: value,
                    non_real_count: PtPhase::from_values(&ev, tol.reality_tol).non_real_count,
                    zero_mode_count: count_zero_modes_in(&ev, tol.zero_tol),
                    edge_flags: None,
                    eigenvalues: ev,
                })
            }
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult { axis, rows })
}

/// Zero-mode counts on a (mu, gamma) grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseMap {
    pub mu_axis: Vec<f64>,
    pub gamma_axis: Vec<f64>,
    /// `counts[i][j]` belongs to `(mu_axis[i], gamma_axis[j])`.
    pub counts: Vec<Vec<usize>>,
}

impl PhaseMap {
    /// Cells `(i, j)` that break monotone containment in gamma: some
    /// `j2 > j` has count 2 at the same mu while `(i, j)` does not.
    pub fn monotonicity_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.counts.iter().enumerate() {
            if let Some(last_two) = row.iter().rposition(|&c| c == 2) {
                out.extend((0..last_two).filter(|&j| row[j] != 2).map(|j| (i, j)));
            }
        }
        out
    }

    /// Number of cells with count 2 in gamma column `j`.
    pub fn column_two_count(&self, j: usize) -> usize {
        self.counts.iter().filter(|row| row[j] == 2).count()
    }
}

/// Counts numerically-zero eigenvalues of a Kitaev chain on a (mu, gamma)
/// grid. Each cell is evaluated independently.
pub fn zero_mode_map(
    base: &ModelSpec,
    mu_range: (f64, f64),
    gamma_range: (f64, f64),
    mu_steps: usize,
    gamma_steps: usize,
    zero_tol: f64,
) -> Result<PhaseMap, SweepError> {
    if base.kind() != ModelKind::Kitaev {
        return Err(SweepError::InvalidAxis { axis: SweepAxis::Mu, kind: base.kind() });
    }
    if base.potential.kind == PotentialKind::None {
        return Err(SweepError::NoPotential);
    }
    check_range(mu_range.0, mu_range.1, mu_steps)?;
    check_range(gamma_range.0, gamma_range.1, gamma_steps)?;
    if !(zero_tol > 0.0 && zero_tol.is_finite()) {
        return Err(SpectralError::InvalidTolerance { name: "zero_tol", value: zero_tol }.into());
    }
    let mu_axis = linspace(mu_range.0, mu_range.1, mu_steps);
    let gamma_axis = linspace(gamma_range.0, gamma_range.1, gamma_steps);
    let mut cells = Vec::with_capacity(mu_steps * gamma_steps);
    for &mu in &mu_axis {
        for &gamma in &gamma_axis {
            let spec = set_axis(&set_axis(base, SweepAxis::Mu, mu)?, SweepAxis::Gamma, gamma)?;
            spec.validate()?;
            cells.push((mu, gamma, spec));
        }
    }
    let flat: Vec<Result<usize, SweepError>> = cells
        .par_iter()
        .map(|(mu, gamma, spec)| {
            let ev =
                eigenvalues(&spec.build()?).map_err(|source| SweepError::Grid { mu: *mu, gamma: *gamma, source })?;
            Ok(count_zero_modes_in(&ev, zero_tol))
        })
        .collect();
    let flat = flat.into_iter().collect::<Result<Vec<_>, _>>()?;
    let counts = flat.chunks(gamma_steps).map(|c| c.to_vec()).collect();
    Ok(PhaseMap { mu_axis, gamma_axis, counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub gamma: f64,
    pub real_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalGammaResult {
    pub found: bool,
    pub gamma_c: Option<f64>,
    /// Final bisection bracket; `(0, gamma_hi)` when nothing was found.
    pub bracket: (f64, f64),
    pub scan_step: f64,
    pub refine_tol: f64,
    /// Coarse scan over `[0, gamma_hi]`, in order.
    pub scan: Vec<ScanPoint>,
    /// Bisection evaluations, in order.
    pub refinement: Vec<ScanPoint>,
}

fn real_count(base: &ModelSpec, gamma: f64, reality_tol: f64) -> Result<usize, SweepError> {
    let spec = base.with_gamma(gamma);
    let ev = eigenvalues(&spec.build()?).map_err(|source| SweepError::Solver {
        axis: SweepAxis::Gamma,
        value: gamma,
        source,
    })?;
    Ok(PtPhase::from_values(&ev, reality_tol).real_count)
}

/// Smallest gamma at which no eigenvalue stays real.
///
/// The real-eigenvalue count need not be monotone in gamma, so the whole of
/// `[0, gamma_hi]` is scanned first and the first interval where the count
/// reaches zero is refined by bisection down to `refine_tol`.
pub fn critical_gamma(
    base: &ModelSpec,
    gamma_hi: f64,
    scan_step: f64,
    refine_tol: f64,
    reality_tol: f64,
) -> Result<CriticalGammaResult, SweepError> {
    if !(gamma_hi > 0.0 && gamma_hi.is_finite() && scan_step > 0.0 && refine_tol > 0.0) {
        return Err(SweepError::InvalidScan { gamma_hi, scan_step, refine_tol });
    }
    if !(reality_tol > 0.0 && reality_tol.is_finite()) {
        return Err(SpectralError::InvalidTolerance { name: "reality_tol", value: reality_tol }.into());
    }
    if base.potential.kind == PotentialKind::None {
        return Err(SweepError::NoPotential);
    }
    base.with_gamma(gamma_hi).validate()?;

    let n_steps = (gamma_hi / scan_step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n_steps).map(|k| k as f64 * scan_step).filter(|&g| g <= gamma_hi).collect();
    if grid.last().is_none_or(|&g| g < gamma_hi) {
        grid.push(gamma_hi);
    }
    let counts: Vec<Result<usize, SweepError>> = grid.par_iter().map(|&g| real_count(base, g, reality_tol)).collect();
    let scan = grid
        .iter()
        .zip(counts)
        .map(|(&gamma, c)| c.map(|real_count| ScanPoint { gamma, real_count }))
        .collect::<Result<Vec<_>, _>>()?;

    let mut result = CriticalGammaResult {
        found: false,
        gamma_c: None,
        bracket: (0.0, gamma_hi),
        scan_step,
        refine_tol,
        scan,
        refinement: Vec::new(),
    };
    let Some(first) = result.scan.iter().position(|p| p.real_count == 0) else {
        return Ok(result);
    };
    result.found = true;
    if first == 0 {
        result.gamma_c = Some(0.0);
        result.bracket = (0.0, 0.0);
        return Ok(result);
    }
    let mut lo = result.scan[first - 1].gamma;
    let mut hi = result.scan[first].gamma;
    while hi - lo > refine_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let real_count = real_count(base, mid, reality_tol)?;
        result.refinement.push(ScanPoint { gamma: mid, real_count });
        if real_count == 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    result.bracket = (lo, hi);
    result.gamma_c = Some(0.5 * (lo + hi));
    Ok(result)
}
