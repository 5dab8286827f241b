//! Command implementations.

use std::io;
use std::path::Path;
use std::time::Instant;

use ptchain::lattice::ModelError;
use ptchain::{
    classify_states, critical_gamma, eigen_decompose, occupation_profile, run_sweep, zero_mode_map, Classification,
    EigenDecomposition, EigenError, GainLoss, ModelSpec, OccupationProfile, PotentialKind, SpectralError, SweepAxis,
    SweepError, SweepSpec, Tolerances,
};
use serde_json::Value;
use thiserror::Error;

use crate::cli::*;
use crate::output::{write_atomic, Csv, Grid, RunManifest, F};
use crate::plot;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Empty(String),
    #[error("{0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Empty(_) => 3,
            CliError::Solver(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        match e {
            EigenError::NonFinite { .. } | EigenError::InvalidTolerance(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::InvalidTolerance { .. } | SpectralError::InvalidEdgeFraction(_) => {
                CliError::Invalid(e.to_string())
            }
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Solver { .. } | SweepError::Classification { .. } | SweepError::Grid { .. } => {
                CliError::Solver(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl ModelArgs {
    fn spec(&self, mu: Option<f64>, gamma: Option<f64>) -> Result<ModelSpec, CliError> {
        let gamma = gamma.unwrap_or(0.0);
        let kind = match self.potential {
            PotentialChoice::None if gamma != 0.0 => return Err(invalid("--gamma needs --potential u1 or u2")),
            PotentialChoice::None => PotentialKind::None,
            PotentialChoice::U1 => PotentialKind::EndCaps,
            PotentialChoice::U2 => PotentialKind::Staggered,
        };
        let potential = GainLoss::new(kind, gamma);
        let spec = match self.model {
            ModelChoice::Ssh => {
                if self.pairing.is_some() || mu.is_some() {
                    return Err(invalid("--pairing and --mu apply only to --model kitaev"));
                }
                ModelSpec::ssh(self.n, self.t, self.delta.unwrap_or(0.3), self.theta.unwrap_or(0.0), potential)
            }
            ModelChoice::Kitaev => {
                if self.delta.is_some() || self.theta.is_some() {
                    return Err(invalid("--delta and --theta apply only to --model ssh"));
                }
                ModelSpec::kitaev(self.n, self.t, self.pairing.unwrap_or(1.0), mu.unwrap_or(0.0), potential)
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn tolerances(args: &ToleranceArgs) -> Result<Tolerances, CliError> {
    let tol = args.tolerances();
    tol.validate()?;
    Ok(tol)
}

fn pool(run: &RunArgs) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(run.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Io(io::Error::other(e)))
}

/// Model description for the manifest with scanned parameters removed.
fn model_record(spec: &ModelSpec, scanned: &[SweepAxis]) -> Value {
    let mut v = serde_json::to_value(spec).expect("model spec serializes");
    for axis in scanned {
        let (section, key) = match axis {
            SweepAxis::Theta => ("model", "theta"),
            SweepAxis::Mu => ("model", "mu"),
            SweepAxis::Gamma => ("potential", "gamma"),
        };
        if let Some(obj) = v[section].as_object_mut() {
            obj.remove(key);
        }
    }
    v
}

struct Record<'a> {
    command: &'a str,
    spec: &'a ModelSpec,
    scanned: &'a [SweepAxis],
    tolerances: Tolerances,
    grid: Grid,
    plot: Option<&'a str>,
    workers: usize,
    started: Instant,
}

impl Record<'_> {
    fn write(self, dir: &Path) -> Result<(), CliError> {
        let manifest = RunManifest {
            tool: env!("CARGO_BIN_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: self.command.into(),
            model: model_record(self.spec, self.scanned),
            tolerances: self.tolerances,
            grid: self.grid,
            plot: self.plot.map(str::to_string),
            workers: self.workers,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            conventions: Default::default(),
        };
        manifest.write(dir)?;
        Ok(())
    }
}

fn classify(spec: &ModelSpec, tol: &Tolerances) -> Result<(EigenDecomposition, Classification), CliError> {
    let decomp = eigen_decompose(&spec.build()?, tol.residual_tolerance)?;
    let cls = classify_states(&decomp, spec.kind(), tol)?;
    Ok((decomp, cls))
}

pub fn spectrum(args: &PointArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = args.model.spec(args.mu, args.gamma)?;
    let tol = tolerances(&args.tol)?;
    let (_, cls) = classify(&spec, &tol)?;
    let mut csv = Csv::new(&["index", "re", "im", "is_real", "edge_weight", "is_edge"]);
    for s in &cls.states {
        csv.row(&[&s.index, &F(s.energy.re), &F(s.energy.im), &s.is_real, &F(s.edge_weight), &s.is_edge]);
    }
    let path = write_atomic(&args.run.out, "spectrum.csv", &csv.into_bytes())?;
    let record = Record {
        command: "spectrum",
        spec: &spec,
        scanned: &[],
        tolerances: tol,
        grid: Grid::Point,
        plot: None,
        workers: pool(&args.run)?.current_num_threads(),
        started,
    };
    record.write(&args.run.out)?;
    println!(
        "wrote {} ({} states, {} non-real, {} edge)",
        path.display(),
        cls.states.len(),
        cls.phase.non_real_count,
        cls.edge_states().count()
    );
    Ok(())
}

pub fn edge_state(args: &PointArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = args.model.spec(args.mu, args.gamma)?;
    let tol = tolerances(&args.tol)?;
    let (decomp, cls) = classify(&spec, &tol)?;
    let by_energy = |a: &&ptchain::StateClassification, b: &&ptchain::StateClassification| {
        a.energy.norm().total_cmp(&b.energy.norm()).then(a.index.cmp(&b.index))
    };
    let Some(state) = cls.edge_states().min_by(by_energy) else {
        let closest = cls.states.iter().min_by(by_energy).expect("spectrum is never empty");
        let largest = cls.states.iter().map(|s| s.edge_weight).fold(0.0, f64::max);
        return Err(CliError::Empty(format!(
            "no edge state detected: edge weight {:.6} for the state nearest zero energy, at most {:.6} over all states (threshold {})",
            closest.edge_weight, largest, tol.edge_threshold
        )));
    };
    let profile = occupation_profile(&decomp.vectors[state.index], spec.kind())?;
    let csv = match &profile {
        OccupationProfile::Ssh { n } => {
            let mut csv = Csv::new(&["site", "n"]);
            for (i, v) in n.iter().enumerate() {
                csv.row(&[&(i + 1), &F(*v)]);
            }
            csv
        }
        OccupationProfile::Kitaev { electron, hole } => {
            let mut csv = Csv::new(&["site", "n_e", "n_h"]);
            for (i, (e, h)) in electron.iter().zip(hole).enumerate() {
                csv.row(&[&(i + 1), &F(*e), &F(*h)]);
            }
            csv
        }
    };
    let path = write_atomic(&args.run.out, "profile.csv", &csv.into_bytes())?;
    let record = Record {
        command: "edge-state",
        spec: &spec,
        scanned: &[],
        tolerances: tol,
        grid: Grid::Point,
        plot: None,
        workers: pool(&args.run)?.current_num_threads(),
        started,
    };
    record.write(&args.run.out)?;
    println!(
        "wrote {} (state {} at E = {:.3e}{:+.3e}i, edge weight {:.6})",
        path.display(),
        state.index,
        state.energy.re,
        state.energy.im,
        state.edge_weight
    );
    Ok(())
}

fn sweep_axis(a: AxisChoice) -> SweepAxis {
    match a {
        AxisChoice::Theta => SweepAxis::Theta,
        AxisChoice::Mu => SweepAxis::Mu,
        AxisChoice::Gamma => SweepAxis::Gamma,
    }
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let axis = sweep_axis(args.axis);
    let clash = match axis {
        SweepAxis::Theta => args.model.theta.is_some().then_some("--theta"),
        SweepAxis::Mu => args.mu.is_some().then_some("--mu"),
        SweepAxis::Gamma => args.gamma.is_some().then_some("--gamma"),
    };
    if let Some(flag) = clash {
        return Err(invalid(format!("{flag} conflicts with --axis {axis}")));
    }
    if axis == SweepAxis::Gamma && args.model.potential == PotentialChoice::None {
        return Err(SweepError::NoPotential.into());
    }
    let spec = args.model.spec(args.mu, args.gamma)?;
    let tol = tolerances(&args.tol)?;
    let sweep = SweepSpec {
        base: spec,
        axis,
        start: args.from,
        stop: args.to,
        steps: args.steps,
        tolerances: tol,
        resolve_states: false,
    };
    let pool = pool(&args.run)?;
    let result = pool.install(|| run_sweep(&sweep))?;

    let mut csv = Csv::new(&["axis_value", "index", "re", "im"]);
    let mut points = Vec::new();
    for row in &result.rows {
        for (k, z) in row.eigenvalues.iter().enumerate() {
            csv.row(&[&F(row.axis_value), &k, &F(z.re), &F(z.im)]);
            points.push((row.axis_value, if args.plot == Some(PlotPart::Re) { z.re } else { z.im }));
        }
    }
    let path = write_atomic(&args.run.out, "sweep.csv", &csv.into_bytes())?;
    let plot = args.plot.map(|part| match part {
        PlotPart::Re => "re",
        PlotPart::Im => "im",
    });
    if let Some(part) = plot {
        let svg = plot::scatter(&points, &axis.to_string(), &format!("{part} E"));
        write_atomic(&args.run.out, "sweep.svg", svg.as_bytes())?;
    }
    let record = Record {
        command: "sweep",
        spec: &spec,
        scanned: &[axis],
        tolerances: tol,
        grid: Grid::Sweep { axis, start: args.from, stop: args.to, steps: args.steps },
        plot,
        workers: pool.current_num_threads(),
        started,
    };
    record.write(&args.run.out)?;
    let non_real = result.rows.iter().filter(|r| r.non_real_count > 0).count();
    println!("wrote {} ({} points, {} with non-real eigenvalues)", path.display(), result.rows.len(), non_real);
    Ok(())
}

pub fn phase_map(args: &PhaseMapArgs) -> Result<(), CliError> {
    let started = Instant::now();
    if args.model.model != ModelChoice::Kitaev {
        return Err(invalid("phase-map needs --model kitaev"));
    }
    if args.model.potential == PotentialChoice::None {
        return Err(SweepError::NoPotential.into());
    }
    let spec = args.model.spec(None, None)?;
    let tol = tolerances(&args.tol)?;
    let pool = pool(&args.run)?;
    let (mu, gamma) = (args.mu, args.gamma);
    let map = pool.install(|| {
        zero_mode_map(&spec, (mu.start, mu.stop), (gamma.start, gamma.stop), mu.steps, gamma.steps, tol.zero_tol)
    })?;

    let mut csv = Csv::new(&["mu", "gamma", "count"]);
    for (i, m) in map.mu_axis.iter().enumerate() {
        for (j, g) in map.gamma_axis.iter().enumerate() {
            csv.row(&[&F(*m), &F(*g), &map.counts[i][j]]);
        }
    }
    let path = write_atomic(&args.run.out, "phasemap.csv", &csv.into_bytes())?;
    if args.plot {
        write_atomic(&args.run.out, "phasemap.svg", plot::cell_map(&map).as_bytes())?;
    }
    let record = Record {
        command: "phase-map",
        spec: &spec,
        scanned: &[SweepAxis::Mu, SweepAxis::Gamma],
        tolerances: tol,
        grid: Grid::PhaseMap { mu: mu.into(), gamma: gamma.into() },
        plot: args.plot.then_some("cells"),
        workers: pool.current_num_threads(),
        started,
    };
    record.write(&args.run.out)?;
    let twos = map.counts.iter().flatten().filter(|&&c| c == 2).count();
    println!("wrote {} ({} cells, {} with two zero modes)", path.display(), mu.steps * gamma.steps, twos);
    Ok(())
}

pub fn critical(args: &CriticalGammaArgs) -> Result<(), CliError> {
    let started = Instant::now();
    if args.model.potential == PotentialChoice::None {
        return Err(SweepError::NoPotential.into());
    }
    let spec = args.model.spec(args.mu, None)?;
    let tol = tolerances(&args.tol)?;
    let pool = pool(&args.run)?;
    let result =
        pool.install(|| critical_gamma(&spec, args.gamma_hi, args.scan_step, args.refine_tol, tol.reality_tol))?;
    let mut json = serde_json::to_string_pretty(&result).map_err(io::Error::other)?;
    json.push('\n');
    let path = write_atomic(&args.run.out, "critical_gamma.json", json.as_bytes())?;
    let record = Record {
        command: "critical-gamma",
        spec: &spec,
        scanned: &[SweepAxis::Gamma],
        tolerances: tol,
        grid: Grid::CriticalGamma { gamma_hi: args.gamma_hi, scan_step: args.scan_step, refine_tol: args.refine_tol },
        plot: None,
        workers: pool.current_num_threads(),
        started,
    };
    record.write(&args.run.out)?;
    match result.gamma_c {
        Some(g) => println!("wrote {} (gamma_c = {g})", path.display()),
        None => println!("wrote {} (real eigenvalues persist up to gamma = {})", path.display(), args.gamma_hi),
    }
    Ok(())
}

/// Rebuilds the argument list recorded in a manifest.
pub fn replay_argv(manifest: &RunManifest, run: &RunArgs) -> Result<Vec<String>, CliError> {
    let bad = |what: &str| invalid(format!("manifest: {what}"));
    let mut argv = vec!["ptchain".to_string(), manifest.command.clone()];
    let mut push = |flag: &str, value: String| {
        argv.push(format!("--{flag}"));
        argv.push(value);
    };
    let model = &manifest.model["model"];
    let name = model["model"].as_str().ok_or_else(|| bad("missing model name"))?;
    push("model", name.to_string());
    let n = model["n_sites"].as_u64().ok_or_else(|| bad("missing n_sites"))?;
    push("n", n.to_string());
    for (key, flag) in [("t", "t"), ("delta", "delta"), ("theta", "theta"), ("delta_pair", "pairing"), ("mu", "mu")] {
        if let Some(v) = model.get(key) {
            push(flag, F(v.as_f64().ok_or_else(|| bad(key))?).to_string());
        }
    }
    let potential = &manifest.model["potential"];
    let kind = match potential["kind"].as_str() {
        Some("none") => "none",
        Some("end_caps") => "u1",
        Some("staggered") => "u2",
        _ => return Err(bad("unknown potential kind")),
    };
    push("potential", kind.into());
    if let Some(g) = potential.get("gamma") {
        push("gamma", F(g.as_f64().ok_or_else(|| bad("gamma"))?).to_string());
    }
    let t = &manifest.tolerances;
    for (flag, v) in [
        ("zero-tol", t.zero_tol),
        ("reality-tol", t.reality_tol),
        ("pairing-tol", t.pairing_tol),
        ("edge-fraction", t.edge_fraction),
        ("edge-threshold", t.edge_threshold),
        ("residual-tol", t.residual_tolerance),
    ] {
        push(flag, F(v).to_string());
    }
    match &manifest.grid {
        Grid::Point => {}
        Grid::Sweep { axis, start, stop, steps } => {
            push("axis", axis.to_string());
            push("from", F(*start).to_string());
            push("to", F(*stop).to_string());
            push("steps", steps.to_string());
        }
        Grid::PhaseMap { mu, gamma } => {
            push("mu", format!("{}:{}:{}", F(mu.start), F(mu.stop), mu.steps));
            push("gamma", format!("{}:{}:{}", F(gamma.start), F(gamma.stop), gamma.steps));
        }
        Grid::CriticalGamma { gamma_hi, scan_step, refine_tol } => {
            push("gamma-hi", F(*gamma_hi).to_string());
            push("scan-step", F(*scan_step).to_string());
            push("refine-tol", F(*refine_tol).to_string());
        }
    }
    push("workers", run.workers.unwrap_or(manifest.workers).to_string());
    push("out", run.out.display().to_string());
    match manifest.plot.as_deref() {
        None => {}
        Some("cells") => argv.push("--plot".into()),
        Some(part) => push("plot", part.into()),
    }
    Ok(argv)
}
