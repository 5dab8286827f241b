//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptchain::Tolerances;

use crate::parse::{self, Range};

#[derive(Debug, Parser)]
#[command(
    name = "ptchain",
    version,
    about = "PT-symmetric SSH and Kitaev chains: spectra, edge states, sweeps and phase maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full spectrum with reality and edge classification (spectrum.csv)
    Spectrum(PointArgs),
    /// Occupation profile of the edge state closest to zero energy (profile.csv)
    EdgeState(PointArgs),
    /// Spectrum along theta, mu or gamma (sweep.csv)
    Sweep(SweepArgs),
    /// Kitaev zero-mode count on a (mu, gamma) grid (phasemap.csv)
    PhaseMap(PhaseMapArgs),
    /// Smallest gamma without any real eigenvalue (critical_gamma.json)
    CriticalGamma(CriticalGammaArgs),
    /// Re-run the command recorded in a manifest.json
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Ssh,
    Kitaev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialChoice {
    None,
    /// +i gamma on the first site, -i gamma on the last
    U1,
    /// i gamma (-1)^n, loss on site 1
    U2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisChoice {
    Theta,
    Mu,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotPart {
    Re,
    Im,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelChoice,
    /// Number of lattice sites
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Hopping amplitude
    #[arg(long, default_value_t = 1.0, value_parser = parse::number, allow_hyphen_values = true)]
    pub t: f64,
    /// SSH dimerization strength [default: 0.3]
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// SSH dimerization angle, e.g. 0.1pi [default: 0]
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Kitaev p-wave pairing amplitude [default: 1]
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub pairing: Option<f64>,
    /// Imaginary on-site potential
    #[arg(long, value_enum, default_value = "none")]
    pub potential: PotentialChoice,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    /// |E| below which an eigenvalue counts as a zero mode
    #[arg(long, default_value_t = Tolerances::default().zero_tol)]
    pub zero_tol: f64,
    /// |Im E| below which an eigenvalue counts as real
    #[arg(long, default_value_t = Tolerances::default().reality_tol)]
    pub reality_tol: f64,
    /// Largest allowed distance between an eigenvalue and its conjugate partner
    #[arg(long, default_value_t = Tolerances::default().pairing_tol)]
    pub pairing_tol: f64,
    /// Fraction of sites at each end counted as edge
    #[arg(long, default_value_t = Tolerances::default().edge_fraction)]
    pub edge_fraction: f64,
    /// Edge weight above which a state is an edge state
    #[arg(long, default_value_t = Tolerances::default().edge_threshold)]
    pub edge_threshold: f64,
    /// Bound on max ||M v - E v|| / ||M||_inf
    #[arg(long, default_value_t = Tolerances::default().residual_tolerance)]
    pub residual_tol: f64,
}

impl ToleranceArgs {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            zero_tol: self.zero_tol,
            reality_tol: self.reality_tol,
            pairing_tol: self.pairing_tol,
            edge_fraction: self.edge_fraction,
            edge_threshold: self.edge_threshold,
            residual_tolerance: self.residual_tol,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads for scans (0 = one per core)
    #[arg(long, env = "PTCHAIN_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Kitaev chemical potential [default: 0]
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Gain/loss strength [default: 0]
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Kitaev chemical potential when not swept [default: 0]
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Gain/loss strength when not swept [default: 0]
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum)]
    pub axis: AxisChoice,
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub to: f64,
    /// Number of points, endpoints included
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Also write sweep.svg with the real or imaginary parts
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "im")]
    pub plot: Option<PlotPart>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseMapArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Chemical potential grid, start:stop:steps
    #[arg(long, value_parser = parse::range, allow_hyphen_values = true)]
    pub mu: Range,
    /// Gain/loss grid, start:stop:steps
    #[arg(long, value_parser = parse::range, allow_hyphen_values = true)]
    pub gamma: Range,
    /// Also write phasemap.svg
    #[arg(long)]
    pub plot: bool,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CriticalGammaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Kitaev chemical potential [default: 0]
    #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Upper end of the gamma scan
    #[arg(long, default_value_t = 2.0, value_parser = parse::number)]
    pub gamma_hi: f64,
    /// Coarse scan spacing
    #[arg(long, default_value_t = 0.01, value_parser = parse::number)]
    pub scan_step: f64,
    /// Width of the final bisection bracket
    #[arg(long, default_value_t = 1e-7, value_parser = parse::number)]
    pub refine_tol: f64,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// manifest.json written by an earlier run
    pub manifest: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}
