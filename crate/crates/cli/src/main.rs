mod cli;
mod output;
mod parse;
mod plot;
mod run;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use output::RunManifest;
use run::CliError;

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(a) => run::spectrum(&a),
        Command::EdgeState(a) => run::edge_state(&a),
        Command::Sweep(a) => run::sweep(&a),
        Command::PhaseMap(a) => run::phase_map(&a),
        Command::CriticalGamma(a) => run::critical(&a),
        Command::Replay(a) => {
            let manifest = RunManifest::read(&a.manifest)?;
            let argv = run::replay_argv(&manifest, &a.run)?;
            let replayed = Cli::try_parse_from(&argv).map_err(|e| CliError::Invalid(format!("manifest: {e}")))?;
            if matches!(replayed.command, Command::Replay(_)) {
                return Err(CliError::Invalid("manifest: cannot replay a replay".into()));
            }
            dispatch(replayed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}
