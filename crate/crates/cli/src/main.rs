//! `richspaces` command-line front end.

mod apoptotic;
mod dwp;
mod fashion;
mod io;
mod polyomino;
mod voronoi;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

/// Seed used when neither `--seed` nor `RICHSPACES_SEED` is given.
const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "richspaces", version, about = "Generators over enriched search spaces")]
struct Cli {
    #[arg(long, global = true, env = "RICHSPACES_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weighted Voronoi street network.
    Voronoi(voronoi::VoronoiArgs),
    /// Apoptotic cellular automata.
    #[command(subcommand)]
    Apoptotic(apoptotic::ApoptoticCmd),
    /// Evolve against an ancestor rule on a large arena.
    Sp(apoptotic::SpArgs),
    /// Rooms laid onto a Voronoi network by a self-driving automaton.
    Dwp(dwp::DwpArgs),
    /// Fashion-based cavern automata.
    #[command(subcommand)]
    Fashion(fashion::FashionCmd),
    /// Polyomino number puzzles.
    #[command(subcommand)]
    Polyomino(polyomino::PolyominoCmd),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Voronoi(args) => voronoi::run(args, cli.seed),
        Command::Apoptotic(cmd) => apoptotic::run(cmd, cli.seed),
        Command::Sp(args) => apoptotic::run_sp(args, cli.seed),
        Command::Dwp(args) => dwp::run(args, cli.seed),
        Command::Fashion(cmd) => fashion::run(cmd, cli.seed),
        Command::Polyomino(cmd) => polyomino::run(cmd, cli.seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
