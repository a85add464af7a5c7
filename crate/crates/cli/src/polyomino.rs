use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use rand::Rng;
use richspaces::polyomino::{self, Certificate, Puzzle, Symmetry};
use richspaces::seed;

use crate::io;

#[derive(Debug, Subcommand)]
pub enum PolyominoCmd {
    /// Build a random puzzle whose best solution uses every piece.
    Construct(ConstructArgs),
    /// Print the optimal score of a puzzle.
    Solve(SolveArgs),
    /// Write equally scoring variants of a constructed puzzle.
    Neutral(NeutralArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, default_value_t = 3)]
    pub rows: usize,
    #[arg(long, default_value_t = 4)]
    pub cols: usize,
    /// Number of pieces cut from the board.
    #[arg(long, default_value_t = 4)]
    pub pieces: usize,
    /// Allow rotated and reflected placements.
    #[arg(long)]
    pub free: bool,
    #[arg(long, default_value_t = 1)]
    pub min: u64,
    #[arg(long, default_value_t = 9)]
    pub max: u64,
    #[arg(long, default_value = "puzzle.txt")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub puzzle: PathBuf,
}

#[derive(Debug, Args)]
pub struct NeutralArgs {
    /// Puzzle file with a certificate, as written by `construct`.
    pub puzzle: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    /// Output stem; writes STEM-1.txt through STEM-COUNT.txt.
    #[arg(long, default_value = "neutral")]
    pub out: PathBuf,
}

fn read_puzzle(path: &Path) -> Result<(Puzzle, Option<Certificate>)> {
    polyomino::certified_from_text(&io::read(path)?).with_context(|| format!("bad puzzle file {}", path.display()))
}

pub fn run(cmd: &PolyominoCmd, rng_seed: u64) -> Result<()> {
    match cmd {
        PolyominoCmd::Construct(args) => {
            io::ensure(args.min >= 1 && args.min <= args.max, "need 1 <= --min <= --max")?;
            let mut rng = seed::rng(seed::derive(rng_seed, "polyomino-instance"));
            let pieces = polyomino::random_pieces(args.rows, args.cols, args.pieces, &mut rng)?;
            let numbers: Vec<u64> = (0..args.rows * args.cols)
                .map(|_| rng.random_range(args.min..=args.max))
                .collect();
            let symmetry = if args.free { Symmetry::Free } else { Symmetry::Fixed };
            let (puzzle, cert) = polyomino::construct_rich_puzzle(
                args.rows,
                args.cols,
                &pieces,
                &numbers,
                symmetry,
                seed::derive(rng_seed, "polyomino-tiling"),
            )?;
            io::write(&args.out, &polyomino::certified_to_text(&puzzle, &cert))?;
            println!("score {}", cert.score);
        }
        PolyominoCmd::Solve(args) => {
            let (puzzle, _) = read_puzzle(&args.puzzle)?;
            println!("{}", polyomino::solve(&puzzle)?.score);
        }
        PolyominoCmd::Neutral(args) => {
            let (puzzle, cert) = read_puzzle(&args.puzzle)?;
            let cert = cert.context("puzzle file has no certificate")?;
            let retiled = polyomino::neutral_retile(&puzzle, &cert)?;
            let mut rng = seed::rng(seed::derive(rng_seed, "polyomino-neutral"));
            for i in 1..=args.count {
                let (p, c) = &retiled[rng.random_range(0..retiled.len())];
                let (p, c) = polyomino::neutral_permute(p, c, rng.random())?;
                let path = io::with_suffix(&args.out, &format!("-{i}.txt"));
                io::write(&path, &polyomino::certified_to_text(&p, &c))?;
                println!("{} score {}", path.display(), c.score);
            }
        }
    }
    Ok(())
}
