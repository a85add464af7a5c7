use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use richspaces::evolve::{trace_csv, EvolutionConfig};
use richspaces::fashionca::{self, FloorBounds, MapParams};
use richspaces::{format, seed, CompetitionMatrixF64};

use crate::io::{self, Size};

#[derive(Debug, Subcommand)]
pub enum FashionCmd {
    /// Evolve two matrices whose whole blend segment yields good maps.
    Coevolve(CoevolveArgs),
    /// Blend two matrices across the image, left to right.
    Morph(MorphArgs),
    /// Generate one cavern map.
    Map(MapArgs),
}

#[derive(Debug, Args)]
pub struct CoevolveArgs {
    #[arg(long, default_value_t = 4)]
    pub states: usize,
    #[arg(long, default_value = "32x32")]
    pub size: Size,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Evenly spaced blend weights from 0 to 1.
    #[arg(long, default_value_t = 11)]
    pub t_samples: usize,
    #[arg(long, default_value_t = 100)]
    pub population: usize,
    #[arg(long, default_value_t = 200)]
    pub generations: usize,
    #[arg(long, default_value_t = 7)]
    pub tournament: usize,
    #[arg(long, default_value_t = 1)]
    pub mutations: usize,
    /// Standard deviation of the Gaussian mutation.
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    /// Output stem; writes STEM.a.txt, STEM.b.txt, STEM.report.txt and STEM.trace.csv.
    #[arg(long, default_value = "coevolve")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MorphArgs {
    /// Matrix used at the left edge.
    #[arg(long)]
    pub a: PathBuf,
    /// Matrix used at the right edge.
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, default_value = "200x100")]
    pub size: Size,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, default_value = "morph.ppm")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Matrix file; a random matrix is generated when omitted.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// States of the generated matrix.
    #[arg(long, default_value_t = 4)]
    pub states: usize,
    #[arg(long, default_value = "64x64")]
    pub size: Size,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Output stem; writes STEM.ppm and STEM.mask.txt.
    #[arg(long, default_value = "cavern")]
    pub out: PathBuf,
}

fn read_matrix(path: &Path) -> Result<CompetitionMatrixF64> {
    CompetitionMatrixF64::from_text(&io::read(path)?).with_context(|| format!("bad matrix file {}", path.display()))
}

pub fn run(cmd: &FashionCmd, rng_seed: u64) -> Result<()> {
    match cmd {
        FashionCmd::Coevolve(args) => {
            io::ensure(args.t_samples >= 1, "--t-samples must be at least 1")?;
            let params = MapParams {
                n_states: args.states,
                width: args.size.width,
                height: args.size.height,
                steps: args.steps,
                bounds: FloorBounds::default(),
                map_seed: seed::derive(rng_seed, "fashion-coevolve-map"),
            };
            let cfg = EvolutionConfig {
                population_size: args.population,
                generations: args.generations,
                tournament_size: args.tournament,
                mutation_count: args.mutations,
                single_parent_rate: 0.0,
                rng_seed: seed::derive(rng_seed, "fashion-coevolve"),
            };
            let ts = fashionca::t_grid(args.t_samples - 1);
            let pair = fashionca::coevolve_pair::<f64>(&cfg, &params, &ts, args.sigma)?;
            let mut report = format::header("coevolve");
            let _ = writeln!(report, "min_fitness {}", pair.min_fitness);
            for (t, f) in &pair.per_t {
                let _ = writeln!(report, "t {t} fitness {f}");
            }
            io::write(&io::with_suffix(&args.out, ".a.txt"), &pair.a.to_text())?;
            io::write(&io::with_suffix(&args.out, ".b.txt"), &pair.b.to_text())?;
            io::write(&io::with_suffix(&args.out, ".report.txt"), &report)?;
            io::write(&io::with_suffix(&args.out, ".trace.csv"), &trace_csv(&pair.trace))?;
            println!("min_fitness {}", pair.min_fitness);
        }
        FashionCmd::Morph(args) => {
            let a = read_matrix(&args.a)?;
            let b = read_matrix(&args.b)?;
            let img = fashionca::render_morph(
                &a,
                &b,
                args.size.width,
                args.size.height,
                args.steps,
                seed::derive(rng_seed, "fashion-grid"),
            )?;
            io::write_image(&args.out, &img)?;
        }
        FashionCmd::Map(args) => {
            let m = match &args.matrix {
                Some(path) => read_matrix(path)?,
                None => {
                    CompetitionMatrixF64::random(args.states, &mut seed::rng(seed::derive(rng_seed, "fashion-matrix")))?
                }
            };
            let map = fashionca::generate_map(
                &m,
                args.size.width,
                args.size.height,
                args.steps,
                seed::derive(rng_seed, "fashion-grid"),
            )?;
            io::write_image(&io::with_suffix(&args.out, ".ppm"), &map.render())?;
            io::write(&io::with_suffix(&args.out, ".mask.txt"), &map.to_text())?;
            println!(
                "floor {} largest {} fitness {}",
                map.floor_fraction(),
                map.largest_component(),
                fashionca::map_fitness(&map, FloorBounds::default())
            );
        }
    }
    Ok(())
}
