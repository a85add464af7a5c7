use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use richspaces::ca1d::{self, ApoptoticRule, Arena};
use richspaces::evolve::apoptotic::{self as rules, LARGE_ARENA};
use richspaces::evolve::{trace_csv, EvolutionConfig, EvolutionResult};
use richspaces::seed;

use crate::io::{self, Size};

#[derive(Debug, Subcommand)]
pub enum ApoptoticCmd {
    /// Evolve a rule and render its time history.
    Evolve(EvolveArgs),
    /// Render a given rule.
    Render(RenderArgs),
    /// Compare fitness along transects between two rules with random rules.
    Transect(TransectArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    #[arg(long, default_value_t = 100)]
    pub population: usize,
    #[arg(long, default_value_t = 200)]
    pub generations: usize,
    #[arg(long, default_value_t = 3)]
    pub tournament: usize,
    /// Point mutations per child.
    #[arg(long, default_value_t = 5)]
    pub mutations: usize,
}

impl EngineArgs {
    fn config(&self, rng_seed: u64) -> EvolutionConfig {
        EvolutionConfig {
            tournament_size: self.tournament,
            mutation_count: self.mutations,
            ..rules::rule_config(self.population, self.generations, rng_seed)
        }
    }
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, default_value = "201x201")]
    pub arena: Size,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Output stem; writes STEM.rule.txt, STEM.ppm and STEM.trace.csv.
    #[arg(long, default_value = "apoptotic")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Rule file, or 36 integers separated by spaces or commas.
    #[arg(long)]
    pub rule: String,
    #[arg(long, default_value = "201x201")]
    pub arena: Size,
    #[arg(long, default_value_t = 1)]
    pub seed_state: u8,
    #[arg(long, default_value = "rule.ppm")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TransectArgs {
    /// First endpoint rule; evolved when omitted.
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Second endpoint rule; evolved when omitted.
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub transects: usize,
    #[arg(long, default_value_t = 2000)]
    pub random: usize,
    #[arg(long, default_value = "101x101")]
    pub arena: Size,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Report file; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpArgs {
    /// Ancestor rule file. It is read once and never written.
    #[arg(long)]
    pub ancestor: PathBuf,
    #[arg(long, default_value_t = Size { width: LARGE_ARENA, height: LARGE_ARENA })]
    pub arena: Size,
    /// Probability that a breeding event crosses each winner with the ancestor.
    #[arg(long, default_value_t = EvolutionConfig::DEFAULT_SINGLE_PARENT_RATE)]
    pub rate: f64,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Output stem; writes STEM.rule.txt, STEM.ppm and STEM.trace.csv.
    #[arg(long, default_value = "sp")]
    pub out: PathBuf,
}

fn arena(size: Size) -> Result<Arena> {
    Ok(Arena::new(size.width, size.height)?)
}

pub fn read_rule(path: &Path) -> Result<ApoptoticRule> {
    io::read(path)?
        .parse()
        .with_context(|| format!("bad rule file {}", path.display()))
}

fn parse_rule_arg(arg: &str) -> Result<ApoptoticRule> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_rule(path);
    }
    arg.parse().context("--rule is neither a readable file nor 36 integers")
}

fn write_result(out: &Path, result: &EvolutionResult<u8>, arena: Arena) -> Result<ApoptoticRule> {
    let rule = rules::gene_rule(&result.best)?;
    let history = ca1d::simulate(&rule, arena, 1)?;
    io::write(&io::with_suffix(out, ".rule.txt"), &rule.to_text())?;
    io::write_image(&io::with_suffix(out, ".ppm"), &ca1d::render_default(&history))?;
    io::write(&io::with_suffix(out, ".trace.csv"), &trace_csv(&result.trace))?;
    Ok(rule)
}

pub fn run(cmd: &ApoptoticCmd, rng_seed: u64) -> Result<()> {
    match cmd {
        ApoptoticCmd::Evolve(args) => {
            let arena = arena(args.arena)?;
            let cfg = args.engine.config(seed::derive(rng_seed, "apoptotic-evolve"));
            let result = rules::evolve_rules(&cfg, arena, &[])?;
            let rule = write_result(&args.out, &result, arena)?;
            println!("fitness {} rule {rule}", result.best_fitness);
        }
        ApoptoticCmd::Render(args) => {
            let rule = parse_rule_arg(&args.rule)?;
            let arena = arena(args.arena)?;
            let history = ca1d::simulate(&rule, arena, args.seed_state)?;
            io::write_image(&args.out, &ca1d::render_default(&history))?;
            println!("fitness {}", history.fitness());
        }
        ApoptoticCmd::Transect(args) => {
            let arena = arena(args.arena)?;
            let endpoint = |path: &Option<PathBuf>, label: &str| -> Result<ApoptoticRule> {
                match path {
                    Some(p) => read_rule(p),
                    None => {
                        let cfg = args.engine.config(seed::derive(rng_seed, label));
                        Ok(rules::gene_rule(&rules::evolve_rules(&cfg, arena, &[])?.best)?)
                    }
                }
            };
            let a = endpoint(&args.a, "transect-endpoint-a")?;
            let b = endpoint(&args.b, "transect-endpoint-b")?;
            let report = rules::transect_enrichment(
                &a,
                &b,
                args.transects,
                args.random,
                arena,
                seed::derive(rng_seed, "transect"),
            )?;
            match &args.out {
                Some(path) => {
                    io::write(path, &report.to_text())?;
                    println!("ratio {}", report.ratio);
                }
                None => print!("{}", report.to_text()),
            }
        }
    }
    Ok(())
}

pub fn run_sp(args: &SpArgs, rng_seed: u64) -> Result<()> {
    let ancestor = read_rule(&args.ancestor)?;
    let arena = arena(args.arena)?;
    let cfg = EvolutionConfig {
        single_parent_rate: args.rate,
        ..args.engine.config(seed::derive(rng_seed, "single-parent"))
    };
    let result = rules::single_parent_run(&cfg, arena, &ancestor, |_| {})?;
    let rule = write_result(&args.out, &result, arena)?;
    println!("fitness {} rule {rule}", result.best_fitness);
    Ok(())
}
