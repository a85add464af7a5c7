use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use richspaces::dwp::{self, LayoutParams, SelfDrivingAutomaton};
use richspaces::seed;

use crate::io;
use crate::voronoi::NetworkArgs;

#[derive(Debug, Args)]
pub struct DwpArgs {
    /// Automaton file; a random machine is generated when omitted.
    #[arg(long)]
    pub sda: Option<PathBuf>,
    /// States of the generated machine.
    #[arg(long, default_value_t = 8)]
    pub states: usize,
    /// Longest emission of the generated machine, in bits.
    #[arg(long, default_value_t = 3)]
    pub max_emission: usize,
    #[command(flatten)]
    pub network: NetworkArgs,
    /// Room proposals after the seed room.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    /// Output stem; writes STEM.ppm, STEM.layout.txt and STEM.sda.txt.
    #[arg(long, default_value = "dungeon")]
    pub out: PathBuf,
}

pub fn run(args: &DwpArgs, rng_seed: u64) -> Result<()> {
    let sda = match &args.sda {
        Some(path) => SelfDrivingAutomaton::from_text(&io::read(path)?)
            .with_context(|| format!("bad automaton file {}", path.display()))?,
        None => SelfDrivingAutomaton::random(
            args.states,
            args.max_emission,
            &mut seed::rng(seed::derive(rng_seed, "dwp-sda")),
        )?,
    };
    let (_, _, network) = args.network.build(6, seed::derive(rng_seed, "dwp-network"))?;
    let layout = dwp::layout_rooms(&sda, &network, args.budget, &LayoutParams::default())?;
    io::write_image(&io::with_suffix(&args.out, ".ppm"), &dwp::render_layout(&layout))?;
    io::write(&io::with_suffix(&args.out, ".layout.txt"), &layout.to_text())?;
    io::write(&io::with_suffix(&args.out, ".sda.txt"), &sda.to_text())?;
    println!(
        "rooms {} corridors {} bits {}",
        layout.rooms.len(),
        layout.corridors.len(),
        layout.bits_consumed
    );
    Ok(())
}
