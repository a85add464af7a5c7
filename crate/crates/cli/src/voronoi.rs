use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use richspaces::geometry::{self, CenterMode, PathNetwork};
use richspaces::seed;

use crate::io::{self, Size};

/// Center layout and raster, shared by `voronoi` and `dwp`.
#[derive(Debug, Clone, Args)]
pub struct NetworkArgs {
    /// Uniform random centers.
    #[arg(long, value_name = "N", conflicts_with = "grid")]
    pub random: Option<usize>,
    /// K×K lattice of centers.
    #[arg(long, value_name = "K")]
    pub grid: Option<usize>,
    /// Random centers added to the lattice.
    #[arg(long, value_name = "M", requires = "grid")]
    pub extra: Option<usize>,
    #[arg(long, default_value = "201x201")]
    pub size: Size,
    /// Center weights are drawn from [1 - J, 1 + J].
    #[arg(long, default_value_t = 0.0, value_name = "J")]
    pub jitter: f64,
}

impl NetworkArgs {
    pub fn mode(&self, default_grid: usize) -> Result<CenterMode> {
        Ok(match (self.random, self.grid, self.extra) {
            (Some(n), None, None) => CenterMode::Random(n),
            (None, Some(k), None) => CenterMode::Grid(k),
            (None, Some(k), Some(m)) => CenterMode::GridPlusRandom(k, m),
            (None, None, None) => CenterMode::Grid(default_grid),
            _ => bail!("use either --random N or --grid K [--extra M]"),
        })
    }

    pub fn build(&self, default_grid: usize, rng_seed: u64) -> Result<(usize, geometry::TileGrid, PathNetwork)> {
        let centers = geometry::generate_centers::<f64>(
            self.mode(default_grid)?,
            self.size.width,
            self.size.height,
            self.jitter,
            rng_seed,
        )?;
        let tiles = geometry::rasterize(&centers, self.size.width, self.size.height)?;
        let network = geometry::extract_path_network(&tiles);
        Ok((centers.len(), tiles, network))
    }
}

#[derive(Debug, Args)]
pub struct VoronoiArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    /// Output stem; writes STEM.ppm and STEM.network.txt.
    #[arg(long, default_value = "voronoi")]
    pub out: PathBuf,
}

pub fn run(args: &VoronoiArgs, rng_seed: u64) -> Result<()> {
    let (centers, tiles, network) = args.network.build(9, seed::derive(rng_seed, "voronoi"))?;
    io::write_image(
        &io::with_suffix(&args.out, ".ppm"),
        &geometry::render_tiles(&tiles, &network),
    )?;
    io::write(&io::with_suffix(&args.out, ".network.txt"), &network.to_text())?;
    println!(
        "centers {centers} passable {} components {} connected {}",
        network.passable_count(),
        network.component_count(),
        network.is_connected()
    );
    Ok(())
}
