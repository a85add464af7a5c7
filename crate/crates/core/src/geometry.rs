//! Raster Voronoi tilings and the path networks formed by their tile boundaries.
//!
//! Weighting is multiplicative: a point belongs to the center minimising
//! `weight * euclidean_distance`, which bends tile sides into curves when the
//! weights differ. Everything here is brute force over the raster, which is
//! exact and fast enough at the sizes used for maps.

use std::collections::VecDeque;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::format;
use crate::image::{Image, Rgb};
use crate::scalar::Real;
use crate::seed;

/// A Voronoi site with a positive multiplicative weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TileCenter<T> {
    pub x: T,
    pub y: T,
    pub weight: T,
}

impl<T: Real> TileCenter<T> {
    pub fn new(x: T, y: T, weight: T) -> Self {
        Self { x, y, weight }
    }

    pub fn unweighted(x: T, y: T) -> Self {
        Self::new(x, y, T::one())
    }

    fn cost(&self, px: T, py: T) -> T {
        let dx = px - self.x;
        let dy = py - self.y;
        self.weight * (dx * dx + dy * dy).sqrt()
    }

    fn is_valid(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.weight.is_finite() && self.weight > T::zero()
    }
}

fn check_centers<T: Real>(centers: &[TileCenter<T>]) -> Result<()> {
    if centers.is_empty() {
        return Err(Error::NoCenters);
    }
    if let Some(i) = centers.iter().position(|c| !c.is_valid()) {
        return Err(invalid(format!(
            "center {i} needs finite coordinates and a positive weight"
        )));
    }
    Ok(())
}

/// Index of the center with the lowest weighted distance to `(px, py)`.
/// Ties go to the lowest index.
pub fn assign_tile<T: Real>(px: T, py: T, centers: &[TileCenter<T>]) -> Result<usize> {
    check_centers(centers)?;
    Ok(nearest(px, py, centers))
}

fn nearest<T: Real>(px: T, py: T, centers: &[TileCenter<T>]) -> usize {
    let mut best = 0;
    let mut best_cost = centers[0].cost(px, py);
    for (i, c) in centers.iter().enumerate().skip(1) {
        let cost = c.cost(px, py);
        if cost < best_cost {
            best = i;
            best_cost = cost;
        }
    }
    best
}

/// Raster form of a Voronoi diagram: each cell holds the index of its tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileGrid {
    width: usize,
    height: usize,
    cells: Vec<usize>,
}

impl TileGrid {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.cells[y * self.width + x]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn from_cells(width: usize, height: usize, cells: Vec<usize>) -> Result<Self> {
        if width == 0 || height == 0 || cells.len() != width * height {
            return Err(invalid("tile grid dimensions do not match cell count"));
        }
        Ok(Self { width, height, cells })
    }
}

/// Samples every cell at its center `(i + 0.5, j + 0.5)`. Rows are computed in
/// parallel; the result is identical to a sequential sweep.
pub fn rasterize<T: Real>(centers: &[TileCenter<T>], width: usize, height: usize) -> Result<TileGrid> {
    if width == 0 || height == 0 {
        return Err(invalid("raster dimensions must be positive"));
    }
    check_centers(centers)?;
    let half = T::of(0.5);
    let cells: Vec<usize> = (0..height)
        .into_par_iter()
        .flat_map_iter(|j| {
            let py = T::of(j as f64) + half;
            (0..width).map(move |i| nearest(T::of(i as f64) + half, py, centers))
        })
        .collect();
    Ok(TileGrid { width, height, cells })
}

/// Boundary cells of a tiling: passable where a 4-neighbour lies in another tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathNetwork {
    width: usize,
    height: usize,
    passable: Vec<bool>,
}

impl PathNetwork {
    pub fn new(width: usize, height: usize, passable: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || passable.len() != width * height {
            return Err(invalid("network dimensions do not match mask size"));
        }
        Ok(Self {
            width,
            height,
            passable,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_passable(&self, x: usize, y: usize) -> bool {
        self.passable[y * self.width + x]
    }

    pub fn mask(&self) -> &[bool] {
        &self.passable
    }

    pub fn passable_count(&self) -> usize {
        self.passable.iter().filter(|&&b| b).count()
    }

    /// Number of 4-connected components of passable cells.
    pub fn component_count(&self) -> usize {
        count_components(self.width, self.height, &self.passable)
    }

    /// True when the passable cells form a single 4-connected set (an empty set
    /// counts as connected).
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub fn to_text(&self) -> String {
        format::write_mask("network", self.width, self.height, &self.passable)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (w, h, cells) = format::parse_mask(text, "network")?;
        Self::new(w, h, cells)
    }

    pub fn render(&self) -> Image {
        let mut img = Image::new(self.width, self.height, Rgb::WHITE);
        for y in 0..self.height {
            for x in 0..self.width {
                if self.is_passable(x, y) {
                    img.set(x, y, Rgb(90, 90, 90));
                }
            }
        }
        img
    }
}

pub(crate) fn count_components(width: usize, height: usize, mask: &[bool]) -> usize {
    let mut seen = vec![false; mask.len()];
    let mut components = 0;
    let mut queue = VecDeque::new();
    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for n in neighbours4(c, width, height) {
                if mask[n] && !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
    }
    components
}

pub(crate) fn neighbours4(c: usize, width: usize, height: usize) -> impl Iterator<Item = usize> {
    let (x, y) = (c % width, c / width);
    let left = (x > 0).then(|| c - 1);
    let right = (x + 1 < width).then(|| c + 1);
    let up = (y > 0).then(|| c - width);
    let down = (y + 1 < height).then(|| c + width);
    [left, right, up, down].into_iter().flatten()
}

pub fn extract_path_network(grid: &TileGrid) -> PathNetwork {
    let (w, h) = (grid.width, grid.height);
    let passable = (0..w * h)
        .map(|c| neighbours4(c, w, h).any(|n| grid.cells[n] != grid.cells[c]))
        .collect();
    PathNetwork {
        width: w,
        height: h,
        passable,
    }
}

/// How tile centers are laid out over the raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterMode {
    /// `n` uniform random points.
    Random(usize),
    /// A `k`×`k` lattice inset by half a spacing.
    Grid(usize),
    /// The `k`×`k` lattice plus `m` random points.
    GridPlusRandom(usize, usize),
}

/// Places tile centers over a `width`×`height` raster.
///
/// Weights are 1 when `jitter` is zero, otherwise uniform in
/// `[1 - jitter, 1 + jitter]`. Lattice points come first, random points after.
pub fn generate_centers<T: Real>(
    mode: CenterMode,
    width: usize,
    height: usize,
    jitter: f64,
    rng_seed: u64,
) -> Result<Vec<TileCenter<T>>> {
    if width == 0 || height == 0 {
        return Err(invalid("raster dimensions must be positive"));
    }
    if !(0.0..1.0).contains(&jitter) {
        return Err(invalid("jitter must lie in [0, 1)"));
    }
    let (k, n) = match mode {
        CenterMode::Random(n) if n >= 1 => (0, n),
        CenterMode::Grid(k) if k >= 1 => (k, 0),
        CenterMode::GridPlusRandom(k, m) if k >= 1 && m >= 1 => (k, m),
        _ => return Err(invalid("center counts must be positive")),
    };
    let mut rng = seed::rng(rng_seed);
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(k * k + n);
    let (sx, sy) = (width as f64 / k.max(1) as f64, height as f64 / k.max(1) as f64);
    for j in 0..k {
        for i in 0..k {
            points.push(((i as f64 + 0.5) * sx, (j as f64 + 0.5) * sy));
        }
    }
    for _ in 0..n {
        let x = rng.random_range(0.0..width as f64);
        let y = rng.random_range(0.0..height as f64);
        points.push((x, y));
    }
    Ok(points
        .into_iter()
        .map(|(x, y)| {
            let w = if jitter > 0.0 {
                rng.random_range(1.0 - jitter..=1.0 + jitter)
            } else {
                1.0
            };
            TileCenter::new(T::of(x), T::of(y), T::of(w))
        })
        .collect())
}

/// Renders tiles in a repeating palette with the boundary network overlaid in
/// dark grey.
pub fn render_tiles(grid: &TileGrid, network: &PathNetwork) -> Image {
    const TILE_COLOURS: [Rgb; 6] = [
        Rgb(235, 224, 199),
        Rgb(214, 229, 206),
        Rgb(206, 220, 235),
        Rgb(235, 212, 212),
        Rgb(226, 214, 235),
        Rgb(240, 236, 200),
    ];
    let mut img = Image::new(grid.width, grid.height, Rgb::WHITE);
    for y in 0..grid.height {
        for x in 0..grid.width {
            let c = if network.is_passable(x, y) {
                Rgb(60, 60, 60)
            } else {
                TILE_COLOURS[grid.get(x, y) % TILE_COLOURS.len()]
            };
            img.set(x, y, c);
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn c(x: f64, y: f64, w: f64) -> TileCenter<f64> {
        TileCenter::new(x, y, w)
    }

    #[test]
    fn assign_tile_examples() {
        assert_eq!(assign_tile(5.0, 5.0, &[c(0.0, 0.0, 1.0)]).unwrap(), 0);
        let pair = [c(0.0, 0.0, 1.0), c(10.0, 0.0, 1.0)];
        assert_eq!(assign_tile(2.0, 0.0, &pair).unwrap(), 0);
        let weighted = [c(0.0, 0.0, 2.0), c(10.0, 0.0, 1.0)];
        assert_eq!(assign_tile(4.0, 0.0, &weighted).unwrap(), 1);
    }

    #[test]
    fn assign_tile_errors() {
        assert_eq!(assign_tile::<f64>(0.0, 0.0, &[]), Err(Error::NoCenters));
        assert!(assign_tile(0.0, 0.0, &[c(0.0, 0.0, 0.0)]).is_err());
        assert!(assign_tile(0.0, 0.0, &[c(f64::NAN, 0.0, 1.0)]).is_err());
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let pair = [c(0.0, 0.0, 1.0), c(10.0, 0.0, 1.0)];
        assert_eq!(assign_tile(5.0, 0.0, &pair).unwrap(), 0);
        let swapped = [pair[1], pair[0]];
        assert_eq!(assign_tile(5.0, 0.0, &swapped).unwrap(), 0);
    }

    #[test]
    fn single_center_raster() {
        let g = rasterize(&[c(0.0, 0.0, 1.0)], 2, 2).unwrap();
        assert_eq!(g.cells(), &[0, 0, 0, 0]);
        let net = extract_path_network(&g);
        assert_eq!(net.passable_count(), 0);
        assert!(net.is_connected());
    }

    #[test]
    fn two_tile_strip() {
        let g = rasterize(&[c(0.0, 0.0, 1.0), c(9.0, 0.0, 1.0)], 10, 1).unwrap();
        assert_eq!(g.cells(), &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        let net = extract_path_network(&g);
        let cols: Vec<usize> = (0..10).filter(|&x| net.is_passable(x, 0)).collect();
        assert_eq!(cols, vec![4, 5]);
    }

    #[test]
    fn rasterize_rejects_empty_raster() {
        assert!(rasterize(&[c(0.0, 0.0, 1.0)], 0, 3).is_err());
    }

    #[test]
    fn lattice_tiles_are_rectangles() {
        let centers: Vec<TileCenter<f64>> = generate_centers(CenterMode::Grid(9), 201, 201, 0.0, 0).unwrap();
        let g = rasterize(&centers, 201, 201).unwrap();
        // brute-force oracle: each tile's cells exactly fill their bounding box
        for t in 0..81 {
            let cells: Vec<(usize, usize)> = (0..201 * 201)
                .filter(|&i| g.cells()[i] == t)
                .map(|i| (i % 201, i / 201))
                .collect();
            let (x0, x1) = (
                cells.iter().map(|p| p.0).min().unwrap(),
                cells.iter().map(|p| p.0).max().unwrap(),
            );
            let (y0, y1) = (
                cells.iter().map(|p| p.1).min().unwrap(),
                cells.iter().map(|p| p.1).max().unwrap(),
            );
            assert_eq!(cells.len(), (x1 - x0 + 1) * (y1 - y0 + 1), "tile {t}");
        }
        assert!(extract_path_network(&g).is_connected());
    }

    #[test]
    fn center_counts() {
        let grid: Vec<TileCenter<f64>> = generate_centers(CenterMode::Grid(9), 201, 201, 0.1, 3).unwrap();
        assert_eq!(grid.len(), 81);
        let mixed: Vec<TileCenter<f64>> =
            generate_centers(CenterMode::GridPlusRandom(9, 19), 201, 201, 0.1, 3).unwrap();
        assert_eq!(mixed.len(), 100);
        assert_eq!(
            &mixed[..81].iter().map(|c| (c.x, c.y)).collect::<Vec<_>>(),
            &grid.iter().map(|c| (c.x, c.y)).collect::<Vec<_>>()
        );
        let random: Vec<TileCenter<f64>> = generate_centers(CenterMode::Random(100), 201, 201, 0.0, 3).unwrap();
        assert_eq!(random.len(), 100);
        assert!(random
            .iter()
            .all(|c| (0.0..201.0).contains(&c.x) && (0.0..201.0).contains(&c.y) && c.weight == 1.0));
        assert!(mixed.iter().all(|c| (0.9..=1.1).contains(&c.weight)));
    }

    #[test]
    fn nonpositive_counts_rejected() {
        for mode in [
            CenterMode::Random(0),
            CenterMode::Grid(0),
            CenterMode::GridPlusRandom(3, 0),
        ] {
            assert!(generate_centers::<f64>(mode, 10, 10, 0.0, 0).is_err());
        }
    }

    #[test]
    fn f32_and_f64_agree_on_lattice() {
        let a: Vec<TileCenter<f32>> = generate_centers(CenterMode::Grid(4), 40, 40, 0.0, 0).unwrap();
        let b: Vec<TileCenter<f64>> = generate_centers(CenterMode::Grid(4), 40, 40, 0.0, 0).unwrap();
        assert_eq!(rasterize(&a, 40, 40).unwrap(), rasterize(&b, 40, 40).unwrap());
    }

    /// Clipping a Voronoi diagram to the raster can split its edge graph: three
    /// collinear sites give two parallel boundaries that never meet.
    #[test]
    fn collinear_sites_give_disconnected_network() {
        let centers = [c(10.0, 20.0, 1.0), c(30.0, 20.0, 1.0), c(50.0, 20.0, 1.0)];
        let net = extract_path_network(&rasterize(&centers, 60, 40).unwrap());
        assert_eq!(net.component_count(), 2);
    }

    #[test]
    fn network_text_round_trip() {
        let g = rasterize(&[c(0.0, 0.0, 1.0), c(9.0, 0.0, 1.0)], 10, 3).unwrap();
        let net = extract_path_network(&g);
        assert_eq!(PathNetwork::from_text(&net.to_text()).unwrap(), net);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn scaling_weights_keeps_tiling(seed in any::<u64>(), n in 2usize..12, exp in -3i32..4) {
            let centers: Vec<TileCenter<f64>> =
                generate_centers(CenterMode::Random(n), 48, 40, 0.3, seed).unwrap();
            let scale = 2f64.powi(exp);
            let scaled: Vec<_> = centers.iter().map(|c| TileCenter::new(c.x, c.y, c.weight * scale)).collect();
            prop_assert_eq!(rasterize(&centers, 48, 40).unwrap(), rasterize(&scaled, 48, 40).unwrap());
        }

        #[test]
        fn rasterize_is_deterministic(seed in any::<u64>(), n in 1usize..20) {
            let centers: Vec<TileCenter<f64>> =
                generate_centers(CenterMode::Random(n), 37, 29, 0.1, seed).unwrap();
            let a = rasterize(&centers, 37, 29).unwrap();
            let b = rasterize(&centers, 37, 29).unwrap();
            prop_assert_eq!(extract_path_network(&a), extract_path_network(&b));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn rasterize_matches_per_cell_assignment(seed in any::<u64>(), n in 1usize..10) {
            let centers: Vec<TileCenter<f64>> =
                generate_centers(CenterMode::Random(n), 17, 13, 0.2, seed).unwrap();
            let g = rasterize(&centers, 17, 13).unwrap();
            for j in 0..13 {
                for i in 0..17 {
                    prop_assert_eq!(g.get(i, j), assign_tile(i as f64 + 0.5, j as f64 + 0.5, &centers).unwrap());
                }
            }
        }

        /// Equal-weight sites perturbed around a lattice keep every Voronoi
        /// vertex inside the raster, so the boundary network stays connected.
        #[test]
        fn perturbed_lattice_network_is_connected(seed in any::<u64>(), k in 2usize..9) {
            let size = 160;
            let spacing = size as f64 / k as f64;
            let mut rng = crate::seed::rng(seed);
            let centers: Vec<TileCenter<f64>> = (0..k * k)
                .map(|idx| {
                    let (i, j) = ((idx % k) as f64, (idx / k) as f64);
                    let dx = rng.random_range(-0.2..0.2) * spacing;
                    let dy = rng.random_range(-0.2..0.2) * spacing;
                    TileCenter::unweighted((i + 0.5) * spacing + dx, (j + 0.5) * spacing + dy)
                })
                .collect();
            let net = extract_path_network(&rasterize(&centers, size, size).unwrap());
            prop_assert!(net.is_connected());
        }
    }
}
