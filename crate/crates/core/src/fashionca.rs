//! Fashion-based cellular automata for cavern maps.
//!
//! A rule is an N×N competition matrix: `score(a, b)` is what a cell in state
//! `a` earns against a neighbour in state `b`. Each update, every cell sums its
//! scores against its eight Moore neighbours on a torus, then adopts the state
//! of the highest-scoring cell in its closed neighbourhood (itself included).
//!
//! Matrices are closed under weighted averaging, so a pair of matrices spans a
//! segment of rules. [`coevolve_pair`] searches for pairs whose whole segment
//! yields good caverns and [`render_morph`] sweeps the segment across an image.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::evolve::{evolve, EvolutionConfig, Gene, RealSpace};
use crate::format::{self, parse_err, parse_num};
use crate::geometry::{count_components, neighbours4};
use crate::image::{Image, Rgb};
use crate::scalar::Real;
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct CompetitionMatrix<T> {
    n: usize,
    scores: Vec<T>,
}

impl<T: Real> CompetitionMatrix<T> {
    /// `scores` in row-major order, `n * n` entries.
    pub fn new(n: usize, scores: Vec<T>) -> Result<Self> {
        if n < 2 {
            return Err(invalid("competition matrices need at least 2 states"));
        }
        if scores.len() != n * n {
            return Err(Error::SizeMismatch(scores.len(), n * n));
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(invalid("scores must be finite"));
        }
        Ok(Self { n, scores })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![T::zero(); n * n])
    }

    /// Entries uniform in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let scores = (0..n * n).map(|_| T::of(rng.random_range(-1.0..1.0))).collect();
        Self::new(n, scores)
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    pub fn score(&self, a: usize, b: usize) -> T {
        self.scores[a * self.n + b]
    }

    pub fn scores(&self) -> &[T] {
        &self.scores
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            n: self.n,
            scores: self.scores.iter().map(|&s| s * c).collect(),
        }
    }

    /// `N` on the first line, then one row of the matrix per line.
    pub fn to_text(&self) -> String {
        let mut s = format::header("matrix");
        let _ = writeln!(s, "{}", self.n);
        for row in self.scores.chunks(self.n) {
            let parts: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            let _ = writeln!(s, "{}", parts.join(" "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let lines = format::content_lines(text, "matrix")?;
        let mut toks = lines
            .iter()
            .flat_map(|&(n, l)| l.split_whitespace().map(move |t| (n, t)));
        let (ln, first) = toks.next().ok_or_else(|| parse_err(0, "empty matrix"))?;
        let n: usize = parse_num(ln, first)?;
        let scores = toks
            .map(|(ln, t)| parse_num::<f64>(ln, t).map(T::of))
            .collect::<Result<Vec<T>>>()?;
        Self::new(n, scores).map_err(|e| parse_err(ln, e.to_string()))
    }
}

/// Entrywise `(1 - t) * a + t * b`; the endpoints return exact copies.
pub fn weighted_average<T: Real>(
    a: &CompetitionMatrix<T>,
    b: &CompetitionMatrix<T>,
    t: T,
) -> Result<CompetitionMatrix<T>> {
    if a.n != b.n {
        return Err(Error::SizeMismatch(a.n, b.n));
    }
    if !(t >= T::zero() && t <= T::one()) {
        return Err(invalid("weight must lie in [0, 1]"));
    }
    if t == T::zero() {
        return Ok(a.clone());
    }
    if t == T::one() {
        return Ok(b.clone());
    }
    let s = T::one() - t;
    Ok(CompetitionMatrix {
        n: a.n,
        scores: a.scores.iter().zip(&b.scores).map(|(&x, &y)| s * x + t * y).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGrid {
    width: usize,
    height: usize,
    states: Vec<u8>,
}

impl StateGrid {
    pub fn new(width: usize, height: usize, states: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || states.len() != width * height {
            return Err(invalid("grid dimensions do not match state count"));
        }
        Ok(Self { width, height, states })
    }

    pub fn uniform(width: usize, height: usize, state: u8) -> Result<Self> {
        Self::new(width, height, vec![state; width * height])
    }

    pub fn random<R: Rng + ?Sized>(width: usize, height: usize, n_states: usize, rng: &mut R) -> Result<Self> {
        if n_states == 0 || n_states > 256 {
            return Err(invalid("state count must lie in 1..=256"));
        }
        let states = (0..width * height)
            .map(|_| rng.random_range(0..n_states) as u8)
            .collect();
        Self::new(width, height, states)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.states[y * self.width + x]
    }

    pub fn states(&self) -> &[u8] {
        &self.states
    }

    fn max_state(&self) -> usize {
        self.states.iter().copied().max().unwrap_or(0) as usize
    }

    /// Toroidal Moore neighbourhood of a cell, excluding the cell.
    fn moore(&self, x: usize, y: usize) -> [usize; 8] {
        let (w, h) = (self.width, self.height);
        let (xl, xr) = ((x + w - 1) % w, (x + 1) % w);
        let (yu, yd) = ((y + h - 1) % h, (y + 1) % h);
        [
            yu * w + xl,
            yu * w + x,
            yu * w + xr,
            y * w + xl,
            y * w + xr,
            yd * w + xl,
            yd * w + x,
            yd * w + xr,
        ]
    }
}

fn check_states(grid: &StateGrid, n: usize) -> Result<()> {
    let m = grid.max_state();
    if m >= n {
        return Err(Error::StateOutOfRange { state: m, limit: n });
    }
    Ok(())
}

/// One synchronous update with a per-column matrix. Ties go to the candidate
/// with the smallest row-major index.
fn update_by_column<T: Real>(grid: &StateGrid, matrix_for_column: &[&CompetitionMatrix<T>]) -> StateGrid {
    let (w, h) = (grid.width, grid.height);
    let scores: Vec<T> = (0..w * h)
        .map(|c| {
            let (x, y) = (c % w, c / w);
            let m = matrix_for_column[x];
            let s = grid.states[c] as usize;
            grid.moore(x, y)
                .iter()
                .fold(T::zero(), |acc, &nb| acc + m.score(s, grid.states[nb] as usize))
        })
        .collect();
    let states = (0..w * h)
        .map(|c| {
            let (x, y) = (c % w, c / w);
            let mut best = c;
            for nb in grid.moore(x, y) {
                if scores[nb] > scores[best] || (scores[nb] == scores[best] && nb < best) {
                    best = nb;
                }
            }
            grid.states[best]
        })
        .collect();
    StateGrid {
        width: w,
        height: h,
        states,
    }
}

pub fn update<T: Real>(grid: &StateGrid, m: &CompetitionMatrix<T>) -> Result<StateGrid> {
    check_states(grid, m.n)?;
    Ok(update_by_column(grid, &vec![m; grid.width]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CavernMap {
    pub passable: Vec<bool>,
    pub source: StateGrid,
}

impl CavernMap {
    /// State 0 is floor; every other state is rock.
    pub fn from_grid(source: StateGrid) -> Self {
        let passable = source.states.iter().map(|&s| s == 0).collect();
        Self { passable, source }
    }

    pub fn width(&self) -> usize {
        self.source.width
    }

    pub fn height(&self) -> usize {
        self.source.height
    }

    pub fn floor_cells(&self) -> usize {
        self.passable.iter().filter(|&&p| p).count()
    }

    pub fn floor_fraction(&self) -> f64 {
        self.floor_cells() as f64 / self.passable.len() as f64
    }

    /// Size of the largest 4-connected floor region (no wrap-around).
    pub fn largest_component(&self) -> usize {
        largest_component(self.width(), self.height(), &self.passable)
    }

    pub fn component_count(&self) -> usize {
        count_components(self.width(), self.height(), &self.passable)
    }

    pub fn to_text(&self) -> String {
        format::write_mask("mask", self.width(), self.height(), &self.passable)
    }

    pub fn render(&self) -> Image {
        let mut img = Image::new(self.width(), self.height(), Rgb(60, 50, 45));
        for (i, &p) in self.passable.iter().enumerate() {
            if p {
                img.set(i % self.width(), i / self.width(), Rgb(235, 225, 200));
            }
        }
        img
    }
}

fn largest_component(width: usize, height: usize, mask: &[bool]) -> usize {
    let mut seen = vec![false; mask.len()];
    let mut best = 0;
    let mut stack = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut size = 0;
        while let Some(c) = stack.pop() {
            size += 1;
            for n in neighbours4(c, width, height) {
                if mask[n] && !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        best = best.max(size);
    }
    best
}

pub fn run<T: Real>(grid: StateGrid, m: &CompetitionMatrix<T>, steps: usize) -> Result<StateGrid> {
    check_states(&grid, m.n)?;
    let cols = vec![m; grid.width];
    Ok((0..steps).fold(grid, |g, _| update_by_column(&g, &cols)))
}

/// Uniform random initial states from `rng_seed`, `steps` updates, floor where
/// the state is 0.
pub fn generate_map<T: Real>(
    m: &CompetitionMatrix<T>,
    width: usize,
    height: usize,
    steps: usize,
    rng_seed: u64,
) -> Result<CavernMap> {
    let init = StateGrid::random(width, height, m.n, &mut seed::rng(rng_seed))?;
    Ok(CavernMap::from_grid(run(init, m, steps)?))
}

/// Closed interval of acceptable floor fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloorBounds {
    pub low: f64,
    pub high: f64,
}

impl Default for FloorBounds {
    fn default() -> Self {
        Self { low: 0.3, high: 0.7 }
    }
}

/// Zero when the floor fraction falls outside `bounds`; otherwise the size of
/// the largest connected floor region.
pub fn map_fitness(map: &CavernMap, bounds: FloorBounds) -> f64 {
    let fraction = map.floor_fraction();
    if fraction < bounds.low || fraction > bounds.high {
        return 0.0;
    }
    map.largest_component() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapParams {
    pub n_states: usize,
    pub width: usize,
    pub height: usize,
    pub steps: usize,
    pub bounds: FloorBounds,
    /// Seed of the initial random grid; shared by every evaluation so fitness
    /// is a function of the matrices alone.
    pub map_seed: u64,
}

impl Default for MapParams {
    fn default() -> Self {
        Self {
            n_states: 4,
            width: 32,
            height: 32,
            steps: 10,
            bounds: FloorBounds::default(),
            map_seed: 0,
        }
    }
}

/// `steps + 1` evenly spaced weights from 0 to 1.
pub fn t_grid(steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![0.0];
    }
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

pub fn single_fitness<T: Real>(m: &CompetitionMatrix<T>, params: &MapParams) -> f64 {
    generate_map(m, params.width, params.height, params.steps, params.map_seed)
        .map_or(0.0, |map| map_fitness(&map, params.bounds))
}

/// Minimum map fitness over the sampled points of the segment from `a` to `b`.
pub fn segment_fitness<T: Real>(
    a: &CompetitionMatrix<T>,
    b: &CompetitionMatrix<T>,
    params: &MapParams,
    t_samples: &[f64],
) -> Result<f64> {
    if t_samples.is_empty() {
        return Err(invalid("t_samples must not be empty"));
    }
    let mut worst = f64::INFINITY;
    for &t in t_samples {
        let m = weighted_average(a, b, T::of(t))?;
        worst = worst.min(single_fitness(&m, params));
        if worst == 0.0 {
            break;
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct CoevolvedPair<T> {
    pub a: CompetitionMatrix<T>,
    pub b: CompetitionMatrix<T>,
    /// Minimum map fitness over the sampled weights.
    pub min_fitness: f64,
    /// Map fitness at each sampled weight.
    pub per_t: Vec<(f64, f64)>,
    pub trace: Vec<crate::evolve::TraceRow>,
}

fn split_gene<T: Real>(g: &Gene<T>, n: usize) -> Result<(CompetitionMatrix<T>, CompetitionMatrix<T>)> {
    let v = g.values();
    Ok((
        CompetitionMatrix::new(n, v[..n * n].to_vec())?,
        CompetitionMatrix::new(n, v[n * n..].to_vec())?,
    ))
}

/// Evolves a pair of matrices, as one gene of `2 N²` reals with Gaussian
/// mutation, to maximise the worst map fitness over `t_samples`.
pub fn coevolve_pair<T: Real>(
    config: &EvolutionConfig,
    params: &MapParams,
    t_samples: &[f64],
    sigma: f64,
) -> Result<CoevolvedPair<T>> {
    if t_samples.is_empty() {
        return Err(invalid("t_samples must not be empty"));
    }
    if t_samples.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(invalid("t_samples must lie in [0, 1]"));
    }
    let n = params.n_states;
    CompetitionMatrix::<T>::zeros(n)?;
    let space = RealSpace::new(2 * n * n, T::of(-1.0), T::of(1.0), T::of(sigma))?;
    let fitness = |g: &Gene<T>| match split_gene(g, n) {
        Ok((a, b)) => segment_fitness(&a, &b, params, t_samples).unwrap_or(0.0),
        Err(_) => 0.0,
    };
    let result = evolve(config, &space, fitness, &[])?;
    let (a, b) = split_gene(&result.best, n)?;
    let per_t = t_samples
        .iter()
        .map(|&t| Ok((t, single_fitness(&weighted_average(&a, &b, T::of(t))?, params))))
        .collect::<Result<Vec<_>>>()?;
    let min_fitness = per_t.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok(CoevolvedPair {
        a,
        b,
        min_fitness,
        per_t,
        trace: result.trace,
    })
}

/// Per-column matrices of a morph: column `x` uses weight `x / (width - 1)`,
/// and a one-column image uses `a`.
pub fn morph_matrices<T: Real>(
    a: &CompetitionMatrix<T>,
    b: &CompetitionMatrix<T>,
    width: usize,
) -> Result<Vec<CompetitionMatrix<T>>> {
    if width == 0 {
        return Err(invalid("width must be positive"));
    }
    if width == 1 {
        return Ok(vec![weighted_average(a, b, T::zero())?]);
    }
    (0..width)
        .map(|x| weighted_average(a, b, T::of(x as f64) / T::of((width - 1) as f64)))
        .collect()
}

/// Runs one automaton whose rule varies by column from `a` (left) to `b`
/// (right) and returns the final grid.
pub fn morph_grid<T: Real>(
    a: &CompetitionMatrix<T>,
    b: &CompetitionMatrix<T>,
    width: usize,
    height: usize,
    steps: usize,
    rng_seed: u64,
) -> Result<StateGrid> {
    let matrices = morph_matrices(a, b, width)?;
    let cols: Vec<&CompetitionMatrix<T>> = matrices.iter().collect();
    let grid = StateGrid::random(width, height, a.n, &mut seed::rng(rng_seed))?;
    Ok((0..steps).fold(grid, |g, _| update_by_column(&g, &cols)))
}

/// Floor and rock of a morph, drawn like a single map.
pub fn render_morph<T: Real>(
    a: &CompetitionMatrix<T>,
    b: &CompetitionMatrix<T>,
    width: usize,
    height: usize,
    steps: usize,
    rng_seed: u64,
) -> Result<Image> {
    Ok(CavernMap::from_grid(morph_grid(a, b, width, height, steps, rng_seed)?).render())
}

/// One colour per state; state 0 (floor) is the lightest.
pub fn render_states(grid: &StateGrid) -> Image {
    const COLOURS: [Rgb; 8] = [
        Rgb(235, 225, 200),
        Rgb(60, 50, 45),
        Rgb(110, 95, 80),
        Rgb(150, 135, 115),
        Rgb(85, 110, 85),
        Rgb(70, 80, 110),
        Rgb(120, 70, 70),
        Rgb(30, 30, 30),
    ];
    let mut img = Image::new(grid.width, grid.height, COLOURS[0]);
    for (i, &s) in grid.states.iter().enumerate() {
        img.set(i % grid.width, i / grid.width, COLOURS[s as usize % COLOURS.len()]);
    }
    img
}
