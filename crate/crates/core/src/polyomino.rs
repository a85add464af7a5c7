//! Polyomino math puzzles.
//!
//! A puzzle is a board of positive integers and a multiset of polyominoes. A
//! placed piece scores the better of the sum and the product of the numbers it
//! covers; a solution places any subset of the pieces without overlap and
//! scores the total.
//!
//! Once the piece sizes are known, the best achievable score is fixed by how
//! the numbers split into groups of those sizes. Writing an optimal grouping
//! under a tiling of the board therefore gives a puzzle whose optimum uses
//! every piece, and every re-tiling or within-piece reshuffle of that board is
//! an equally good puzzle.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::format::{self, parse_err, parse_num};
use crate::seed;

pub type Cell = (usize, usize);

/// Cells as `(row, col)` offsets, translated so the minimum row and column
/// are 0 and sorted row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyomino {
    cells: Vec<Cell>,
}

impl Polyomino {
    pub fn new(cells: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        let raw: BTreeSet<(i64, i64)> = cells.into_iter().collect();
        if raw.is_empty() {
            return Err(invalid("polyomino needs at least one cell"));
        }
        let r0 = raw.iter().map(|c| c.0).min().unwrap();
        let c0 = raw.iter().map(|c| c.1).min().unwrap();
        let cells: Vec<Cell> = raw
            .iter()
            .map(|&(r, c)| ((r - r0) as usize, (c - c0) as usize))
            .collect();
        let p = Self { cells };
        if !p.is_connected() {
            return Err(invalid("polyomino cells must be edge-connected"));
        }
        Ok(p)
    }

    pub fn monomino() -> Self {
        Self { cells: vec![(0, 0)] }
    }

    /// Straight piece of `len` cells, horizontal or vertical.
    pub fn bar(len: usize, vertical: bool) -> Result<Self> {
        Self::new((0..len as i64).map(|i| if vertical { (i, 0) } else { (0, i) }))
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }

    pub fn rows(&self) -> usize {
        self.cells.iter().map(|c| c.0).max().unwrap() + 1
    }

    pub fn cols(&self) -> usize {
        self.cells.iter().map(|c| c.1).max().unwrap() + 1
    }

    fn is_connected(&self) -> bool {
        let set: HashSet<Cell> = self.cells.iter().copied().collect();
        let mut seen = HashSet::from([self.cells[0]]);
        let mut stack = vec![self.cells[0]];
        while let Some((r, c)) = stack.pop() {
            let nbrs = [
                r.checked_sub(1).map(|r| (r, c)),
                Some((r + 1, c)),
                c.checked_sub(1).map(|c| (r, c)),
                Some((r, c + 1)),
            ];
            for n in nbrs.into_iter().flatten() {
                if set.contains(&n) && seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        seen.len() == self.cells.len()
    }

    /// Distinct shapes under rotation and reflection, sorted.
    pub fn orientations(&self) -> Vec<Polyomino> {
        let mut out = BTreeSet::new();
        for flip in [false, true] {
            for rot in 0..4 {
                let cells = self.cells.iter().map(|&(r, c)| {
                    let (mut r, mut c) = (r as i64, c as i64);
                    if flip {
                        c = -c;
                    }
                    for _ in 0..rot {
                        (r, c) = (c, -r);
                    }
                    (r, c)
                });
                out.insert(Polyomino::new(cells).expect("rotation keeps connectivity"));
            }
        }
        out.into_iter().collect()
    }

    fn to_text(&self) -> String {
        let parts: Vec<String> = self.cells.iter().map(|(r, c)| format!("{r},{c}")).collect();
        parts.join(" ")
    }

    fn from_tokens<'a>(line: usize, toks: impl Iterator<Item = &'a str>) -> Result<Self> {
        let cells = toks
            .map(|t| {
                let (r, c) = t
                    .split_once(',')
                    .ok_or_else(|| parse_err(line, format!("bad cell {t:?}")))?;
                Ok((parse_num::<i64>(line, r)?, parse_num::<i64>(line, c)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Polyomino::new(cells).map_err(|e| parse_err(line, e.to_string()))
    }
}

/// Whether pieces may be rotated and reflected when placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Symmetry {
    #[default]
    Fixed,
    Free,
}

impl Symmetry {
    fn shapes(self, p: &Polyomino) -> Vec<Polyomino> {
        match self {
            Symmetry::Fixed => vec![p.clone()],
            Symmetry::Free => p.orientations(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Symmetry::Fixed => "fixed",
            Symmetry::Free => "free",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberBoard {
    rows: usize,
    cols: usize,
    values: Vec<u64>,
}

impl NumberBoard {
    pub fn new(rows: usize, cols: usize, values: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(invalid("board dimensions do not match value count"));
        }
        if values.contains(&0) {
            return Err(invalid("board values must be positive"));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.values[r * self.cols + c]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    fn set(&mut self, (r, c): Cell, v: u64) {
        self.values[r * self.cols + c] = v;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Placement {
    pub piece: usize,
    /// Top-left corner of the placed shape's bounding box.
    pub anchor: Cell,
    /// Covered board cells, sorted row-major.
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Puzzle {
    pub board: NumberBoard,
    pub pieces: Vec<Polyomino>,
    pub symmetry: Symmetry,
}

impl Puzzle {
    pub fn new(board: NumberBoard, pieces: Vec<Polyomino>, symmetry: Symmetry) -> Result<Self> {
        let area: usize = pieces.iter().map(Polyomino::size).sum();
        if area > board.area() {
            return Err(Error::AreaMismatch {
                pieces: area,
                region: board.area(),
            });
        }
        Ok(Self {
            board,
            pieces,
            symmetry,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format::header("puzzle");
        write_puzzle_body(&mut s, self);
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let lines = format::content_lines(text, "puzzle")?;
        let (p, rest) = parse_puzzle_body(&lines)?;
        if let Some(&(ln, _)) = rest.first() {
            return Err(parse_err(ln, "unexpected trailing content"));
        }
        Ok(p)
    }
}

fn write_puzzle_body(s: &mut String, p: &Puzzle) {
    let _ = writeln!(s, "board {} {}", p.board.rows, p.board.cols);
    for row in p.board.values.chunks(p.board.cols) {
        let parts: Vec<String> = row.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "{}", parts.join(" "));
    }
    let _ = writeln!(s, "symmetry {}", p.symmetry.name());
    let _ = writeln!(s, "pieces {}", p.pieces.len());
    for piece in &p.pieces {
        let _ = writeln!(s, "piece {}", piece.to_text());
    }
}

type Lines<'a> = [(usize, &'a str)];

fn keyword<'a>(lines: &'a Lines<'a>, i: usize, key: &str) -> Result<(usize, Vec<&'a str>)> {
    let &(ln, line) = lines
        .get(i)
        .ok_or_else(|| parse_err(lines.last().map_or(0, |l| l.0), format!("missing {key} line")))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some(key) {
        return Err(parse_err(ln, format!("expected {key:?}")));
    }
    Ok((ln, toks.collect()))
}

fn parse_puzzle_body<'a>(lines: &'a Lines<'a>) -> Result<(Puzzle, &'a Lines<'a>)> {
    let (ln, dims) = keyword(lines, 0, "board")?;
    if dims.len() != 2 {
        return Err(parse_err(ln, "board needs rows and cols"));
    }
    let rows: usize = parse_num(ln, dims[0])?;
    let cols: usize = parse_num(ln, dims[1])?;
    let mut values = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let &(ln, line) = lines.get(1 + r).ok_or_else(|| parse_err(ln, "missing board rows"))?;
        for t in line.split_whitespace() {
            values.push(parse_num::<u64>(ln, t)?);
        }
    }
    let board = NumberBoard::new(rows, cols, values).map_err(|e| parse_err(ln, e.to_string()))?;
    let mut i = 1 + rows;
    let (ln, sym) = keyword(lines, i, "symmetry")?;
    let symmetry = match sym.first().copied() {
        Some("fixed") => Symmetry::Fixed,
        Some("free") => Symmetry::Free,
        _ => return Err(parse_err(ln, "symmetry must be fixed or free")),
    };
    i += 1;
    let (ln, count) = keyword(lines, i, "pieces")?;
    let n: usize = parse_num(ln, count.first().copied().unwrap_or(""))?;
    i += 1;
    let mut pieces = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, toks) = keyword(lines, i, "piece")?;
        pieces.push(Polyomino::from_tokens(ln, toks.into_iter())?);
        i += 1;
    }
    let puzzle = Puzzle::new(board, pieces, symmetry).map_err(|e| parse_err(ln, e.to_string()))?;
    Ok((puzzle, &lines[i..]))
}

/// The better of the sum and the product of the covered values.
pub fn piece_score(values: &[u64]) -> Result<u64> {
    if values.is_empty() {
        return Err(Error::EmptyCoverage);
    }
    let sum: u64 = values.iter().sum();
    let product = values.iter().fold(1u64, |p, &v| p.saturating_mul(v));
    Ok(sum.max(product))
}

/// Size limits for the exhaustive routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_area: usize,
    pub max_pieces: usize,
    /// Cap on enumerated tilings, groupings or boards.
    pub max_enumeration: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_area: 16,
            max_pieces: 5,
            max_enumeration: 5_000_000,
        }
    }
}

impl Limits {
    fn check(&self, area: usize, pieces: usize) -> Result<()> {
        if area > self.max_area || pieces > self.max_pieces {
            return Err(Error::TooLarge);
        }
        Ok(())
    }
}

/// Every in-bounds placement of `piece` (index `index`) on a `rows`×`cols`
/// board, over the allowed orientations.
fn placements(index: usize, piece: &Polyomino, symmetry: Symmetry, rows: usize, cols: usize) -> Vec<Placement> {
    let mut out = Vec::new();
    for shape in symmetry.shapes(piece) {
        if shape.rows() > rows || shape.cols() > cols {
            continue;
        }
        for r in 0..=rows - shape.rows() {
            for c in 0..=cols - shape.cols() {
                out.push(Placement {
                    piece: index,
                    anchor: (r, c),
                    cells: shape.cells.iter().map(|&(dr, dc)| (r + dr, c + dc)).collect(),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub score: u64,
    pub placements: Vec<Placement>,
}

impl Solution {
    pub fn uses_all(&self, puzzle: &Puzzle) -> bool {
        self.placements.len() == puzzle.pieces.len()
    }
}

pub fn solve(puzzle: &Puzzle) -> Result<Solution> {
    solve_with(puzzle, Limits::default())
}

/// Exact optimum by depth-first search over pieces (skip or place anywhere).
/// Among optimal solutions the one placing the most pieces is returned.
pub fn solve_with(puzzle: &Puzzle, limits: Limits) -> Result<Solution> {
    let b = &puzzle.board;
    limits.check(b.area(), puzzle.pieces.len())?;
    // larger pieces first, best-scoring placements first
    let mut order: Vec<usize> = (0..puzzle.pieces.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(puzzle.pieces[i].size()));
    let options: Vec<Vec<(u128, u64, Placement)>> = order
        .iter()
        .map(|&i| {
            let mut opts: Vec<(u128, u64, Placement)> =
                placements(i, &puzzle.pieces[i], puzzle.symmetry, b.rows, b.cols)
                    .into_iter()
                    .map(|pl| {
                        let mask = pl.cells.iter().fold(0u128, |m, &(r, c)| m | 1 << (r * b.cols + c));
                        let vals: Vec<u64> = pl.cells.iter().map(|&(r, c)| b.get(r, c)).collect();
                        (mask, piece_score(&vals).unwrap(), pl)
                    })
                    .collect();
            opts.sort_by_key(|o| std::cmp::Reverse(o.1));
            opts
        })
        .collect();
    // optimistic score still available from each depth on
    let mut bound = vec![0u64; options.len() + 1];
    for d in (0..options.len()).rev() {
        bound[d] = bound[d + 1] + options[d].first().map_or(0, |o| o.1);
    }

    struct Search<'a> {
        options: &'a [Vec<(u128, u64, Placement)>],
        bound: &'a [u64],
        chosen: Vec<(usize, usize)>,
        best: Option<(u64, usize)>,
        best_choice: Vec<(usize, usize)>,
    }
    impl Search<'_> {
        fn go(&mut self, depth: usize, used: u128, score: u64) {
            let n = self.options.len();
            let reach = (score + self.bound[depth], self.chosen.len() + n - depth);
            if self.best.is_some_and(|b| reach <= b) {
                return;
            }
            if depth == n {
                let key = (score, self.chosen.len());
                if self.best.is_none_or(|b| key > b) {
                    self.best = Some(key);
                    self.best_choice = self.chosen.clone();
                }
                return;
            }
            for (k, (mask, s, _)) in self.options[depth].iter().enumerate() {
                if mask & used == 0 {
                    self.chosen.push((depth, k));
                    self.go(depth + 1, used | mask, score + s);
                    self.chosen.pop();
                }
            }
            self.go(depth + 1, used, score);
        }
    }
    let mut search = Search {
        options: &options,
        bound: &bound,
        chosen: Vec::new(),
        best: None,
        best_choice: Vec::new(),
    };
    search.go(0, 0, 0);
    let placements = search
        .best_choice
        .iter()
        .map(|&(d, k)| options[d][k].2.clone())
        .collect();
    Ok(Solution {
        score: search.best.map_or(0, |b| b.0),
        placements,
    })
}

/// An exact tiling: one placement per piece, in enumeration order.
pub type Tiling = Vec<Placement>;

pub fn enumerate_tilings(rows: usize, cols: usize, pieces: &[Polyomino], symmetry: Symmetry) -> Result<Vec<Tiling>> {
    enumerate_tilings_with(rows, cols, pieces, symmetry, Limits::default())
}

/// All partitions of the rectangle into the given pieces, found by always
/// covering the first uncovered cell in row-major order. Identical pieces are
/// interchangeable: the lowest unused index of a shape is placed first, so
/// each partition appears once.
pub fn enumerate_tilings_with(
    rows: usize,
    cols: usize,
    pieces: &[Polyomino],
    symmetry: Symmetry,
    limits: Limits,
) -> Result<Vec<Tiling>> {
    let area: usize = pieces.iter().map(Polyomino::size).sum();
    if rows == 0 || cols == 0 || area != rows * cols {
        return Err(Error::AreaMismatch {
            pieces: area,
            region: rows * cols,
        });
    }
    limits.check(area, pieces.len())?;

    // shapes relative to their first cell, per piece
    let shapes: Vec<Vec<Vec<(i64, i64)>>> = pieces
        .iter()
        .map(|p| {
            symmetry
                .shapes(p)
                .iter()
                .map(|s| {
                    let (r0, c0) = s.cells[0];
                    s.cells
                        .iter()
                        .map(|&(r, c)| (r as i64 - r0 as i64, c as i64 - c0 as i64))
                        .collect()
                })
                .collect()
        })
        .collect();

    struct Search<'a> {
        rows: usize,
        cols: usize,
        pieces: &'a [Polyomino],
        shapes: &'a [Vec<Vec<(i64, i64)>>],
        covered: Vec<bool>,
        used: Vec<bool>,
        current: Vec<Placement>,
        out: Vec<Tiling>,
        limit: usize,
        overflow: bool,
    }
    impl Search<'_> {
        fn go(&mut self) {
            if self.overflow {
                return;
            }
            let Some(first) = self.covered.iter().position(|&c| !c) else {
                self.out.push(self.current.clone());
                if self.out.len() > self.limit {
                    self.overflow = true;
                }
                return;
            };
            let (fr, fc) = ((first / self.cols) as i64, (first % self.cols) as i64);
            for i in 0..self.pieces.len() {
                if self.used[i] || (0..i).any(|j| !self.used[j] && self.pieces[j] == self.pieces[i]) {
                    continue;
                }
                for k in 0..self.shapes[i].len() {
                    let cells: Option<Vec<Cell>> = self.shapes[i][k]
                        .iter()
                        .map(|&(dr, dc)| {
                            let (r, c) = (fr + dr, fc + dc);
                            let ok = r >= 0
                                && c >= 0
                                && (r as usize) < self.rows
                                && (c as usize) < self.cols
                                && !self.covered[r as usize * self.cols + c as usize];
                            ok.then_some((r as usize, c as usize))
                        })
                        .collect();
                    let Some(cells) = cells else { continue };
                    for &(r, c) in &cells {
                        self.covered[r * self.cols + c] = true;
                    }
                    self.used[i] = true;
                    let anchor = (
                        cells.iter().map(|c| c.0).min().unwrap(),
                        cells.iter().map(|c| c.1).min().unwrap(),
                    );
                    let mut sorted = cells.clone();
                    sorted.sort_unstable();
                    self.current.push(Placement {
                        piece: i,
                        anchor,
                        cells: sorted,
                    });
                    self.go();
                    self.current.pop();
                    self.used[i] = false;
                    for &(r, c) in &cells {
                        self.covered[r * self.cols + c] = false;
                    }
                }
            }
        }
    }
    let mut search = Search {
        rows,
        cols,
        pieces,
        shapes: &shapes,
        covered: vec![false; area],
        used: vec![false; pieces.len()],
        current: Vec::new(),
        out: Vec::new(),
        limit: limits.max_enumeration,
        overflow: false,
    };
    search.go();
    if search.overflow {
        return Err(Error::TooLarge);
    }
    Ok(search.out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    /// `groups[i]` has `sizes[i]` numbers, in descending order.
    pub groups: Vec<Vec<u64>>,
    pub score: u64,
}

pub fn optimal_grouping(numbers: &[u64], sizes: &[usize]) -> Result<Grouping> {
    optimal_grouping_with(numbers, sizes, Limits::default())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Exhaustive search over distinct partitions of `numbers` into groups of the
/// given sizes. Groups of equal size are unordered, so within a run of equal
/// sizes each group's first member comes after the previous group's.
pub fn optimal_grouping_with(numbers: &[u64], sizes: &[usize], limits: Limits) -> Result<Grouping> {
    let total: usize = sizes.iter().sum();
    if total != numbers.len() {
        return Err(Error::SizeMismatch(numbers.len(), total));
    }
    if sizes.contains(&0) {
        return Err(invalid("group sizes must be positive"));
    }
    // multinomial / symmetric runs bounds the number of partitions visited
    let mut bound = factorial(numbers.len()) / sizes.iter().map(|&s| factorial(s)).product::<f64>();
    let mut sorted_sizes = sizes.to_vec();
    sorted_sizes.sort_unstable();
    for run in sorted_sizes.chunk_by(|a, b| a == b) {
        bound /= factorial(run.len());
    }
    if bound > limits.max_enumeration as f64 {
        return Err(Error::TooLarge);
    }

    let mut nums = numbers.to_vec();
    nums.sort_unstable_by(|a, b| b.cmp(a));
    // process sizes grouped by value, remembering original positions
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&i| sizes[i]);

    struct Search<'a> {
        nums: &'a [u64],
        sizes: Vec<usize>,
        same_as_prev: Vec<bool>,
        taken: Vec<bool>,
        groups: Vec<Vec<usize>>,
        best: Option<(u64, Vec<Vec<usize>>)>,
    }
    impl Search<'_> {
        fn go(&mut self, g: usize, score: u64) {
            if g == self.sizes.len() {
                if self.best.as_ref().is_none_or(|b| score > b.0) {
                    self.best = Some((score, self.groups.clone()));
                }
                return;
            }
            let free: Vec<usize> = (0..self.nums.len()).filter(|&i| !self.taken[i]).collect();
            // equal-size groups are unordered: keep their first members increasing
            let start = if self.same_as_prev[g] {
                let prev_first = self.groups[g - 1][0];
                free.partition_point(|&i| i < prev_first)
            } else {
                0
            };
            let mut pick = Vec::with_capacity(self.sizes[g]);
            self.combos(g, &free, start, &mut pick, score);
        }

        fn combos(&mut self, g: usize, free: &[usize], start: usize, pick: &mut Vec<usize>, score: u64) {
            let need = self.sizes[g];
            if pick.len() == need {
                let vals: Vec<u64> = pick.iter().map(|&i| self.nums[i]).collect();
                let s = piece_score(&vals).unwrap();
                for &i in pick.iter() {
                    self.taken[i] = true;
                }
                self.groups.push(pick.clone());
                self.go(g + 1, score + s);
                self.groups.pop();
                for &i in pick.iter() {
                    self.taken[i] = false;
                }
                return;
            }
            if free.len() - start < need - pick.len() {
                return;
            }
            let mut last_value = None;
            for k in start..free.len() {
                let v = self.nums[free[k]];
                // equal numbers are interchangeable at the same depth
                if last_value == Some(v) {
                    continue;
                }
                last_value = Some(v);
                pick.push(free[k]);
                self.combos(g, free, k + 1, pick, score);
                pick.pop();
            }
        }
    }

    let sz: Vec<usize> = order.iter().map(|&i| sizes[i]).collect();
    let same_as_prev: Vec<bool> = (0..sz.len()).map(|g| g > 0 && sz[g] == sz[g - 1]).collect();
    let mut search = Search {
        nums: &nums,
        sizes: sz,
        same_as_prev,
        taken: vec![false; nums.len()],
        groups: Vec::new(),
        best: None,
    };
    search.go(0, 0);
    let (score, idx_groups) = search.best.expect("at least one partition exists");
    let mut groups = vec![Vec::new(); sizes.len()];
    for (slot, g) in order.iter().zip(idx_groups) {
        groups[*slot] = g.iter().map(|&i| nums[i]).collect();
    }
    Ok(Grouping { groups, score })
}

/// Proof that a puzzle reaches `score` with every piece placed: the tiling
/// and the numbers under each of its placements, in cell order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub tiling: Tiling,
    pub groups: Vec<Vec<u64>>,
    pub score: u64,
}

impl Certificate {
    /// Recomputes the groups and score from the board and checks them.
    pub fn verify(&self, puzzle: &Puzzle) -> bool {
        let mut seen = HashSet::new();
        let mut pieces_seen = HashSet::new();
        let mut total = 0;
        if self.tiling.len() != puzzle.pieces.len() || self.groups.len() != self.tiling.len() {
            return false;
        }
        for (pl, group) in self.tiling.iter().zip(&self.groups) {
            if !pieces_seen.insert(pl.piece) || pl.piece >= puzzle.pieces.len() {
                return false;
            }
            let shapes = puzzle.symmetry.shapes(&puzzle.pieces[pl.piece]);
            let normalized = Polyomino::new(pl.cells.iter().map(|&(r, c)| (r as i64, c as i64)));
            if !normalized.is_ok_and(|n| shapes.contains(&n)) {
                return false;
            }
            let vals: Vec<u64> = pl.cells.iter().map(|&(r, c)| puzzle.board.get(r, c)).collect();
            if &vals != group || !pl.cells.iter().all(|c| seen.insert(*c)) {
                return false;
            }
            total += piece_score(&vals).unwrap();
        }
        total == self.score
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "certificate {}", self.score);
        let _ = writeln!(s, "placements {}", self.tiling.len());
        for (pl, g) in self.tiling.iter().zip(&self.groups) {
            let cells: Vec<String> = pl.cells.iter().map(|(r, c)| format!("{r},{c}")).collect();
            let vals: Vec<String> = g.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "place {} {} | {}", pl.piece, cells.join(" "), vals.join(" "));
        }
        s
    }
}

/// A puzzle together with its certificate, as written by `construct`.
pub fn certified_to_text(puzzle: &Puzzle, cert: &Certificate) -> String {
    let mut s = puzzle.to_text();
    s.push_str(&cert.to_text());
    s
}

/// Reads a puzzle file, with its certificate when one follows the pieces.
pub fn certified_from_text(text: &str) -> Result<(Puzzle, Option<Certificate>)> {
    let lines = format::content_lines(text, "puzzle")?;
    let (puzzle, rest) = parse_puzzle_body(&lines)?;
    if rest.is_empty() {
        return Ok((puzzle, None));
    }
    let (ln, score) = keyword(rest, 0, "certificate")?;
    let score: u64 = parse_num(ln, score.first().copied().unwrap_or(""))?;
    let (ln, count) = keyword(rest, 1, "placements")?;
    let n: usize = parse_num(ln, count.first().copied().unwrap_or(""))?;
    if rest.len() != 2 + n {
        return Err(parse_err(ln, format!("expected {n} placement lines")));
    }
    let mut tiling = Vec::with_capacity(n);
    let mut groups = Vec::with_capacity(n);
    for &(ln, line) in &rest[2..] {
        let body = line
            .strip_prefix("place ")
            .ok_or_else(|| parse_err(ln, "expected \"place\""))?;
        let (lhs, rhs) = body
            .split_once('|')
            .ok_or_else(|| parse_err(ln, "placement needs \"|\" before its values"))?;
        let mut toks = lhs.split_whitespace();
        let piece: usize = parse_num(ln, toks.next().unwrap_or(""))?;
        let cells = toks
            .map(|t| {
                let (r, c) = t
                    .split_once(',')
                    .ok_or_else(|| parse_err(ln, format!("bad cell {t:?}")))?;
                Ok((parse_num::<usize>(ln, r)?, parse_num::<usize>(ln, c)?))
            })
            .collect::<Result<Vec<Cell>>>()?;
        if cells.is_empty() {
            return Err(parse_err(ln, "placement covers no cells"));
        }
        let anchor = (
            cells.iter().map(|c| c.0).min().unwrap(),
            cells.iter().map(|c| c.1).min().unwrap(),
        );
        tiling.push(Placement { piece, anchor, cells });
        groups.push(
            rhs.split_whitespace()
                .map(|t| parse_num::<u64>(ln, t))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let cert = Certificate { tiling, groups, score };
    if !cert.verify(&puzzle) {
        return Err(parse_err(ln, "certificate does not match the board"));
    }
    Ok((puzzle, Some(cert)))
}

fn write_groups(board: &mut NumberBoard, tiling: &Tiling, groups: &[Vec<u64>]) {
    for (pl, g) in tiling.iter().zip(groups) {
        for (&cell, &v) in pl.cells.iter().zip(g) {
            board.set(cell, v);
        }
    }
}

/// Builds a puzzle whose optimum uses every piece: choose a tiling of the
/// rectangle (uniformly, from `rng_seed`), group the numbers optimally by
/// piece size and write each group under its piece in descending order.
pub fn construct_rich_puzzle(
    rows: usize,
    cols: usize,
    pieces: &[Polyomino],
    numbers: &[u64],
    symmetry: Symmetry,
    rng_seed: u64,
) -> Result<(Puzzle, Certificate)> {
    if numbers.len() != rows * cols {
        return Err(Error::SizeMismatch(numbers.len(), rows * cols));
    }
    let tilings = enumerate_tilings(rows, cols, pieces, symmetry)?;
    if tilings.is_empty() {
        return Err(Error::NoTiling);
    }
    let mut rng = seed::rng(rng_seed);
    let tiling = tilings[rng.random_range(0..tilings.len())].clone();
    let sizes: Vec<usize> = tiling.iter().map(|pl| pl.cells.len()).collect();
    let grouping = optimal_grouping(numbers, &sizes)?;
    let mut board = NumberBoard::new(rows, cols, vec![1; rows * cols])?;
    write_groups(&mut board, &tiling, &grouping.groups);
    let puzzle = Puzzle::new(board, pieces.to_vec(), symmetry)?;
    Ok((
        puzzle,
        Certificate {
            tiling,
            groups: grouping.groups,
            score: grouping.score,
        },
    ))
}

/// Applies an explicit permutation to the numbers under each certificate
/// piece: `perms[i][k]` is the index, within group `i`, of the value that
/// moves to the piece's `k`-th cell.
pub fn permute_within(puzzle: &Puzzle, cert: &Certificate, perms: &[Vec<usize>]) -> Result<(Puzzle, Certificate)> {
    if perms.len() != cert.groups.len() {
        return Err(Error::LengthMismatch(perms.len(), cert.groups.len()));
    }
    let mut groups = Vec::with_capacity(perms.len());
    for (g, p) in cert.groups.iter().zip(perms) {
        let mut check = p.clone();
        check.sort_unstable();
        if check != (0..g.len()).collect::<Vec<_>>() {
            return Err(invalid("not a permutation of the group"));
        }
        groups.push(p.iter().map(|&k| g[k]).collect::<Vec<u64>>());
    }
    let mut out = puzzle.clone();
    write_groups(&mut out.board, &cert.tiling, &groups);
    Ok((
        out,
        Certificate {
            tiling: cert.tiling.clone(),
            groups,
            score: cert.score,
        },
    ))
}

/// Shuffles the numbers within every certificate piece.
pub fn neutral_permute(puzzle: &Puzzle, cert: &Certificate, rng_seed: u64) -> Result<(Puzzle, Certificate)> {
    let mut rng = seed::rng(rng_seed);
    let perms: Vec<Vec<usize>> = cert
        .groups
        .iter()
        .map(|g| {
            let mut p: Vec<usize> = (0..g.len()).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    permute_within(puzzle, cert, &perms)
}

/// One puzzle per tiling of the board: the certificate's number groups are
/// written under the tiling's pieces, each placement taking the first unused
/// group of matching size.
pub fn neutral_retile(puzzle: &Puzzle, cert: &Certificate) -> Result<Vec<(Puzzle, Certificate)>> {
    let b = &puzzle.board;
    let tilings = enumerate_tilings(b.rows, b.cols, &puzzle.pieces, puzzle.symmetry)?;
    tilings
        .into_iter()
        .map(|tiling| {
            let mut used = vec![false; cert.groups.len()];
            let mut groups = Vec::with_capacity(tiling.len());
            for pl in &tiling {
                let k = (0..cert.groups.len())
                    .find(|&k| !used[k] && cert.groups[k].len() == pl.cells.len())
                    .ok_or_else(|| invalid("certificate groups do not match the piece sizes"))?;
                used[k] = true;
                groups.push(cert.groups[k].clone());
            }
            let mut out = puzzle.clone();
            write_groups(&mut out.board, &tiling, &groups);
            Ok((
                out,
                Certificate {
                    tiling,
                    groups,
                    score: cert.score,
                },
            ))
        })
        .collect()
}

/// Upper bound on the neutral network: the sum over tilings of the number of
/// distinct within-piece arrangements of each group.
pub fn neutral_network_bound(puzzle: &Puzzle, cert: &Certificate) -> Result<f64> {
    let arrangements: f64 = cert
        .groups
        .iter()
        .map(|g| {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            let repeats: f64 = sorted.chunk_by(|a, b| a == b).map(|r| factorial(r.len())).product();
            factorial(g.len()) / repeats
        })
        .product();
    Ok(neutral_retile(puzzle, cert)?.len() as f64 * arrangements)
}

/// Number of distinct boards reachable by re-tiling followed by within-piece
/// permutation, counted by enumerating the boards.
pub fn neutral_network_size(puzzle: &Puzzle, cert: &Certificate) -> Result<usize> {
    neutral_network_size_with(puzzle, cert, Limits::default())
}

pub fn neutral_network_size_with(puzzle: &Puzzle, cert: &Certificate, limits: Limits) -> Result<usize> {
    limits.check(puzzle.board.area(), puzzle.pieces.len())?;
    if neutral_network_bound(puzzle, cert)? > limits.max_enumeration as f64 {
        return Err(Error::TooLarge);
    }
    let mut boards: HashSet<Vec<u64>> = HashSet::new();
    for (p, c) in neutral_retile(puzzle, cert)? {
        let per_group: Vec<Vec<Vec<u64>>> = c.groups.iter().map(|g| distinct_permutations(g)).collect();
        let mut idx = vec![0usize; per_group.len()];
        loop {
            let groups: Vec<Vec<u64>> = idx.iter().zip(&per_group).map(|(&i, opts)| opts[i].clone()).collect();
            let mut board = p.board.clone();
            write_groups(&mut board, &c.tiling, &groups);
            boards.insert(board.values);
            // odometer over the per-group arrangements
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < per_group[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Ok(boards.len())
}

fn distinct_permutations(values: &[u64]) -> Vec<Vec<u64>> {
    let mut v = values.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    // lexicographic next-permutation
    loop {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return out;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
}

/// Random rectangle partition into `k` connected regions, grown from random
/// seed cells. Returns the region shapes as pieces.
pub fn random_pieces<R: Rng + ?Sized>(rows: usize, cols: usize, k: usize, rng: &mut R) -> Result<Vec<Polyomino>> {
    if k == 0 || k > rows * cols {
        return Err(invalid("piece count must lie in 1..=area"));
    }
    let n = rows * cols;
    let mut owner = vec![usize::MAX; n];
    let mut cells: Vec<usize> = (0..n).collect();
    cells.shuffle(rng);
    for (region, &c) in cells[..k].iter().enumerate() {
        owner[c] = region;
    }
    let mut unassigned = n - k;
    while unassigned > 0 {
        // frontier cells: unowned with an owned 4-neighbour
        let frontier: Vec<(usize, usize)> = (0..n)
            .filter(|&c| owner[c] == usize::MAX)
            .filter_map(|c| {
                let owners: Vec<usize> = crate::geometry::neighbours4(c, cols, rows)
                    .map(|nb| owner[nb])
                    .filter(|&o| o != usize::MAX)
                    .collect();
                (!owners.is_empty()).then(|| (c, owners[rng.random_range(0..owners.len())]))
            })
            .collect();
        let (c, o) = frontier[rng.random_range(0..frontier.len())];
        owner[c] = o;
        unassigned -= 1;
    }
    (0..k)
        .map(|region| {
            Polyomino::new(
                (0..n)
                    .filter(|&c| owner[c] == region)
                    .map(|c| ((c / cols) as i64, (c % cols) as i64)),
            )
        })
        .collect()
}

/// Random guarded instance: a rectangle of area at most `max_area`, up to
/// `max_pieces` pieces that tile it, and numbers uniform in `lo..=hi`.
pub fn random_instance<R: Rng + ?Sized>(
    max_area: usize,
    max_pieces: usize,
    lo: u64,
    hi: u64,
    rng: &mut R,
) -> Result<(usize, usize, Vec<Polyomino>, Vec<u64>)> {
    if max_area == 0 || max_pieces == 0 || lo == 0 || lo > hi {
        return Err(invalid("instance parameters out of range"));
    }
    let dims: Vec<(usize, usize)> = (1..=max_area)
        .flat_map(|r| (1..=max_area / r).map(move |c| (r, c)))
        .filter(|&(r, c)| r * c >= 2)
        .collect();
    let &(rows, cols) = dims.choose(rng).ok_or_else(|| invalid("area too small"))?;
    let k = rng.random_range(1..=max_pieces.min(rows * cols));
    let pieces = random_pieces(rows, cols, k, rng)?;
    let numbers = (0..rows * cols).map(|_| rng.random_range(lo..=hi)).collect();
    Ok((rows, cols, pieces, numbers))
}
