//! One-dimensional totalistic cellular automata with apoptotic fitness.
//!
//! States run over `0..8` and the neighbourhood is the five cells within
//! distance two, so a neighbourhood sum lies in `0..=35` and a rule is a
//! 36-entry lookup table. Entry 0 is pinned to 0, making the all-quiescent row
//! absorbing; that is what lets an automaton die.
//!
//! The time history is drawn into a fixed arena, one row per time step, with
//! cells beyond the left and right edges permanently quiescent.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::format;
use crate::image::{Image, Rgb, STATE_PALETTE};

pub const STATES: u8 = 8;
pub const RADIUS: usize = 2;
pub const RULE_LEN: usize = 36;

/// A totalistic rule: `entries[s]` is the next state of a cell whose
/// neighbourhood sums to `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ApoptoticRule {
    entries: [u8; RULE_LEN],
}

impl ApoptoticRule {
    pub fn new(entries: [u8; RULE_LEN]) -> Result<Self> {
        if entries[0] != 0 {
            return Err(invalid("rule entry 0 must be 0"));
        }
        if let Some(&e) = entries.iter().find(|&&e| e >= STATES) {
            return Err(Error::StateOutOfRange {
                state: e as usize,
                limit: STATES as usize,
            });
        }
        Ok(Self { entries })
    }

    pub fn from_slice(entries: &[u8]) -> Result<Self> {
        let arr: [u8; RULE_LEN] = entries
            .try_into()
            .map_err(|_| Error::LengthMismatch(entries.len(), RULE_LEN))?;
        Self::new(arr)
    }

    pub fn zero() -> Self {
        Self { entries: [0; RULE_LEN] }
    }

    /// Every free entry drawn uniformly from `0..8`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut entries = [0u8; RULE_LEN];
        for e in entries.iter_mut().skip(1) {
            *e = rng.random_range(0..STATES);
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[u8; RULE_LEN] {
        &self.entries
    }

    pub fn to_text(&self) -> String {
        let mut s = format::header("rule");
        s.push_str(&self.to_string());
        s.push('\n');
        s
    }
}

impl fmt::Display for ApoptoticRule {
    /// 36 space-separated integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for ApoptoticRule {
    type Err = Error;

    /// Accepts 36 integers separated by whitespace or commas, with an optional
    /// `richspaces-rule v1` header.
    fn from_str(s: &str) -> Result<Self> {
        let lines = format::content_lines(s, "rule")?;
        let mut values = Vec::with_capacity(RULE_LEN);
        for (n, line) in lines {
            for tok in line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
            {
                values.push(format::parse_num::<u8>(n, tok)?);
            }
        }
        Self::from_slice(&values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arena {
    pub width: usize,
    pub height: usize,
}

impl Arena {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(invalid("arena dimensions must be positive"));
        }
        Ok(Self { width, height })
    }

    pub fn square(side: usize) -> Result<Self> {
        Self::new(side, side)
    }
}

/// Advances one row. Cells outside the row contribute 0 to neighbourhood sums.
pub fn step(row: &[u8], rule: &ApoptoticRule) -> Result<Vec<u8>> {
    if let Some(&s) = row.iter().find(|&&s| s >= STATES) {
        return Err(Error::StateOutOfRange {
            state: s as usize,
            limit: STATES as usize,
        });
    }
    let mut next = vec![0u8; row.len()];
    step_into(row, rule, &mut next);
    Ok(next)
}

/// Sliding-window update; `row` must already be validated.
fn step_into(row: &[u8], rule: &ApoptoticRule, next: &mut [u8]) {
    let n = row.len();
    let at = |i: isize| -> usize {
        if i < 0 || i as usize >= n {
            0
        } else {
            row[i as usize] as usize
        }
    };
    let mut sum: usize = (-(RADIUS as isize)..=RADIUS as isize).map(at).sum();
    for (i, cell) in next.iter_mut().enumerate().take(n) {
        *cell = rule.entries[sum];
        let ii = i as isize;
        sum = sum + at(ii + RADIUS as isize + 1) - at(ii - RADIUS as isize);
    }
}

/// Simulated rows of an automaton inside its arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeHistory {
    width: usize,
    rows: Vec<Vec<u8>>,
    died_at: Option<usize>,
}

impl TimeHistory {
    pub fn new(rows: Vec<Vec<u8>>, died_at: Option<usize>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(invalid("history rows must be non-empty and equal length"));
        }
        if let Some(d) = died_at {
            if d >= rows.len() || rows[d..].iter().any(|r| r.iter().any(|&s| s != 0)) {
                return Err(invalid("rows from the death row onward must be quiescent"));
            }
        }
        Ok(Self { width, rows, died_at })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Row index of the first all-quiescent row, if the automaton died in the arena.
    pub fn died_at(&self) -> Option<usize> {
        self.died_at
    }

    pub fn live_cells(&self) -> usize {
        self.rows.iter().map(|r| r.iter().filter(|&&s| s != 0).count()).sum()
    }

    /// Cells filled before death, or 0 for an automaton still alive at the
    /// bottom of the arena.
    pub fn fitness(&self) -> u64 {
        match self.died_at {
            Some(_) => self.live_cells() as u64,
            None => 0,
        }
    }
}

/// Runs `rule` from a single seed cell at the center of row 0.
///
/// Simulation stops at the first all-quiescent row; the remaining arena rows
/// are left quiescent.
pub fn simulate(rule: &ApoptoticRule, arena: Arena, seed_state: u8) -> Result<TimeHistory> {
    if seed_state == 0 || seed_state >= STATES {
        return Err(invalid("seed state must lie in 1..8"));
    }
    let mut rows = vec![vec![0u8; arena.width]; arena.height];
    rows[0][arena.width / 2] = seed_state;
    let mut died_at = None;
    for r in 1..arena.height {
        let (done, rest) = rows.split_at_mut(r);
        step_into(&done[r - 1], rule, &mut rest[0]);
        if rest[0].iter().all(|&s| s == 0) {
            died_at = Some(r);
            break;
        }
    }
    Ok(TimeHistory {
        width: arena.width,
        rows,
        died_at,
    })
}

/// Apoptotic fitness: the number of non-quiescent cells up to the first
/// all-quiescent row, or 0 when no such row appears inside the arena.
///
/// Uses two rolling rows instead of the full history.
pub fn evaluate_fitness(rule: &ApoptoticRule, arena: Arena, seed_state: u8) -> Result<u64> {
    if seed_state == 0 || seed_state >= STATES {
        return Err(invalid("seed state must lie in 1..8"));
    }
    let mut cur = vec![0u8; arena.width];
    let mut next = vec![0u8; arena.width];
    cur[arena.width / 2] = seed_state;
    let mut filled = 1u64;
    for _ in 1..arena.height {
        step_into(&cur, rule, &mut next);
        let live = next.iter().filter(|&&s| s != 0).count() as u64;
        if live == 0 {
            return Ok(filled);
        }
        filled += live;
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(0)
}

/// One pixel per cell; row `r` of the history is image row `r`.
pub fn render_history(history: &TimeHistory, palette: &[Rgb; 8]) -> Image {
    let mut img = Image::new(history.width, history.height(), palette[0]);
    for (y, row) in history.rows.iter().enumerate() {
        for (x, &s) in row.iter().enumerate() {
            if s != 0 {
                img.set(x, y, palette[s as usize]);
            }
        }
    }
    img
}

pub fn render_default(history: &TimeHistory) -> Image {
    render_history(history, &STATE_PALETTE)
}
