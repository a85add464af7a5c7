//! Shared helpers for the line-oriented text formats.
//!
//! Every emitted file starts with a `richspaces-<kind> v1` line. Parsers accept
//! files with or without that header, skip blank lines, and treat `#` as a
//! comment marker.

use crate::error::{Error, Result};

pub const VERSION: &str = "v1";

pub fn header(kind: &str) -> String {
    format!("richspaces-{kind} {VERSION}\n")
}

/// Non-empty, comment-stripped lines with their 1-based line numbers, minus
/// an optional leading header of the given kind.
pub fn content_lines<'a>(text: &'a str, kind: &str) -> Result<Vec<(usize, &'a str)>> {
    let mut lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if let Some(&(n, first)) = lines.first() {
        if let Some(rest) = first.strip_prefix("richspaces-") {
            let mut it = rest.split_whitespace();
            let k = it.next().unwrap_or("");
            let v = it.next().unwrap_or("");
            if k != kind {
                return Err(parse_err(n, format!("expected a {kind} file, found {k}")));
            }
            if v != VERSION {
                return Err(parse_err(n, format!("unsupported version {v}")));
            }
            lines.remove(0);
        }
    }
    Ok(lines)
}

pub fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("bad number {tok:?}")))
}

/// Writes a boolean mask as `W H` followed by one row of `1`/`0` per line.
pub fn write_mask(kind: &str, width: usize, height: usize, cells: &[bool]) -> String {
    let mut s = header(kind);
    s.push_str(&format!("{width} {height}\n"));
    for row in cells.chunks(width) {
        s.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

pub fn parse_mask(text: &str, kind: &str) -> Result<(usize, usize, Vec<bool>)> {
    let lines = content_lines(text, kind)?;
    let (n, dims) = *lines.first().ok_or_else(|| parse_err(0, "empty mask"))?;
    let mut it = dims.split_whitespace();
    let width: usize = parse_num(n, it.next().unwrap_or(""))?;
    let height: usize = parse_num(n, it.next().unwrap_or(""))?;
    if lines.len() != height + 1 {
        return Err(parse_err(n, format!("expected {height} rows")));
    }
    let mut cells = Vec::with_capacity(width * height);
    for &(ln, row) in &lines[1..] {
        if row.len() != width {
            return Err(parse_err(ln, format!("expected {width} columns")));
        }
        for ch in row.chars() {
            match ch {
                '1' => cells.push(true),
                '0' => cells.push(false),
                _ => return Err(parse_err(ln, format!("bad mask character {ch:?}"))),
            }
        }
    }
    Ok((width, height, cells))
}
