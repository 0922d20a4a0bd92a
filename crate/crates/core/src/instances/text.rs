//! Line-oriented text formats.
//!
//! Instance:
//!
//! ```text
//! p hd <directed|undirected> <n>
//! x <v1> ... <vn>
//! y <v1> ... <vn>
//! ```
//!
//! Certificate:
//!
//! ```text
//! s <DECOMPOSED|NONE|TIMEOUT>
//! z <v1> ... <vn>        (DECOMPOSED only)
//! w <v1> ... <vn>        (DECOMPOSED only)
//! t <elapsed_ms> <nodes> <edges_fixed>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::Instance;
use crate::error::ParseError;
use crate::multigraph::{HamCycle, Mode};
use crate::result::{SolveResult, Status};

/// Whitespace-separated token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

#[derive(Debug)]
struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &raw[s..pos],
                        column: raw[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        Some(Line {
            number: i + 1,
            tokens,
        })
    })
}

struct Cursor<'a, I: Iterator<Item = Line<'a>>> {
    lines: I,
    last_line: usize,
}

impl<'a, I: Iterator<Item = Line<'a>>> Cursor<'a, I> {
    /// Next content line, which must start with `tag`.
    fn expect(&mut self, tag: &str) -> Result<Line<'a>, ParseError> {
        let line = self.lines.next().ok_or_else(|| {
            ParseError::syntax(self.last_line + 1, 1, format!("missing `{tag}` line"))
        })?;
        self.last_line = line.number;
        let first = line.tokens[0];
        if first.text != tag {
            return Err(ParseError::syntax(
                line.number,
                first.column,
                format!("expected `{tag}` line, found `{}`", first.text),
            ));
        }
        Ok(line)
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.lines.next() {
            None => Ok(()),
            Some(line) => Err(ParseError::syntax(
                line.number,
                line.tokens[0].column,
                "unexpected trailing line",
            )),
        }
    }
}

fn cursor(text: &str) -> Cursor<'_, impl Iterator<Item = Line<'_>>> {
    Cursor {
        lines: lines(text),
        last_line: 0,
    }
}

fn number<T: std::str::FromStr>(
    line: &Line<'_>,
    tok: Token<'_>,
    what: &str,
) -> Result<T, ParseError> {
    tok.text.parse().map_err(|_| {
        ParseError::syntax(
            line.number,
            tok.column,
            format!("expected {what}, found `{}`", tok.text),
        )
    })
}

fn arity(line: &Line<'_>, expected: usize, what: &str) -> Result<(), ParseError> {
    let got = line.tokens.len() - 1;
    if got != expected {
        let column = line
            .tokens
            .get(expected + 1)
            .or(line.tokens.last())
            .map_or(1, |t| t.column);
        return Err(ParseError::syntax(
            line.number,
            column,
            format!("expected {expected} {what}, found {got}"),
        ));
    }
    Ok(())
}

fn labels(line: &Line<'_>) -> Result<Vec<u32>, ParseError> {
    line.tokens[1..]
        .iter()
        .map(|&t| number(line, t, "a vertex label"))
        .collect()
}

fn cycle_line(line: &Line<'_>, mode: Mode, n: usize) -> Result<HamCycle, ParseError> {
    arity(line, n, "vertex labels")?;
    let labels = labels(line)?;
    let mut seen = vec![false; n + 1];
    for (k, &v) in labels.iter().enumerate() {
        let column = line.tokens[k + 1].column;
        if v == 0 || v as usize > n {
            return Err(ParseError::semantic(
                line.number,
                column,
                format!("label {v} is outside 1..={n}"),
            ));
        }
        if std::mem::replace(&mut seen[v as usize], true) {
            return Err(ParseError::semantic(
                line.number,
                column,
                format!("label {v} repeats; not a permutation"),
            ));
        }
    }
    HamCycle::new(mode, &labels).map_err(|e| ParseError::semantic(line.number, 1, e.to_string()))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut cur = cursor(text);
    let header = cur.expect("p")?;
    arity(&header, 3, "header fields")?;
    let format = header.tokens[1];
    if format.text != "hd" {
        return Err(ParseError::syntax(
            header.number,
            format.column,
            format!("expected format `hd`, found `{}`", format.text),
        ));
    }
    let mode_tok = header.tokens[2];
    let mode: Mode = mode_tok
        .text
        .parse()
        .map_err(|e: String| ParseError::syntax(header.number, mode_tok.column, e))?;
    let n: usize = number(&header, header.tokens[3], "a vertex count")?;
    if n < 3 {
        return Err(ParseError::semantic(
            header.number,
            header.tokens[3].column,
            format!("n = {n}, but a Hamiltonian cycle needs at least 3 vertices"),
        ));
    }
    let x = cycle_line(&cur.expect("x")?, mode, n)?;
    let y = cycle_line(&cur.expect("y")?, mode, n)?;
    cur.finish()?;
    Ok(Instance { mode, n, x, y })
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = format!("p hd {} {}\n", inst.mode, inst.n);
    for (tag, c) in [("x", &inst.x), ("y", &inst.y)] {
        out.push_str(tag);
        for v in c.vertices() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parsed certificate. Cycles are kept as raw label sequences so that a
/// verifier can refute malformed ones instead of rejecting the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub status: Status,
    pub z: Option<Vec<u32>>,
    pub w: Option<Vec<u32>>,
    pub elapsed_ms: u64,
    pub nodes: u64,
    pub edges_fixed: u64,
}

impl Certificate {
    pub fn from_result(r: &SolveResult) -> Self {
        let (z, w) = match &r.decomposition {
            Some((z, w)) => (Some(z.labels()), Some(w.labels())),
            None => (None, None),
        };
        Certificate {
            status: r.status,
            z,
            w,
            elapsed_ms: r.stats.elapsed.as_millis() as u64,
            nodes: r.stats.nodes,
            edges_fixed: r.stats.edges_fixed,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("s {}\n", self.status);
        for (tag, c) in [("z", &self.z), ("w", &self.w)] {
            if let Some(c) = c {
                out.push_str(tag);
                for v in c {
                    write!(out, " {v}").unwrap();
                }
                out.push('\n');
            }
        }
        writeln!(
            out,
            "t {} {} {}",
            self.elapsed_ms, self.nodes, self.edges_fixed
        )
        .unwrap();
        out
    }
}

pub fn write_certificate(r: &SolveResult) -> String {
    Certificate::from_result(r).to_text()
}

pub fn parse_certificate(text: &str) -> Result<Certificate, ParseError> {
    let mut cur = cursor(text);
    let s = cur.expect("s")?;
    arity(&s, 1, "status token")?;
    let status: Status = s.tokens[1]
        .text
        .parse()
        .map_err(|e: String| ParseError::syntax(s.number, s.tokens[1].column, e))?;
    let (z, w) = if status == Status::Decomposed {
        let mut cycle = |tag: &str| -> Result<Vec<u32>, ParseError> {
            let line = cur.expect(tag)?;
            if line.tokens.len() < 2 {
                return Err(ParseError::syntax(
                    line.number,
                    line.tokens[0].column,
                    "empty cycle",
                ));
            }
            labels(&line)
        };
        (Some(cycle("z")?), Some(cycle("w")?))
    } else {
        (None, None)
    };
    let t = cur.expect("t")?;
    arity(&t, 3, "statistics fields")?;
    let elapsed_ms = number(&t, t.tokens[1], "elapsed milliseconds")?;
    let nodes = number(&t, t.tokens[2], "a node count")?;
    let edges_fixed = number(&t, t.tokens[3], "an edge count")?;
    cur.finish()?;
    Ok(Certificate {
        status,
        z,
        w,
        elapsed_ms,
        nodes,
        edges_fixed,
    })
}
