//! Text formats for every value that crosses the tool boundary.
//!
//! All formats are line-oriented; `#` starts a comment anywhere on a line
//! and blank lines are skipped. Every emit function produces exactly what
//! the matching parse function accepts, and emit-then-parse is the
//! identity. Emitted text never contains comments, so byte-level identity
//! also holds in the other direction for emitted files.

use std::fmt::Write as _;

use ggt::{
    Coloring, Graph, Hypergraph, OutcomeVector, Phase, TestFamily, Transcript, TranscriptStep,
    VertexSet,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: {reason}")]
    Invariant { line: usize, reason: String },
    #[error("expected {expected} more {what}, found end of input")]
    Truncated { expected: usize, what: &'static str },
}

fn malformed(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Malformed { line, reason: reason.into() }
}

/// Content lines with their 1-based line numbers, comments and blanks
/// removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let stripped = raw.split('#').next().unwrap_or("").trim();
        (!stripped.is_empty()).then_some((i + 1, stripped))
    })
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse()
        .map_err(|_| malformed(line, format!("expected {what}, got `{token}`")))
}

/// Header of two counts, e.g. `n m` or `k n`; returns (line, first, second).
fn take_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    first: &str,
    second: &str,
) -> Result<(usize, usize, usize), ParseError> {
    let (line, text) = lines
        .next()
        .ok_or(ParseError::Truncated { expected: 1, what: "header line" })?;
    let mut tokens = text.split_whitespace();
    let a = parse_usize(line, tokens.next().ok_or_else(|| malformed(line, format!("missing {first}")))?, first)?;
    let b = parse_usize(line, tokens.next().ok_or_else(|| malformed(line, format!("missing {second}")))?, second)?;
    if let Some(extra) = tokens.next() {
        return Err(malformed(line, format!("unexpected trailing token `{extra}`")));
    }
    Ok((line, a, b))
}

/// `.hg`: header `n m`, then m lines of strictly ascending vertex ids.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let mut lines = content_lines(text);
    let (_, n, m) = take_header(&mut lines, "vertex count", "edge count")?;
    let mut edges: Vec<VertexSet> = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines
            .next()
            .ok_or(ParseError::Truncated { expected: m - edges.len(), what: "edge lines" })?;
        let mut edge = VertexSet::new();
        let mut previous: Option<usize> = None;
        for token in line.split_whitespace() {
            let v = parse_usize(line_no, token, "a vertex id")?;
            if previous.map_or(false, |p| p >= v) {
                return Err(malformed(line_no, "vertex ids must be strictly ascending"));
            }
            previous = Some(v);
            edge.insert(v);
        }
        edges.push(edge);
    }
    if let Some((line, _)) = lines.next() {
        return Err(malformed(line, "content after the last edge"));
    }
    Hypergraph::new(n, edges)
        .map_err(|e| ParseError::Invariant { line: 1, reason: e.to_string() })
}

pub fn emit_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.n(), h.edge_count());
    for edge in h.edges() {
        let ids: Vec<String> = edge.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", ids.join(" "));
    }
    out
}

/// `.tests`: header `k n`, then k rows of exactly n characters from {0,1}.
pub fn parse_tests(text: &str) -> Result<TestFamily, ParseError> {
    let mut lines = content_lines(text);
    let (_, k, n) = take_header(&mut lines, "test count", "vertex count")?;
    let mut tests: Vec<VertexSet> = Vec::with_capacity(k);
    for _ in 0..k {
        let (line_no, row) = lines
            .next()
            .ok_or(ParseError::Truncated { expected: k - tests.len(), what: "matrix rows" })?;
        if row.chars().count() != n {
            return Err(malformed(line_no, format!("row has {} characters, expected {n}", row.chars().count())));
        }
        let mut test = VertexSet::new();
        for (j, c) in row.chars().enumerate() {
            match c {
                '0' => {}
                '1' => test.insert(j),
                other => {
                    return Err(malformed(line_no, format!("invalid matrix character `{other}`")))
                }
            }
        }
        tests.push(test);
    }
    if let Some((line, _)) = lines.next() {
        return Err(malformed(line, "content after the last row"));
    }
    TestFamily::new(n, tests).map_err(|e| ParseError::Invariant { line: 1, reason: e.to_string() })
}

fn bit_row(set: &VertexSet, n: usize) -> String {
    (0..n).map(|v| if set.contains(v) { '1' } else { '0' }).collect()
}

pub fn emit_tests(family: &TestFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", family.k(), family.n());
    for test in family.tests() {
        let _ = writeln!(out, "{}", bit_row(test, family.n()));
    }
    out
}

/// `.g`: header `n m`, then m lines `u v`.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (_, n, m) = take_header(&mut lines, "vertex count", "edge count")?;
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines
            .next()
            .ok_or(ParseError::Truncated { expected: m - edges.len(), what: "edge lines" })?;
        let mut tokens = line.split_whitespace();
        let u = parse_usize(line_no, tokens.next().ok_or_else(|| malformed(line_no, "missing endpoint"))?, "an endpoint")?;
        let v = parse_usize(line_no, tokens.next().ok_or_else(|| malformed(line_no, "missing second endpoint"))?, "an endpoint")?;
        if let Some(extra) = tokens.next() {
            return Err(malformed(line_no, format!("unexpected trailing token `{extra}`")));
        }
        edges.push((u, v));
    }
    if let Some((line, _)) = lines.next() {
        return Err(malformed(line, "content after the last edge"));
    }
    Graph::new(n, edges).map_err(|e| ParseError::Invariant { line: 1, reason: e.to_string() })
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// `.col`: one line `vertex color` per vertex, vertices ascending from 0.
pub fn parse_coloring(text: &str) -> Result<Coloring, ParseError> {
    let mut colors: Vec<usize> = Vec::new();
    for (line_no, line) in content_lines(text) {
        let mut tokens = line.split_whitespace();
        let vertex = parse_usize(line_no, tokens.next().unwrap(), "a vertex id")?;
        let color = parse_usize(
            line_no,
            tokens.next().ok_or_else(|| malformed(line_no, "missing color"))?,
            "a color",
        )?;
        if let Some(extra) = tokens.next() {
            return Err(malformed(line_no, format!("unexpected trailing token `{extra}`")));
        }
        if vertex != colors.len() {
            return Err(malformed(line_no, format!("expected vertex {}, got {vertex}", colors.len())));
        }
        colors.push(color);
    }
    Ok(Coloring::new(colors))
}

pub fn emit_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for (vertex, color) in c.colors().iter().enumerate() {
        let _ = writeln!(out, "{vertex} {color}");
    }
    out
}

/// Outcome vectors travel as bare bitstrings, e.g. `0110`.
pub fn parse_outcomes(text: &str) -> Result<OutcomeVector, ParseError> {
    let text = text.trim();
    let mut bits = Vec::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            other => return Err(malformed(1, format!("invalid outcome character `{other}`"))),
        }
    }
    Ok(OutcomeVector::new(bits))
}

pub fn emit_outcomes(y: &OutcomeVector) -> String {
    y.bits().iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Transcript CSV: header `step,phase,epsilon,test_bits,outcome`, one row
/// per query, steps numbered from 1. Carries the steps only; the result
/// index and round schedule are derivable and reported separately.
pub fn emit_transcript(t: &Transcript, n: usize) -> String {
    let mut out = String::from("step,phase,epsilon,test_bits,outcome\n");
    for (i, step) in t.steps.iter().enumerate() {
        let phase = match step.phase {
            Phase::Loop => "loop",
            Phase::Fallback => "fallback",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            i + 1,
            phase,
            step.epsilon,
            bit_row(&step.test, n),
            u8::from(step.outcome),
        );
    }
    out
}

pub fn parse_transcript(text: &str) -> Result<Vec<TranscriptStep>, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let (line, header) = lines
        .next()
        .ok_or(ParseError::Truncated { expected: 1, what: "header line" })?;
    if header != "step,phase,epsilon,test_bits,outcome" {
        return Err(malformed(line, "expected transcript header"));
    }
    let mut steps = Vec::new();
    for (line_no, row) in lines {
        if row.is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 5 {
            return Err(malformed(line_no, format!("expected 5 fields, got {}", fields.len())));
        }
        let step_no = parse_usize(line_no, fields[0], "a step number")?;
        if step_no != steps.len() + 1 {
            return Err(malformed(line_no, format!("expected step {}, got {step_no}", steps.len() + 1)));
        }
        let phase = match fields[1] {
            "loop" => Phase::Loop,
            "fallback" => Phase::Fallback,
            other => return Err(malformed(line_no, format!("unknown phase `{other}`"))),
        };
        let epsilon: f64 = fields[2]
            .parse()
            .map_err(|_| malformed(line_no, format!("invalid epsilon `{}`", fields[2])))?;
        let mut test = VertexSet::new();
        for (j, c) in fields[3].chars().enumerate() {
            match c {
                '0' => {}
                '1' => test.insert(j),
                other => {
                    return Err(malformed(line_no, format!("invalid test bit `{other}`")))
                }
            }
        }
        let outcome = match fields[4] {
            "0" => false,
            "1" => true,
            other => return Err(malformed(line_no, format!("invalid outcome `{other}`"))),
        };
        steps.push(TranscriptStep { test, outcome, phase, epsilon });
    }
    Ok(steps)
}
