//! Line-oriented text formats for digraphs and undirected graphs.

use super::{vid, Arc, Digraph, UndirectedGraph};
use std::fmt::Write as _;
use thiserror::Error;

/// A parse failure at a 1-based line number (0 when the input is empty).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// Non-empty, non-comment lines with their 1-based numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Reads `key=<value>` from a token.
pub(crate) fn keyed<T: std::str::FromStr>(line: usize, token: Option<&str>, key: &str) -> Result<T, ParseError> {
    let token = token.ok_or_else(|| ParseError::new(line, format!("missing `{key}=`")))?;
    let value = token
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| ParseError::new(line, format!("expected `{key}=<value>`, found `{token}`")))?;
    value.parse().map_err(|_| ParseError::new(line, format!("bad value for `{key}`: `{value}`")))
}

pub(crate) fn number<T: std::str::FromStr>(line: usize, token: Option<&str>, what: &str) -> Result<T, ParseError> {
    let token = token.ok_or_else(|| ParseError::new(line, format!("missing {what}")))?;
    token.parse().map_err(|_| ParseError::new(line, format!("bad {what}: `{token}`")))
}

pub(crate) fn expect_end<'a>(line: usize, mut tokens: impl Iterator<Item = &'a str>) -> Result<(), ParseError> {
    match tokens.next() {
        None => Ok(()),
        Some(t) => Err(ParseError::new(line, format!("unexpected trailing token `{t}`"))),
    }
}

pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::new(0, "empty input, expected `digraph` header"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("digraph") {
        return Err(ParseError::new(hl, "expected `digraph n=<int> loops=<0|1>`"));
    }
    let n: usize = keyed(hl, tok.next(), "n")?;
    let loops: u8 = keyed(hl, tok.next(), "loops")?;
    if loops > 1 {
        return Err(ParseError::new(hl, "loops must be 0 or 1"));
    }
    expect_end(hl, tok)?;
    let mut arcs: Vec<Arc> = Vec::new();
    for (ln, l) in lines {
        let mut tok = l.split_whitespace();
        let u: usize = number(ln, tok.next(), "tail")?;
        let v: usize = number(ln, tok.next(), "head")?;
        expect_end(ln, tok)?;
        arcs.push((vid(u), vid(v)));
        // Validate incrementally so the error names this line.
        Digraph::new(n, &arcs, loops == 1).map_err(|e| ParseError::new(ln, e.to_string()))?;
    }
    Digraph::new(n, &arcs, loops == 1).map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut out = format!("digraph n={} loops={}\n", d.n(), u8::from(d.allow_loops()));
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// `graph n=<int>` followed by `<u> <v>` edge lines.
pub fn parse_undirected(text: &str) -> Result<UndirectedGraph, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::new(0, "empty input, expected `graph` header"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("graph") {
        return Err(ParseError::new(hl, "expected `graph n=<int>`"));
    }
    let n: usize = keyed(hl, tok.next(), "n")?;
    expect_end(hl, tok)?;
    let mut edges = Vec::new();
    for (ln, l) in lines {
        let mut tok = l.split_whitespace();
        let u: usize = number(ln, tok.next(), "endpoint")?;
        let v: usize = number(ln, tok.next(), "endpoint")?;
        expect_end(ln, tok)?;
        edges.push((u, v));
        UndirectedGraph::new(n, &edges).map_err(|e| ParseError::new(ln, e.to_string()))?;
    }
    UndirectedGraph::new(n, &edges).map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn write_undirected(g: &UndirectedGraph) -> String {
    let mut out = format!("graph n={}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
