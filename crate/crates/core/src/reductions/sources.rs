//! Inputs of the source problems, their text formats and brute-force deciders.

use super::ReductionError;
use crate::graph::io_helpers::{content_lines, expect_end, keyed, number};
use crate::graph::{parse_undirected, write_undirected, ParseError, UndirectedGraph};
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Bipartite graph with sides `0..n1` and `0..n2`, each side partitioned into parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteInput {
    pub n1: usize,
    pub n2: usize,
    /// `(left, right)` pairs.
    pub edges: Vec<(usize, usize)>,
    pub part1: Vec<Vec<usize>>,
    pub part2: Vec<Vec<usize>>,
}

fn check_partition(side: &str, n: usize, parts: &[Vec<usize>]) -> Result<(), ReductionError> {
    let mut seen = BTreeSet::new();
    for p in parts {
        if p.is_empty() || p.len() > 2 {
            return Err(ReductionError::BadPartition(format!("{side} part {p:?} must have one or two vertices")));
        }
        for &v in p {
            if v >= n || !seen.insert(v) {
                return Err(ReductionError::BadPartition(format!("{side} vertex {v} out of range or repeated")));
            }
        }
    }
    if seen.len() != n {
        return Err(ReductionError::BadPartition(format!("{side} parts do not cover every vertex")));
    }
    Ok(())
}

impl BipartiteInput {
    /// Checks the preconditions: equal sides, degree at most three, parts of size one or two.
    pub fn validate(&self) -> Result<(), ReductionError> {
        if self.n1 == 0 {
            return Err(ReductionError::BadPartition("sides are empty".into()));
        }
        if self.n1 != self.n2 {
            return Err(ReductionError::BadPartition(format!("sides differ: {} vs {}", self.n1, self.n2)));
        }
        let mut deg1 = vec![0; self.n1];
        let mut deg2 = vec![0; self.n2];
        let mut seen = BTreeSet::new();
        for &(a, b) in &self.edges {
            if a >= self.n1 || b >= self.n2 || !seen.insert((a, b)) {
                return Err(ReductionError::BadPartition(format!("edge ({a}, {b}) out of range or repeated")));
            }
            deg1[a] += 1;
            deg2[b] += 1;
        }
        if deg1.iter().chain(&deg2).any(|&d| d > 3) {
            return Err(ReductionError::BadPartition("a vertex has degree above three".into()));
        }
        check_partition("left", self.n1, &self.part1)?;
        check_partition("right", self.n2, &self.part2)
    }

    pub fn part_of1(&self, a: usize) -> usize {
        self.part1.iter().position(|p| p.contains(&a)).expect("validated partition")
    }

    pub fn part_of2(&self, b: usize) -> usize {
        self.part2.iter().position(|p| p.contains(&b)).expect("validated partition")
    }

    /// Whether a perfect matching exists in which no two edges join the same pair of parts.
    pub fn has_consistent_perfect_matching(&self) -> bool {
        if self.n1 != self.n2 {
            return false;
        }
        let mut used_right = vec![false; self.n2];
        let mut used_parts = BTreeSet::new();
        self.match_from(0, &mut used_right, &mut used_parts)
    }

    fn match_from(&self, a: usize, used_right: &mut [bool], used_parts: &mut BTreeSet<(usize, usize)>) -> bool {
        if a == self.n1 {
            return true;
        }
        for &(x, b) in &self.edges {
            if x != a || used_right[b] {
                continue;
            }
            let key = (self.part_of1(a), self.part_of2(b));
            if used_parts.contains(&key) {
                continue;
            }
            used_right[b] = true;
            used_parts.insert(key);
            let ok = self.match_from(a + 1, used_right, used_parts);
            used_right[b] = false;
            used_parts.remove(&key);
            if ok {
                return true;
            }
        }
        false
    }
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteInput, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::new(0, "empty input, expected `bipartite` header"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("bipartite") {
        return Err(ParseError::new(hl, "expected `bipartite n1=<int> n2=<int>`"));
    }
    let n1 = keyed(hl, tok.next(), "n1")?;
    let n2 = keyed(hl, tok.next(), "n2")?;
    expect_end(hl, tok)?;
    let mut input = BipartiteInput { n1, n2, edges: Vec::new(), part1: Vec::new(), part2: Vec::new() };
    let mut last = hl;
    for (ln, l) in lines {
        last = ln;
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("edge") => {
                let a: usize = number(ln, tok.next(), "left vertex")?;
                let b: usize = number(ln, tok.next(), "right vertex")?;
                expect_end(ln, tok)?;
                if a >= n1 || b >= n2 {
                    return Err(ParseError::new(ln, format!("edge ({a}, {b}) out of range")));
                }
                input.edges.push((a, b));
            }
            Some(which @ ("part1" | "part2")) => {
                let part = tok.map(|t| number(ln, Some(t), "vertex")).collect::<Result<Vec<usize>, _>>()?;
                if which == "part1" { &mut input.part1 } else { &mut input.part2 }.push(part);
            }
            _ => return Err(ParseError::new(ln, format!("unknown directive `{l}`"))),
        }
    }
    input.validate().map_err(|e| ParseError::new(last, e.to_string()))?;
    Ok(input)
}

pub fn write_bipartite(b: &BipartiteInput) -> String {
    let mut out = format!("bipartite n1={} n2={}\n", b.n1, b.n2);
    for (x, y) in &b.edges {
        let _ = writeln!(out, "edge {x} {y}");
    }
    for (tag, parts) in [("part1", &b.part1), ("part2", &b.part2)] {
        for p in parts {
            let _ = writeln!(out, "{tag} {}", p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
        }
    }
    out
}

/// CNF with literals as signed 1-based variable numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Formula {
    /// Three literals per clause and every literal exactly twice, counting repeats.
    pub fn validate_two_two(&self) -> Result<(), ReductionError> {
        let mut count = vec![[0usize; 2]; self.vars];
        for (i, c) in self.clauses.iter().enumerate() {
            if c.len() != 3 {
                return Err(ReductionError::NotTwoTwo(format!("clause {i} has {} literals", c.len())));
            }
            for &l in c {
                let v = l.unsigned_abs() as usize;
                if l == 0 || v > self.vars {
                    return Err(ReductionError::NotTwoTwo(format!("literal {l} out of range")));
                }
                count[v - 1][usize::from(l < 0)] += 1;
            }
        }
        match count.iter().enumerate().find(|(_, c)| **c != [2, 2]) {
            Some((v, c)) => Err(ReductionError::NotTwoTwo(format!("variable {} occurs {}/{} times", v + 1, c[0], c[1]))),
            None => Ok(()),
        }
    }

    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| (assignment >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
    }

    /// Tries all assignments.
    pub fn brute_force_satisfiable(&self) -> bool {
        assert!(self.vars < 24, "brute force only for tiny formulas");
        (0..1u64 << self.vars).any(|a| self.satisfied_by(a))
    }
}

pub fn parse_dimacs(text: &str) -> Result<Formula, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') || l.starts_with('#') {
            continue;
        }
        last = ln;
        if let Some(rest) = l.strip_prefix('p') {
            let mut tok = rest.split_whitespace();
            if tok.next() != Some("cnf") || header.is_some() {
                return Err(ParseError::new(ln, "expected a single `p cnf <vars> <clauses>` line"));
            }
            let vars = number(ln, tok.next(), "variable count")?;
            let count = number(ln, tok.next(), "clause count")?;
            expect_end(ln, tok)?;
            header = Some((vars, count, ln));
            continue;
        }
        let (vars, _, _) = header.ok_or_else(|| ParseError::new(ln, "clause before the `p cnf` line"))?;
        for t in l.split_whitespace() {
            let lit: i32 = number(ln, Some(t), "literal")?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(ParseError::new(ln, format!("literal {lit} exceeds {vars} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let (vars, count, hl) = header.ok_or_else(|| ParseError::new(0, "missing `p cnf` line"))?;
    if !current.is_empty() {
        return Err(ParseError::new(last, "last clause is not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(ParseError::new(hl, format!("header promises {count} clauses, found {}", clauses.len())));
    }
    Ok(Formula { vars, clauses })
}

pub fn write_dimacs(f: &Formula) -> String {
    let mut out = format!("p cnf {} {}\n", f.vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

/// A graph, two terminals and pairs of edges of which a path may use at most one each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntidirectedInput {
    pub graph: UndirectedGraph,
    pub s: usize,
    pub t: usize,
    pub pairs: Vec<((usize, usize), (usize, usize))>,
}

fn norm((u, v): (usize, usize)) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl AntidirectedInput {
    pub fn validate(&self) -> Result<(), ReductionError> {
        let g = &self.graph;
        if self.s >= g.n() || self.t >= g.n() || self.s == self.t {
            return Err(ReductionError::BadPairs("terminals must be distinct vertices".into()));
        }
        if self.pairs.is_empty() {
            return Err(ReductionError::BadPairs("at least one pair is needed".into()));
        }
        let mut seen = BTreeSet::new();
        for &(e, f) in &self.pairs {
            let (e, f) = (norm(e), norm(f));
            if !g.has_edge(e.0, e.1) || !g.has_edge(f.0, f.1) {
                return Err(ReductionError::BadPairs(format!("{e:?} or {f:?} is not an edge")));
            }
            if e == f || !seen.insert((e.min(f), e.max(f))) {
                return Err(ReductionError::BadPairs(format!("pair {e:?} {f:?} is degenerate or repeated")));
            }
        }
        Ok(())
    }

    /// Whether some simple `s`-`t` path uses at most one edge of every pair.
    pub fn has_pair_avoiding_path(&self) -> bool {
        let mut on = vec![false; self.graph.n()];
        let mut used = Vec::new();
        on[self.s] = true;
        self.walk(self.s, &mut on, &mut used)
    }

    fn walk(&self, u: usize, on: &mut [bool], used: &mut Vec<(usize, usize)>) -> bool {
        if u == self.t {
            return true;
        }
        for &(a, b) in self.graph.edges() {
            let w = match (a == u, b == u) {
                (true, _) => b,
                (_, true) => a,
                _ => continue,
            };
            if on[w] {
                continue;
            }
            let e = (a, b);
            let clash = self.pairs.iter().any(|&(x, y)| {
                let (x, y) = (norm(x), norm(y));
                (x == e && used.contains(&y)) || (y == e && used.contains(&x))
            });
            if clash {
                continue;
            }
            on[w] = true;
            used.push(e);
            let ok = self.walk(w, on, used);
            used.pop();
            on[w] = false;
            if ok {
                return true;
            }
        }
        false
    }
}

/// An undirected graph followed by `terminals s t` and `pair u1 v1 u2 v2` lines.
pub fn parse_antidirected_input(text: &str) -> Result<AntidirectedInput, ParseError> {
    let mut graph_part = String::new();
    let mut extra = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let t = l.trim();
        if t.starts_with("terminals") || t.starts_with("pair") {
            extra.push((i + 1, t));
            graph_part.push('\n');
        } else {
            graph_part.push_str(l);
            graph_part.push('\n');
        }
    }
    let graph = parse_undirected(&graph_part)?;
    let mut terminals = None;
    let mut pairs = Vec::new();
    let mut last = 0;
    for (ln, l) in extra {
        last = ln;
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("terminals") => {
                let s: usize = number(ln, tok.next(), "s")?;
                let t: usize = number(ln, tok.next(), "t")?;
                expect_end(ln, tok)?;
                terminals = Some((s, t));
            }
            _ => {
                let mut n = || number::<usize>(ln, tok.next(), "pair vertex");
                let p = ((n()?, n()?), (n()?, n()?));
                expect_end(ln, tok)?;
                pairs.push(p);
            }
        }
    }
    let (s, t) = terminals.ok_or_else(|| ParseError::new(last, "missing `terminals s t` line"))?;
    let input = AntidirectedInput { graph, s, t, pairs };
    input.validate().map_err(|e| ParseError::new(last, e.to_string()))?;
    Ok(input)
}

pub fn write_antidirected_input(a: &AntidirectedInput) -> String {
    let mut out = write_undirected(&a.graph);
    let _ = writeln!(out, "terminals {} {}", a.s, a.t);
    for ((a1, b1), (a2, b2)) in &a.pairs {
        let _ = writeln!(out, "pair {a1} {b1} {a2} {b2}");
    }
    out
}
