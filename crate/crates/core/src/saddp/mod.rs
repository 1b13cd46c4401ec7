//! Disjoint paths of prescribed sizes, each avoid set touched a bounded number of times.
//!
//! Path size is the length of the vertex sequence, so a request from a vertex back to
//! itself asks for a cycle and counts that vertex twice. Paths may share a vertex only
//! when it is an endpoint of each of them; interiors avoid every terminal. Avoid-set usage
//! counts distinct vertices of the union of all paths.

mod engine;
mod oracle;
mod solve;

pub use oracle::oracle_saddp;
pub use solve::{saddp_frontier, solve_saddp, Itinerary, ItineraryEngine};

use crate::decomp::DecompError;
use crate::graph::{
    io_helpers::{content_lines, expect_end, keyed, number},
    vid, Digraph, ParseError, VertexId,
};
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Request {
    pub source: VertexId,
    pub target: VertexId,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoidSet {
    pub vertices: BTreeSet<VertexId>,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaddpError {
    #[error("request {0} is degenerate")]
    BadRequest(usize),
    #[error("vertex {0} out of range")]
    BadVertex(VertexId),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(DecompError),
    #[error("instance too large")]
    TooLarge,
    #[error("an arc leads from the second set back into the first")]
    ArcFromBToA,
    #[error("the combined vertex sets overlap")]
    Overlapping,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaddpInstance {
    pub digraph: Digraph,
    pub requests: Vec<Request>,
    pub avoid_sets: Vec<AvoidSet>,
}

impl SaddpInstance {
    pub fn new(digraph: Digraph, requests: Vec<Request>, avoid_sets: Vec<AvoidSet>) -> Result<Self, SaddpError> {
        for (i, r) in requests.iter().enumerate() {
            for v in [r.source, r.target] {
                digraph.check_vertex(v).map_err(|_| SaddpError::BadVertex(v))?;
            }
            let min = if r.source == r.target { 3 } else { 2 };
            if r.size < min {
                return Err(SaddpError::BadRequest(i));
            }
        }
        for s in &avoid_sets {
            for &v in &s.vertices {
                digraph.check_vertex(v).map_err(|_| SaddpError::BadVertex(v))?;
            }
        }
        Ok(SaddpInstance { digraph, requests, avoid_sets })
    }

    pub fn terminals(&self) -> BTreeSet<VertexId> {
        self.requests.iter().flat_map(|r| [r.source, r.target]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathSolution {
    pub paths: Vec<Vec<VertexId>>,
}

impl PathSolution {
    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.paths.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("expected {expected} paths, found {found}")]
    PathCount { expected: usize, found: usize },
    #[error("path {0} has the wrong endpoints")]
    Endpoints(usize),
    #[error("path {0} has the wrong size")]
    Size(usize),
    #[error("path {0} uses a missing arc")]
    MissingArc(usize),
    #[error("path {0} repeats a vertex")]
    NotSimple(usize),
    #[error("vertex {0} is shared illegally")]
    Shared(VertexId),
    #[error("avoid set {0} over budget")]
    OverBudget(usize),
}

/// Independent check of every output property.
pub fn validate_solution(inst: &SaddpInstance, sol: &PathSolution) -> Result<(), SolutionError> {
    if sol.paths.len() != inst.requests.len() {
        return Err(SolutionError::PathCount { expected: inst.requests.len(), found: sol.paths.len() });
    }
    // Vertex -> list of (path, is endpoint).
    let mut seen: HashMap<VertexId, Vec<(usize, bool)>> = HashMap::new();
    for (i, (r, p)) in inst.requests.iter().zip(&sol.paths).enumerate() {
        if p.first() != Some(&r.source) || p.last() != Some(&r.target) {
            return Err(SolutionError::Endpoints(i));
        }
        if p.len() != r.size {
            return Err(SolutionError::Size(i));
        }
        if !p.windows(2).all(|w| inst.digraph.has_arc(w[0], w[1])) {
            return Err(SolutionError::MissingArc(i));
        }
        let body = if r.source == r.target { &p[..p.len() - 1] } else { &p[..] };
        let distinct: BTreeSet<&VertexId> = body.iter().collect();
        if distinct.len() != body.len() {
            return Err(SolutionError::NotSimple(i));
        }
        for (pos, &v) in body.iter().enumerate() {
            let end = pos == 0 || (r.source != r.target && pos == body.len() - 1);
            seen.entry(v).or_default().push((i, end));
        }
    }
    let mut keys: Vec<&VertexId> = seen.keys().collect();
    keys.sort();
    for v in keys {
        let uses = &seen[v];
        if uses.len() > 1 && !uses.iter().all(|&(_, end)| end) {
            return Err(SolutionError::Shared(*v));
        }
    }
    let all = sol.vertices();
    for (j, s) in inst.avoid_sets.iter().enumerate() {
        if s.vertices.intersection(&all).count() > s.budget {
            return Err(SolutionError::OverBudget(j));
        }
    }
    Ok(())
}

/// Reads the request and avoid-set file for a given digraph.
pub fn parse_saddp(text: &str, digraph: Digraph) -> Result<SaddpInstance, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::new(0, "empty input, expected `saddp` header"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("saddp") {
        return Err(ParseError::new(hl, "expected `saddp r=<int> k=<int>`"));
    }
    let r: usize = keyed(hl, tok.next(), "r")?;
    let k: usize = keyed(hl, tok.next(), "k")?;
    expect_end(hl, tok)?;
    let mut requests = Vec::new();
    let mut sets: Vec<Option<AvoidSet>> = vec![None; k];
    let mut last = hl;
    for (ln, l) in lines {
        last = ln;
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("req") => {
                let source = vid(number(ln, tok.next(), "source")?);
                let target = vid(number(ln, tok.next(), "target")?);
                let size = number(ln, tok.next(), "size")?;
                expect_end(ln, tok)?;
                requests.push(Request { source, target, size });
                SaddpInstance::new(digraph.clone(), requests.clone(), vec![])
                    .map_err(|e| ParseError::new(ln, e.to_string()))?;
            }
            Some("set") => {
                let i: usize = number(ln, tok.next(), "set index")?;
                let budget = keyed(ln, tok.next(), "budget")?;
                if tok.next() != Some(":") {
                    return Err(ParseError::new(ln, "expected `:` before the set members"));
                }
                let vertices: BTreeSet<VertexId> = tok
                    .map(|t| number::<usize>(ln, Some(t), "vertex").map(vid))
                    .collect::<Result<_, _>>()?;
                if let Some(&v) = vertices.iter().find(|v| v.index() >= digraph.n()) {
                    return Err(ParseError::new(ln, format!("vertex {v} out of range")));
                }
                let slot = sets.get_mut(i).ok_or_else(|| ParseError::new(ln, format!("set index {i} ≥ k")))?;
                if slot.replace(AvoidSet { vertices, budget }).is_some() {
                    return Err(ParseError::new(ln, format!("set {i} given twice")));
                }
            }
            _ => return Err(ParseError::new(ln, format!("unknown directive `{l}`"))),
        }
    }
    if requests.len() != r {
        return Err(ParseError::new(last, format!("header promises {r} requests, found {}", requests.len())));
    }
    let avoid_sets = sets
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| ParseError::new(last, format!("set {i} missing"))))
        .collect::<Result<Vec<_>, _>>()?;
    SaddpInstance::new(digraph, requests, avoid_sets).map_err(|e| ParseError::new(last, e.to_string()))
}

pub fn write_saddp(inst: &SaddpInstance) -> String {
    let mut out = format!("saddp r={} k={}\n", inst.requests.len(), inst.avoid_sets.len());
    for r in &inst.requests {
        let _ = writeln!(out, "req {} {} {}", r.source, r.target, r.size);
    }
    for (i, s) in inst.avoid_sets.iter().enumerate() {
        let _ = write!(out, "set {i} budget={} :", s.budget);
        for v in &s.vertices {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;

    fn req(s: usize, t: usize, size: usize) -> Request {
        Request { source: vid(s), target: vid(t), size }
    }

    #[test]
    fn rejects_degenerate_requests() {
        let d = Digraph::from_pairs(2, &[(0, 1)], false).unwrap();
        assert_eq!(SaddpInstance::new(d.clone(), vec![req(0, 0, 2)], vec![]), Err(SaddpError::BadRequest(0)));
        assert_eq!(SaddpInstance::new(d.clone(), vec![req(0, 1, 1)], vec![]), Err(SaddpError::BadRequest(0)));
        assert!(SaddpInstance::new(d, vec![req(0, 0, 3)], vec![]).is_ok());
    }

    #[test]
    fn validator_rules() {
        let d = Digraph::from_pairs(4, &[(0, 1), (1, 2), (0, 3), (3, 2), (2, 0)], false).unwrap();
        let inst = SaddpInstance::new(
            d,
            vec![req(0, 2, 3), req(0, 2, 3)],
            vec![AvoidSet { vertices: vset([1, 3]), budget: 2 }],
        )
        .unwrap();
        let ok = PathSolution { paths: vec![vec![vid(0), vid(1), vid(2)], vec![vid(0), vid(3), vid(2)]] };
        assert_eq!(validate_solution(&inst, &ok), Ok(()));
        let shared = PathSolution { paths: vec![vec![vid(0), vid(1), vid(2)], vec![vid(0), vid(1), vid(2)]] };
        assert_eq!(validate_solution(&inst, &shared), Err(SolutionError::Shared(vid(1))));
        let mut tight = inst.clone();
        tight.avoid_sets[0].budget = 1;
        assert_eq!(validate_solution(&tight, &ok), Err(SolutionError::OverBudget(0)));
        let cyc = SaddpInstance::new(inst.digraph.clone(), vec![req(0, 0, 4)], vec![]).unwrap();
        let c = PathSolution { paths: vec![vec![vid(0), vid(1), vid(2), vid(0)]] };
        assert_eq!(validate_solution(&cyc, &c), Ok(()));
    }

    #[test]
    fn text_round_trip() {
        let d = Digraph::from_pairs(3, &[(0, 1), (1, 2)], false).unwrap();
        let text = "saddp r=1 k=1\nreq 0 2 3\nset 0 budget=1 : 1\n";
        let inst = parse_saddp(text, d.clone()).unwrap();
        assert_eq!(write_saddp(&inst), text);
        let err = parse_saddp("saddp r=1 k=0\nreq 0 0 2\n", d).unwrap_err();
        assert_eq!(err.line, 2);
    }
}
