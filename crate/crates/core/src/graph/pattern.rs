//! Stars-paths patterns: `k` stars whose centers are joined by directed paths.

use super::io::{content_lines, expect_end, keyed, number, ParseError};
use super::{vid, Digraph, DigraphBuilder, VertexId};
use std::collections::HashSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Out,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct StarShape {
    pub out_leaves: usize,
    pub in_leaves: usize,
}

impl StarShape {
    pub fn new(out_leaves: usize, in_leaves: usize) -> Self {
        StarShape { out_leaves, in_leaves }
    }

    pub fn leaves(&self) -> usize {
        self.out_leaves + self.in_leaves
    }
}

/// A directed path from the center of star `from` to the center of star `to`.
/// `vertex_count` is the length of its vertex sequence, so a cycle through a single
/// center counts that center twice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternPath {
    pub from: usize,
    pub to: usize,
    pub vertex_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern needs at least one star")]
    NoStars,
    #[error("path {0} refers to a missing star")]
    BadStarIndex(usize),
    #[error("path {0} is too short")]
    PathTooShort(usize),
    #[error("paths {0} and {1} would both be the same single arc")]
    ParallelArcs(usize, usize),
    #[error("expected {expected} roots, found {found}")]
    RootCount { expected: usize, found: usize },
    #[error("root {0} repeated")]
    DuplicateRoot(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarsPathsPattern {
    stars: Vec<StarShape>,
    paths: Vec<PatternPath>,
    roots: Option<Vec<VertexId>>,
}

/// Where each pattern element sits in the digraph produced by [`StarsPathsPattern::to_digraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternLayout {
    pub centers: Vec<VertexId>,
    /// Per star: out-leaves then in-leaves.
    pub leaves: Vec<Vec<VertexId>>,
    /// Per path: full vertex sequence including both centers.
    pub paths: Vec<Vec<VertexId>>,
}

impl StarsPathsPattern {
    pub fn new(
        stars: Vec<StarShape>,
        paths: Vec<PatternPath>,
        roots: Option<Vec<VertexId>>,
    ) -> Result<Self, PatternError> {
        if stars.is_empty() {
            return Err(PatternError::NoStars);
        }
        let mut direct: Vec<((usize, usize), usize)> = Vec::new();
        for (i, p) in paths.iter().enumerate() {
            if p.from >= stars.len() || p.to >= stars.len() {
                return Err(PatternError::BadStarIndex(i));
            }
            let min = if p.from == p.to { 3 } else { 2 };
            if p.vertex_count < min {
                return Err(PatternError::PathTooShort(i));
            }
            if p.vertex_count == 2 {
                if let Some(&(_, j)) = direct.iter().find(|(e, _)| *e == (p.from, p.to)) {
                    return Err(PatternError::ParallelArcs(j, i));
                }
                direct.push(((p.from, p.to), i));
            }
        }
        if let Some(r) = &roots {
            if r.len() != stars.len() {
                return Err(PatternError::RootCount { expected: stars.len(), found: r.len() });
            }
            let mut seen = HashSet::new();
            if let Some(&dup) = r.iter().find(|&&v| !seen.insert(v)) {
                return Err(PatternError::DuplicateRoot(dup));
            }
        }
        Ok(StarsPathsPattern { stars, paths, roots })
    }

    /// `l` pairwise disjoint arcs, as `l` single-leaf out-stars. Needs `l >= 1`.
    pub fn disjoint_arcs(l: usize) -> Result<Self, PatternError> {
        StarsPathsPattern::new(vec![StarShape::new(1, 0); l], vec![], None)
    }

    /// The `l`-star with every arc subdivided once: a leafless star 0 joined by single
    /// arcs to `l` single-leaf stars.
    pub fn once_subdivided_star(l: usize, orientation: Orientation) -> Self {
        let mut stars = vec![StarShape::default()];
        let mut paths = Vec::new();
        for i in 1..=l {
            match orientation {
                Orientation::Out => {
                    stars.push(StarShape::new(1, 0));
                    paths.push(PatternPath { from: 0, to: i, vertex_count: 2 });
                }
                Orientation::In => {
                    stars.push(StarShape::new(0, 1));
                    paths.push(PatternPath { from: i, to: 0, vertex_count: 2 });
                }
            }
        }
        StarsPathsPattern { stars, paths, roots: None }
    }

    pub fn k(&self) -> usize {
        self.stars.len()
    }

    pub fn stars(&self) -> &[StarShape] {
        &self.stars
    }

    pub fn paths(&self) -> &[PatternPath] {
        &self.paths
    }

    pub fn roots(&self) -> Option<&[VertexId]> {
        self.roots.as_deref()
    }

    pub fn with_roots(&self, roots: Vec<VertexId>) -> Result<Self, PatternError> {
        StarsPathsPattern::new(self.stars.clone(), self.paths.clone(), Some(roots))
    }

    pub fn without_roots(&self) -> Self {
        StarsPathsPattern { roots: None, ..self.clone() }
    }

    pub fn vertex_count(&self) -> usize {
        self.k()
            + self.stars.iter().map(StarShape::leaves).sum::<usize>()
            + self.paths.iter().map(|p| interior_len(p)).sum::<usize>()
    }

    /// The pattern as a concrete digraph: centers first, then leaves star by star,
    /// then path interiors path by path.
    pub fn to_digraph(&self) -> (Digraph, PatternLayout) {
        let k = self.k();
        let mut b = DigraphBuilder::new(k);
        let centers: Vec<VertexId> = (0..k).map(vid).collect();
        let mut leaves = Vec::with_capacity(k);
        for (i, s) in self.stars.iter().enumerate() {
            let mut ls = Vec::with_capacity(s.leaves());
            for _ in 0..s.out_leaves {
                let x = b.add_vertex();
                b.add_arc(centers[i], x);
                ls.push(x);
            }
            for _ in 0..s.in_leaves {
                let x = b.add_vertex();
                b.add_arc(x, centers[i]);
                ls.push(x);
            }
            leaves.push(ls);
        }
        let mut paths = Vec::with_capacity(self.paths.len());
        for p in &self.paths {
            let mut seq = vec![centers[p.from]];
            for _ in 0..interior_len(p) {
                seq.push(b.add_vertex());
            }
            seq.push(centers[p.to]);
            for w in seq.windows(2) {
                b.add_arc(w[0], w[1]);
            }
            paths.push(seq);
        }
        (b.build(), PatternLayout { centers, leaves, paths })
    }
}

fn interior_len(p: &PatternPath) -> usize {
    p.vertex_count - 2
}

/// A placement of a pattern in a host.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Embedding {
    pub star_centers: Vec<VertexId>,
    /// Per star: out-leaves then in-leaves.
    pub star_leaves: Vec<Vec<VertexId>>,
    /// Per path: full vertex sequence including both centers.
    pub path_vertices: Vec<Vec<VertexId>>,
}

impl Embedding {
    /// Reads an embedding off a vertex map from the pattern digraph.
    pub fn from_map(layout: &PatternLayout, map: &[VertexId]) -> Self {
        let m = |v: &VertexId| map[v.index()];
        Embedding {
            star_centers: layout.centers.iter().map(m).collect(),
            star_leaves: layout.leaves.iter().map(|l| l.iter().map(m).collect()).collect(),
            path_vertices: layout.paths.iter().map(|p| p.iter().map(m).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("embedding shape does not match the pattern")]
    ShapeMismatch,
    #[error("vertex {0} is not a host vertex")]
    BadVertex(VertexId),
    #[error("vertex {0} is used twice")]
    Reused(VertexId),
    #[error("arc {0} -> {1} missing from host")]
    MissingArc(VertexId, VertexId),
    #[error("path {0} does not join the right centers")]
    WrongEndpoints(usize),
    #[error("star {0} is not at its root")]
    RootMismatch(usize),
}

/// Checks that `emb` places `pattern` in `host` as a subdigraph.
pub fn validate_embedding(host: &Digraph, pattern: &StarsPathsPattern, emb: &Embedding) -> Result<(), EmbeddingError> {
    let k = pattern.k();
    if emb.star_centers.len() != k || emb.star_leaves.len() != k || emb.path_vertices.len() != pattern.paths.len() {
        return Err(EmbeddingError::ShapeMismatch);
    }
    let mut used = vec![false; host.n()];
    let mut claim = |v: VertexId| -> Result<(), EmbeddingError> {
        host.check_vertex(v).map_err(|_| EmbeddingError::BadVertex(v))?;
        if std::mem::replace(&mut used[v.index()], true) {
            return Err(EmbeddingError::Reused(v));
        }
        Ok(())
    };
    for (i, s) in pattern.stars.iter().enumerate() {
        let c = emb.star_centers[i];
        claim(c)?;
        if let Some(r) = pattern.roots() {
            if r[i] != c {
                return Err(EmbeddingError::RootMismatch(i));
            }
        }
        let ls = &emb.star_leaves[i];
        if ls.len() != s.leaves() {
            return Err(EmbeddingError::ShapeMismatch);
        }
        for (j, &x) in ls.iter().enumerate() {
            claim(x)?;
            let (u, v) = if j < s.out_leaves { (c, x) } else { (x, c) };
            if !host.has_arc(u, v) {
                return Err(EmbeddingError::MissingArc(u, v));
            }
        }
    }
    for (i, (p, seq)) in pattern.paths.iter().zip(&emb.path_vertices).enumerate() {
        if seq.len() != p.vertex_count {
            return Err(EmbeddingError::ShapeMismatch);
        }
        if seq[0] != emb.star_centers[p.from] || seq[seq.len() - 1] != emb.star_centers[p.to] {
            return Err(EmbeddingError::WrongEndpoints(i));
        }
        for &x in &seq[1..seq.len() - 1] {
            claim(x)?;
        }
        for w in seq.windows(2) {
            if !host.has_arc(w[0], w[1]) {
                return Err(EmbeddingError::MissingArc(w[0], w[1]));
            }
        }
    }
    Ok(())
}

pub fn parse_pattern(text: &str) -> Result<StarsPathsPattern, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::new(0, "empty input, expected `pattern` header"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("pattern") {
        return Err(ParseError::new(hl, "expected `pattern k=<int>`"));
    }
    let k: usize = keyed(hl, tok.next(), "k")?;
    expect_end(hl, tok)?;
    let mut stars: Vec<Option<StarShape>> = vec![None; k];
    let mut paths = Vec::new();
    let mut roots = None;
    let mut last = hl;
    for (ln, l) in lines {
        last = ln;
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("star") => {
                let i: usize = number(ln, tok.next(), "star index")?;
                let out_leaves = keyed(ln, tok.next(), "out")?;
                let in_leaves = keyed(ln, tok.next(), "in")?;
                expect_end(ln, tok)?;
                let slot = stars.get_mut(i).ok_or_else(|| ParseError::new(ln, format!("star index {i} ≥ k")))?;
                if slot.replace(StarShape { out_leaves, in_leaves }).is_some() {
                    return Err(ParseError::new(ln, format!("star {i} declared twice")));
                }
            }
            Some("path") => {
                let from = number(ln, tok.next(), "path source")?;
                let to = number(ln, tok.next(), "path target")?;
                let vertex_count = keyed(ln, tok.next(), "len")?;
                expect_end(ln, tok)?;
                paths.push(PatternPath { from, to, vertex_count });
                StarsPathsPattern::new(vec![StarShape::default(); k.max(1)], paths.clone(), None)
                    .map_err(|e| ParseError::new(ln, e.to_string()))?;
            }
            Some("roots") => {
                if roots.is_some() {
                    return Err(ParseError::new(ln, "roots given twice"));
                }
                let r: Result<Vec<VertexId>, ParseError> =
                    tok.map(|t| number::<usize>(ln, Some(t), "root").map(vid)).collect();
                roots = Some(r?);
            }
            _ => return Err(ParseError::new(ln, format!("unknown directive `{l}`"))),
        }
    }
    let stars: Vec<StarShape> = stars
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| ParseError::new(last, format!("star {i} never declared"))))
        .collect::<Result<_, _>>()?;
    StarsPathsPattern::new(stars, paths, roots).map_err(|e| ParseError::new(last, e.to_string()))
}

pub fn write_pattern(p: &StarsPathsPattern) -> String {
    let mut out = format!("pattern k={}\n", p.k());
    for (i, s) in p.stars.iter().enumerate() {
        let _ = writeln!(out, "star {i} out={} in={}", s.out_leaves, s.in_leaves);
    }
    for q in &p.paths {
        let _ = writeln!(out, "path {} {} len={}", q.from, q.to, q.vertex_count);
    }
    if let Some(r) = &p.roots {
        out.push_str("roots");
        for v in r {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}
