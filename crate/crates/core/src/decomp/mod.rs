//! Arboreal decompositions and guarded sets.

mod search;

pub use search::{breakability, dtw_upper_small, subdigraph_breakability, DtwBound};

use crate::graph::{
    io_helpers::{content_lines, expect_end, keyed, number},
    strong_components, topological_order, vid, Digraph, GraphError, ParseError, VertexId,
};
use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("guarded set and guard overlap")]
    OverlappingSets,
    #[error("bags do not partition the vertex set: {0}")]
    NotAPartition(String),
    #[error("guard of tree arc {}->{} is violated by walk {:?}", .edge.0, .edge.1, .certificate.violating_walk)]
    GuardViolation { edge: (usize, usize), certificate: GuardCertificate },
    #[error("not a rooted tree: {0}")]
    BadTree(String),
    #[error("digraph is not acyclic")]
    NotADag,
    #[error("instance too large for exhaustive search")]
    TooLarge,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Outcome of a guardedness check. A walk is present exactly when the set is not guarded.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GuardCertificate {
    pub violating_walk: Option<Vec<VertexId>>,
}

impl GuardCertificate {
    pub fn holds(&self) -> bool {
        self.violating_walk.is_none()
    }
}

/// Whether no walk in `d - z` starts and ends in `s` while visiting a vertex outside `s ∪ z`.
pub fn is_guarded(d: &Digraph, s: &BTreeSet<VertexId>, z: &BTreeSet<VertexId>) -> Result<GuardCertificate, DecompError> {
    for &v in s.iter().chain(z) {
        d.check_vertex(v)?;
    }
    if s.intersection(z).next().is_some() {
        return Err(DecompError::OverlappingSets);
    }
    let sources: Vec<VertexId> = s.iter().copied().collect();
    let fwd = bfs_parents(d, &sources, z, false);
    let bwd = bfs_parents(d, &sources, z, true);
    let Some(t) = d
        .vertices()
        .find(|v| !s.contains(v) && !z.contains(v) && fwd[v.index()].is_some() && bwd[v.index()].is_some())
    else {
        return Ok(GuardCertificate::default());
    };
    // Parent chains end at the first set vertex met, so interiors lie outside `s`.
    let mut walk = vec![t];
    let mut cur = t;
    while let Some(p) = fwd[cur.index()].filter(|&p| p != cur) {
        walk.push(p);
        cur = p;
    }
    walk.reverse();
    let mut cur = t;
    while let Some(p) = bwd[cur.index()].filter(|&p| p != cur) {
        walk.push(p);
        cur = p;
    }
    Ok(GuardCertificate { violating_walk: Some(walk) })
}

/// BFS from `sources` avoiding `blocked`; each reached vertex stores its predecessor,
/// sources store themselves.
fn bfs_parents(d: &Digraph, sources: &[VertexId], blocked: &BTreeSet<VertexId>, backward: bool) -> Vec<Option<VertexId>> {
    let mut parent = vec![None; d.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        parent[s.index()] = Some(s);
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let next = if backward { d.in_neighbors(u) } else { d.out_neighbors(u) };
        for &w in next {
            if parent[w.index()].is_none() && !blocked.contains(&w) {
                parent[w.index()] = Some(u);
                queue.push_back(w);
            }
        }
    }
    parent
}

/// A rooted tree of bags with a guard on every tree arc. Nodes are `0..node_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArborealDecomposition {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    bags: Vec<Vec<VertexId>>,
    /// Guard of the tree arc entering each node; empty for the root.
    guards: Vec<Vec<VertexId>>,
}

impl ArborealDecomposition {
    /// `edges` are `(parent, child, guard)`. Bags and guards are stored sorted.
    pub fn new(
        root: usize,
        bags: Vec<Vec<VertexId>>,
        edges: Vec<(usize, usize, Vec<VertexId>)>,
    ) -> Result<Self, DecompError> {
        let t = bags.len();
        if root >= t {
            return Err(DecompError::BadTree(format!("root {root} out of range")));
        }
        let mut parent = vec![None; t];
        let mut children = vec![Vec::new(); t];
        let mut guards = vec![Vec::new(); t];
        for (p, c, mut g) in edges {
            if p >= t || c >= t {
                return Err(DecompError::BadTree(format!("edge {p}->{c} out of range")));
            }
            if c == root || parent[c].is_some() {
                return Err(DecompError::BadTree(format!("node {c} has two parents")));
            }
            parent[c] = Some(p);
            children[p].push(c);
            g.sort_unstable();
            g.dedup();
            guards[c] = g;
        }
        for ch in &mut children {
            ch.sort_unstable();
        }
        let dec = ArborealDecomposition {
            root,
            parent,
            children,
            bags: bags.into_iter().map(|mut b| {
                b.sort_unstable();
                b
            }).collect(),
            guards,
        };
        if dec.preorder().len() != t {
            return Err(DecompError::BadTree("not every node hangs below the root".into()));
        }
        Ok(dec)
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, r: usize) -> Option<usize> {
        self.parent[r]
    }

    pub fn children(&self, r: usize) -> &[usize] {
        &self.children[r]
    }

    pub fn bag(&self, r: usize) -> &[VertexId] {
        &self.bags[r]
    }

    /// Guard on the tree arc from the parent of `r` into `r`.
    pub fn guard(&self, r: usize) -> &[VertexId] {
        &self.guards[r]
    }

    /// Tree arcs as `(parent, child)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).filter_map(|c| self.parent[c].map(|p| (p, c)))
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.node_count());
        if self.node_count() == 0 {
            return order;
        }
        let mut stack = vec![self.root];
        let mut seen = vec![false; self.node_count()];
        while let Some(r) = stack.pop() {
            if std::mem::replace(&mut seen[r], true) {
                continue;
            }
            order.push(r);
            stack.extend(self.children[r].iter().rev());
        }
        order
    }

    /// For each node, the union of bags in its subtree.
    pub fn below_sets(&self) -> Vec<BTreeSet<VertexId>> {
        let mut below: Vec<BTreeSet<VertexId>> = self.bags.iter().map(|b| b.iter().copied().collect()).collect();
        for r in self.preorder().into_iter().rev() {
            if let Some(p) = self.parent[r] {
                let sub = below[r].clone();
                below[p].extend(sub);
            }
        }
        below
    }

    /// `W_r` together with every guard on a tree arc incident to `r`.
    pub fn node_span(&self, r: usize) -> BTreeSet<VertexId> {
        let mut span: BTreeSet<VertexId> = self.bags[r].iter().copied().collect();
        span.extend(self.guards[r].iter().copied());
        for &c in &self.children[r] {
            span.extend(self.guards[c].iter().copied());
        }
        span
    }

    pub fn width(&self) -> usize {
        (0..self.node_count()).map(|r| self.node_span(r).len()).max().unwrap_or(1).saturating_sub(1)
    }
}

/// Checks the partition property and that every below-set minus its guard is guarded by it.
/// Returns the width on success.
pub fn validate(d: &Digraph, dec: &ArborealDecomposition) -> Result<usize, DecompError> {
    let mut owner = vec![None; d.n()];
    for r in 0..dec.node_count() {
        if dec.bag(r).is_empty() {
            return Err(DecompError::NotAPartition(format!("bag {r} is empty")));
        }
        for &v in dec.bag(r).iter().chain(dec.guard(r)) {
            d.check_vertex(v)?;
        }
        for &v in dec.bag(r) {
            if let Some(o) = owner[v.index()].replace(r) {
                return Err(DecompError::NotAPartition(format!("vertex {v} in bags {o} and {r}")));
            }
        }
    }
    if let Some(v) = owner.iter().position(Option::is_none) {
        return Err(DecompError::NotAPartition(format!("vertex {v} in no bag")));
    }
    let below = dec.below_sets();
    for (p, c) in dec.edges() {
        let z: BTreeSet<VertexId> = dec.guard(c).iter().copied().collect();
        let s: BTreeSet<VertexId> = below[c].difference(&z).copied().collect();
        let cert = is_guarded(d, &s, &z)?;
        if !cert.holds() {
            return Err(DecompError::GuardViolation { edge: (p, c), certificate: cert });
        }
    }
    Ok(dec.width())
}

fn chain(bags: Vec<Vec<VertexId>>) -> ArborealDecomposition {
    let edges = (1..bags.len()).map(|i| (i - 1, i, Vec::new())).collect();
    ArborealDecomposition::new(0, bags, edges).expect("a chain is a rooted tree")
}

/// A path of singleton bags along a topological order, all guards empty.
pub fn dag_decomposition(d: &Digraph) -> Result<ArborealDecomposition, DecompError> {
    let order = topological_order(d).map_err(|_| DecompError::NotADag)?;
    if d.has_loops() {
        return Err(DecompError::NotADag);
    }
    Ok(chain(order.into_iter().map(|v| vec![v]).collect()))
}

/// A path over the strong components in topological order, all guards empty.
/// Valid for every digraph; its width is the largest component size minus one.
pub fn condensation_decomposition(d: &Digraph) -> ArborealDecomposition {
    if d.n() == 0 {
        return ArborealDecomposition { root: 0, parent: vec![], children: vec![], bags: vec![], guards: vec![] };
    }
    chain(strong_components(d))
}

pub fn parse_decomposition(text: &str) -> Result<ArborealDecomposition, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::new(0, "empty input, expected `arboreal` header"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("arboreal") {
        return Err(ParseError::new(hl, "expected `arboreal nodes=<t> root=<id>`"));
    }
    let t: usize = keyed(hl, tok.next(), "nodes")?;
    let root: usize = keyed(hl, tok.next(), "root")?;
    expect_end(hl, tok)?;
    let mut bags: Vec<Option<Vec<VertexId>>> = vec![None; t];
    let mut edges = Vec::new();
    let mut last = hl;
    let ids = |ln: usize, toks: &mut dyn Iterator<Item = &str>| -> Result<Vec<VertexId>, ParseError> {
        toks.map(|s| number::<usize>(ln, Some(s), "vertex").map(vid)).collect()
    };
    for (ln, l) in lines {
        last = ln;
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("bag") => {
                let r: usize = number(ln, tok.next(), "node id")?;
                let vs = ids(ln, &mut tok)?;
                let slot = bags.get_mut(r).ok_or_else(|| ParseError::new(ln, format!("node {r} ≥ nodes")))?;
                if slot.replace(vs).is_some() {
                    return Err(ParseError::new(ln, format!("bag {r} given twice")));
                }
            }
            Some("edge") => {
                let p: usize = number(ln, tok.next(), "parent")?;
                let c: usize = number(ln, tok.next(), "child")?;
                if tok.next() != Some("guard") {
                    return Err(ParseError::new(ln, "expected `guard` after edge endpoints"));
                }
                edges.push((p, c, ids(ln, &mut tok)?));
                if p >= t || c >= t {
                    return Err(ParseError::new(ln, "edge endpoint out of range"));
                }
            }
            _ => return Err(ParseError::new(ln, format!("unknown directive `{l}`"))),
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| ParseError::new(last, format!("bag {i} missing"))))
        .collect::<Result<Vec<_>, _>>()?;
    ArborealDecomposition::new(root, bags, edges).map_err(|e| ParseError::new(last, e.to_string()))
}

pub fn write_decomposition(dec: &ArborealDecomposition) -> String {
    let mut out = format!("arboreal nodes={} root={}\n", dec.node_count(), dec.root);
    for (r, b) in dec.bags.iter().enumerate() {
        let _ = write!(out, "bag {r}");
        for v in b {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    let mut edges: Vec<(usize, usize)> = dec.edges().collect();
    edges.sort_unstable();
    for (p, c) in edges {
        let _ = write!(out, "edge {p} {c} guard");
        for v in &dec.guards[c] {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// The width-two decomposition of the running example: `{a}` at the root with children
/// `{b,c}`, which in turn has children `{d,e}` and `{f,g}`.
pub fn running_example_decomposition() -> ArborealDecomposition {
    let v = |xs: &[usize]| xs.iter().map(|&x| vid(x)).collect::<Vec<_>>();
    ArborealDecomposition::new(
        0,
        vec![v(&[0]), v(&[1, 2]), v(&[3, 4]), v(&[5, 6])],
        vec![(0, 1, v(&[1, 2])), (1, 2, v(&[1])), (1, 3, v(&[2]))],
    )
    .expect("fixed tree")
}
