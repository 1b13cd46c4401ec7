//! Directed graphs, traversal and structural queries.

mod io;
mod matching;
mod oracle;
mod pattern;

pub(crate) mod io_helpers {
    pub(crate) use super::io::{content_lines, expect_end, keyed, number};
}

pub use io::{parse_digraph, parse_undirected, write_digraph, write_undirected, ParseError};
pub use matching::max_matching;
pub use oracle::{find_subdigraph, oracle_find_pattern, OracleError, DEFAULT_ORACLE_CAP};
pub use pattern::{
    parse_pattern, validate_embedding, write_pattern, Embedding, EmbeddingError, Orientation,
    PatternError, PatternLayout, PatternPath, StarShape, StarsPathsPattern,
};

use std::collections::{BTreeSet, BinaryHeap, HashSet, VecDeque};
use std::cmp::Reverse;
use std::fmt;
use thiserror::Error;

/// Index of a vertex. Vertices of an `n`-vertex digraph are `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn new(i: usize) -> Self {
        VertexId(i as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId::new(i)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand used throughout tests and generators.
pub fn vid(i: usize) -> VertexId {
    VertexId::new(i)
}

/// Builds a vertex set from raw indices.
pub fn vset<I: IntoIterator<Item = usize>>(items: I) -> BTreeSet<VertexId> {
    items.into_iter().map(VertexId::new).collect()
}

pub type Arc = (VertexId, VertexId);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(VertexId, VertexId),
    #[error("loop at vertex {0} but loops are not allowed")]
    LoopForbidden(VertexId),
    #[error("vertex {0} out of range for digraph with {1} vertices")]
    BadVertexId(VertexId, usize),
    #[error("digraph contains a directed cycle")]
    NotADag,
    #[error("arc {0} -> {1} not present")]
    ArcNotFound(VertexId, VertexId),
}

/// A finite digraph without parallel arcs. Arcs are kept sorted.
#[derive(Debug, Clone)]
pub struct Digraph {
    n: usize,
    allow_loops: bool,
    arcs: Vec<Arc>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    arc_set: HashSet<Arc>,
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.allow_loops == other.allow_loops && self.arcs == other.arcs
    }
}

impl Eq for Digraph {}

impl Digraph {
    pub fn new(n: usize, arcs: &[Arc], allow_loops: bool) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(arcs.len());
        for &(u, v) in arcs {
            for w in [u, v] {
                if w.index() >= n {
                    return Err(GraphError::BadVertexId(w, n));
                }
            }
            if u == v && !allow_loops {
                return Err(GraphError::LoopForbidden(u));
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateArc(u, v));
            }
        }
        let mut sorted = arcs.to_vec();
        sorted.sort_unstable();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &sorted {
            out_adj[u.index()].push(v);
            in_adj[v.index()].push(u);
        }
        for list in &mut in_adj {
            list.sort_unstable();
        }
        Ok(Digraph { n, allow_loops, arcs: sorted, out_adj, in_adj, arc_set: seen })
    }

    /// Convenience constructor from raw index pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)], allow_loops: bool) -> Result<Self, GraphError> {
        let arcs: Vec<Arc> = pairs.iter().map(|&(u, v)| (vid(u), vid(v))).collect();
        Digraph::new(n, &arcs, allow_loops)
    }

    pub fn empty(n: usize) -> Self {
        Digraph::new(n, &[], false).expect("empty digraph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn allow_loops(&self) -> bool {
        self.allow_loops
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n).map(VertexId::new)
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v.index()]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v.index()]
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.arc_set.contains(&(u, v))
    }

    pub fn has_loop(&self, v: VertexId) -> bool {
        self.has_arc(v, v)
    }

    pub fn has_loops(&self) -> bool {
        self.arcs.iter().any(|&(u, v)| u == v)
    }

    /// Out-degree ignoring a loop at `v`.
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v.index()].len() - usize::from(self.has_loop(v))
    }

    /// In-degree ignoring a loop at `v`.
    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v.index()].len() - usize::from(self.has_loop(v))
    }

    /// Number of distinct neighbours in the underlying undirected graph.
    pub fn total_degree(&self, v: VertexId) -> usize {
        self.undirected_neighbors(v).len()
    }

    pub fn undirected_neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.out_adj[v.index()]
            .iter()
            .chain(self.in_adj[v.index()].iter())
            .copied()
            .filter(|&w| w != v)
            .collect()
    }

    /// Edges of the underlying simple undirected graph, each as `(min, max)`.
    pub fn underlying_edges(&self) -> Vec<(VertexId, VertexId)> {
        let set: BTreeSet<(VertexId, VertexId)> = self
            .arcs
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        set.into_iter().collect()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v.index() < self.n {
            Ok(())
        } else {
            Err(GraphError::BadVertexId(v, self.n))
        }
    }

    /// The subdigraph induced by `keep`, with vertices renumbered in increasing order.
    /// Returns the digraph and the map from new ids to old ids.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> (Digraph, Vec<VertexId>) {
        let old: Vec<VertexId> = keep.iter().copied().collect();
        let mut new_of = vec![None; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_of[v.index()] = Some(vid(i));
        }
        let arcs: Vec<Arc> = self
            .arcs
            .iter()
            .filter_map(|&(u, v)| Some((new_of[u.index()]?, new_of[v.index()]?)))
            .collect();
        let d = Digraph::new(old.len(), &arcs, self.allow_loops).expect("induced subdigraph is valid");
        (d, old)
    }

    /// The digraph with every arc reversed.
    pub fn reversed(&self) -> Digraph {
        let arcs: Vec<Arc> = self.arcs.iter().map(|&(u, v)| (v, u)).collect();
        Digraph::new(self.n, &arcs, self.allow_loops).expect("reversal keeps validity")
    }
}

/// Incremental construction where repeated arcs are merged.
#[derive(Debug, Clone, Default)]
pub struct DigraphBuilder {
    n: usize,
    arcs: BTreeSet<Arc>,
    allow_loops: bool,
}

impl DigraphBuilder {
    pub fn new(n: usize) -> Self {
        DigraphBuilder { n, arcs: BTreeSet::new(), allow_loops: false }
    }

    pub fn from_digraph(d: &Digraph) -> Self {
        DigraphBuilder { n: d.n, arcs: d.arcs.iter().copied().collect(), allow_loops: d.allow_loops }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.n += 1;
        vid(self.n - 1)
    }

    /// Adds the arc if absent. Returns whether it was new.
    pub fn add_arc(&mut self, u: VertexId, v: VertexId) -> bool {
        debug_assert!(u.index() < self.n && v.index() < self.n);
        if u == v {
            self.allow_loops = true;
        }
        self.arcs.insert((u, v))
    }

    pub fn add_bidirected(&mut self, u: VertexId, v: VertexId) {
        self.add_arc(u, v);
        self.add_arc(v, u);
    }

    pub fn remove_arc(&mut self, u: VertexId, v: VertexId) -> bool {
        self.arcs.remove(&(u, v))
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn build(self) -> Digraph {
        let arcs: Vec<Arc> = self.arcs.into_iter().collect();
        Digraph::new(self.n, &arcs, self.allow_loops).expect("builder keeps arcs unique and in range")
    }
}

/// Simple undirected graph used as input to the hardness generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    /// Edges are normalised to `(min, max)` and sorted. Loops and repeats are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut norm = BTreeSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::BadVertexId(vid(w), n));
                }
            }
            if u == v {
                return Err(GraphError::LoopForbidden(vid(u)));
            }
            if !norm.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateArc(vid(u), vid(v)));
            }
        }
        Ok(UndirectedGraph { n, edges: norm.into_iter().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Orientation from lower to higher index, which is acyclic.
    pub fn orient_ascending(&self) -> Digraph {
        Digraph::from_pairs(self.n, &self.edges, false).expect("edges are valid")
    }
}

fn check_all(d: &Digraph, vs: impl IntoIterator<Item = VertexId>) -> Result<(), GraphError> {
    vs.into_iter().try_for_each(|v| d.check_vertex(v))
}

/// Whether a directed walk from `from` to `to` exists avoiding `forbidden`.
/// A forbidden endpoint makes the answer false. `from == to` is reachable.
pub fn reachable(
    d: &Digraph,
    from: VertexId,
    to: VertexId,
    forbidden: &BTreeSet<VertexId>,
) -> Result<bool, GraphError> {
    check_all(d, [from, to])?;
    check_all(d, forbidden.iter().copied())?;
    if forbidden.contains(&from) || forbidden.contains(&to) {
        return Ok(false);
    }
    let mut seen = vec![false; d.n()];
    for f in forbidden {
        seen[f.index()] = true;
    }
    seen[from.index()] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            return Ok(true);
        }
        for &w in d.out_neighbors(u) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    Ok(false)
}

/// Every vertex reachable from `sources` inside `allowed` (sources included if allowed).
pub fn reach_set(d: &Digraph, sources: &[VertexId], allowed: &dyn Fn(VertexId) -> bool, backward: bool) -> Vec<bool> {
    let mut seen = vec![false; d.n()];
    let mut stack: Vec<VertexId> = Vec::new();
    for &s in sources {
        if allowed(s) && !seen[s.index()] {
            seen[s.index()] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        let next = if backward { d.in_neighbors(u) } else { d.out_neighbors(u) };
        for &w in next {
            if !seen[w.index()] && allowed(w) {
                seen[w.index()] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Weakly connected components of `d[restrict]` (all of `d` when `None`), ordered by least vertex.
pub fn weak_components(d: &Digraph, restrict: Option<&BTreeSet<VertexId>>) -> Vec<BTreeSet<VertexId>> {
    let inside = |v: VertexId| restrict.map_or(true, |r| r.contains(&v));
    let mut seen = vec![false; d.n()];
    let mut comps = Vec::new();
    for s in d.vertices().filter(|&v| inside(v)) {
        if seen[s.index()] {
            continue;
        }
        seen[s.index()] = true;
        let mut comp = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in d.out_neighbors(u).iter().chain(d.in_neighbors(u)) {
                if inside(w) && !seen[w.index()] {
                    seen[w.index()] = true;
                    comp.insert(w);
                    stack.push(w);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// Strongly connected components (Tarjan, iterative), listed in topological order of the
/// condensation: no arc goes from a later component to an earlier one.
pub fn strong_components(d: &Digraph) -> Vec<Vec<VertexId>> {
    let n = d.n();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // Frames are (vertex, position in its out-list).
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            let outs = &d.out_adj[v];
            if *pos < outs.len() {
                let w = outs[*pos].index();
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack holds the component");
                        on_stack[w] = false;
                        comp.push(vid(w));
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    // Tarjan emits sink components first.
    comps.reverse();
    comps
}

pub fn is_dag(d: &Digraph) -> bool {
    !d.has_loops() && strong_components(d).iter().all(|c| c.len() == 1)
}

/// Topological order preferring the smallest available vertex.
pub fn topological_order(d: &Digraph) -> Result<Vec<VertexId>, GraphError> {
    let mut indeg: Vec<usize> = (0..d.n()).map(|v| d.in_adj[v].len()).collect();
    let mut heap: BinaryHeap<Reverse<VertexId>> =
        d.vertices().filter(|v| indeg[v.index()] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(d.n());
    while let Some(Reverse(u)) = heap.pop() {
        order.push(u);
        for &w in d.out_neighbors(u) {
            indeg[w.index()] -= 1;
            if indeg[w.index()] == 0 {
                heap.push(Reverse(w));
            }
        }
    }
    if order.len() == d.n() {
        Ok(order)
    } else {
        Err(GraphError::NotADag)
    }
}

/// Replaces `arc` by a directed path through `times` new vertices, appended after the old ones.
pub fn subdivide(d: &Digraph, arc: Arc, times: usize) -> Result<Digraph, GraphError> {
    let (u, v) = arc;
    check_all(d, [u, v])?;
    if !d.has_arc(u, v) {
        return Err(GraphError::ArcNotFound(u, v));
    }
    let mut b = DigraphBuilder::from_digraph(d);
    b.remove_arc(u, v);
    let mut prev = u;
    for _ in 0..times {
        let x = b.add_vertex();
        b.add_arc(prev, x);
        prev = x;
    }
    b.add_arc(prev, v);
    Ok(b.build())
}

/// Transitive tournament on `k` vertices: `i -> j` for all `i < j`.
pub fn transitive_tournament(k: usize) -> Digraph {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    Digraph::from_pairs(k, &pairs, false).expect("tournament is valid")
}

/// The running example: vertices a..g are 0..6, with the listed pairs bidirected.
pub fn running_example() -> Digraph {
    let pairs = [(0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (2, 5), (2, 6), (3, 4), (5, 6)];
    let mut b = DigraphBuilder::new(7);
    for (u, v) in pairs {
        b.add_bidirected(vid(u), vid(v));
    }
    b.build()
}
