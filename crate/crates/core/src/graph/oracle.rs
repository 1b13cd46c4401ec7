//! Backtracking subdigraph search used as ground truth.
//!
//! Semantics are subdigraph (not induced): every pattern arc must be present between the
//! images, extra host arcs are ignored. A loop in the pattern needs a loop on the image.

use super::pattern::{Embedding, StarsPathsPattern};
use super::{vid, weak_components, Digraph, VertexId};
use std::collections::BTreeSet;
use thiserror::Error;

pub const DEFAULT_ORACLE_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("pattern has {size} vertices, over the cap of {cap}")]
    PatternTooLarge { size: usize, cap: usize },
}

/// Finds a stars-paths pattern in `host`, honouring roots when present.
pub fn oracle_find_pattern(
    host: &Digraph,
    pattern: &StarsPathsPattern,
    cap: usize,
) -> Result<Option<Embedding>, OracleError> {
    let (pd, layout) = pattern.to_digraph();
    let fixed: Vec<(VertexId, VertexId)> = match pattern.roots() {
        Some(r) => {
            if r.iter().any(|v| v.index() >= host.n()) {
                return Ok(None);
            }
            layout.centers.iter().copied().zip(r.iter().copied()).collect()
        }
        None => Vec::new(),
    };
    let found = find_subdigraph(host, &pd, &fixed, cap)?;
    Ok(found.map(|map| Embedding::from_map(&layout, &map)))
}

/// Finds an injective map from pattern vertices to host vertices preserving every pattern
/// arc, with `fixed` pattern vertices pinned. Returns the map indexed by pattern vertex.
pub fn find_subdigraph(
    host: &Digraph,
    pattern: &Digraph,
    fixed: &[(VertexId, VertexId)],
    cap: usize,
) -> Result<Option<Vec<VertexId>>, OracleError> {
    if pattern.n() > cap {
        return Err(OracleError::PatternTooLarge { size: pattern.n(), cap });
    }
    if pattern.n() > host.n() {
        return Ok(None);
    }
    let mut search = Search::new(host, pattern, fixed);
    Ok(if search.run(0) { Some(search.map.iter().map(|m| m.expect("complete map")).collect()) } else { None })
}

struct Search<'a> {
    host: &'a Digraph,
    pat: &'a Digraph,
    order: Vec<usize>,
    pinned: Vec<Option<VertexId>>,
    /// `less[p]` lists vertices whose image must exceed the image of `p`, and `greater[p]`
    /// those whose image must be below it.
    less: Vec<Vec<usize>>,
    greater: Vec<Vec<usize>>,
    map: Vec<Option<VertexId>>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(host: &'a Digraph, pat: &'a Digraph, fixed: &[(VertexId, VertexId)]) -> Self {
        let n = pat.n();
        let mut pinned = vec![None; n];
        for &(p, h) in fixed {
            pinned[p.index()] = Some(h);
        }
        let order = search_order(pat, &pinned);
        let mut less = vec![Vec::new(); n];
        let mut greater = vec![Vec::new(); n];
        for (a, b) in symmetry_constraints(pat, &pinned) {
            less[a].push(b);
            greater[b].push(a);
        }
        Search { host, pat, order, pinned, less, greater, map: vec![None; n], used: vec![false; host.n()] }
    }

    fn fits(&self, p: usize, h: VertexId) -> bool {
        let (pat, host) = (self.pat, self.host);
        let pv = vid(p);
        if self.used[h.index()] {
            return false;
        }
        if pat.has_loop(pv) && !host.has_loop(h) {
            return false;
        }
        if host.out_degree(h) < pat.out_degree(pv) || host.in_degree(h) < pat.in_degree(pv) {
            return false;
        }
        for &q in pat.out_neighbors(pv) {
            if let Some(hq) = self.map[q.index()] {
                if q != pv && !host.has_arc(h, hq) {
                    return false;
                }
            }
        }
        for &q in pat.in_neighbors(pv) {
            if let Some(hq) = self.map[q.index()] {
                if q != pv && !host.has_arc(hq, h) {
                    return false;
                }
            }
        }
        self.less[p].iter().all(|&b| self.map[b].map_or(true, |hb| h < hb))
            && self.greater[p].iter().all(|&a| self.map[a].map_or(true, |ha| ha < h))
    }

    fn candidates(&self, p: usize) -> Vec<VertexId> {
        if let Some(h) = self.pinned[p] {
            return if h.index() < self.host.n() { vec![h] } else { vec![] };
        }
        let pv = vid(p);
        // Restrict to the neighbourhood of one mapped neighbour when there is one.
        for &q in self.pat.out_neighbors(pv) {
            if let (true, Some(hq)) = (q != pv, self.map[q.index()]) {
                return self.host.in_neighbors(hq).to_vec();
            }
        }
        for &q in self.pat.in_neighbors(pv) {
            if let (true, Some(hq)) = (q != pv, self.map[q.index()]) {
                return self.host.out_neighbors(hq).to_vec();
            }
        }
        self.host.vertices().collect()
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let p = self.order[depth];
        for h in self.candidates(p) {
            if !self.fits(p, h) {
                continue;
            }
            self.map[p] = Some(h);
            self.used[h.index()] = true;
            if self.run(depth + 1) {
                return true;
            }
            self.map[p] = None;
            self.used[h.index()] = false;
        }
        false
    }
}

/// Pinned vertices first, then repeatedly the vertex with most already-ordered
/// neighbours, ties broken by degree then id.
fn search_order(pat: &Digraph, pinned: &[Option<VertexId>]) -> Vec<usize> {
    let n = pat.n();
    let nbrs: Vec<BTreeSet<VertexId>> = pat.vertices().map(|v| pat.undirected_neighbors(v)).collect();
    let mut placed = vec![false; n];
    let mut order: Vec<usize> = (0..n).filter(|&p| pinned[p].is_some()).collect();
    for &p in &order {
        placed[p] = true;
    }
    while order.len() < n {
        let best = (0..n)
            .filter(|&p| !placed[p])
            .max_by_key(|&p| {
                let linked = nbrs[p].iter().filter(|q| placed[q.index()]).count();
                (linked, nbrs[p].len(), std::cmp::Reverse(p))
            })
            .expect("an unplaced vertex remains");
        placed[best] = true;
        order.push(best);
    }
    order
}

/// Pairs `(a, b)` such that some solution, if any exists, maps `a` below `b`.
///
/// Two sources: classes of non-adjacent twins, and interchangeable blocks (weak components
/// of the pattern, or of the pattern minus its highest-degree vertex) whose transposition
/// by relative order is an automorphism. Block constraints are only placed on anchors
/// outside twin classes so the two normalisations commute.
fn symmetry_constraints(pat: &Digraph, pinned: &[Option<VertexId>]) -> Vec<(usize, usize)> {
    let n = pat.n();
    let free = |p: usize| pinned[p].is_none();
    let mut out = Vec::new();
    let mut in_twin_class = vec![false; n];
    let key = |p: usize| {
        let o: Vec<VertexId> = pat.out_neighbors(vid(p)).to_vec();
        let i: Vec<VertexId> = pat.in_neighbors(vid(p)).to_vec();
        (o, i)
    };
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for p in (0..n).filter(|&p| free(p) && !pat.has_loop(vid(p))) {
        let kp = key(p);
        match classes.iter_mut().find(|c| key(c[0]) == kp && !pat.has_arc(vid(c[0]), vid(p)) && !pat.has_arc(vid(p), vid(c[0]))) {
            Some(c) => c.push(p),
            None => classes.push(vec![p]),
        }
    }
    for c in classes.iter().filter(|c| c.len() > 1) {
        for w in c.windows(2) {
            out.push((w[0], w[1]));
        }
        for &p in c {
            in_twin_class[p] = true;
        }
    }

    let hub = pat.vertices().max_by_key(|&v| (pat.total_degree(v), std::cmp::Reverse(v)));
    for cut in [None, hub] {
        let rest: BTreeSet<VertexId> = pat.vertices().filter(|&v| Some(v) != cut).collect();
        let blocks: Vec<Vec<usize>> = weak_components(pat, Some(&rest))
            .into_iter()
            .map(|b| b.into_iter().map(VertexId::index).collect::<Vec<usize>>())
            .filter(|b| b.iter().all(|&p| free(p)) && !in_twin_class[b[0]])
            .collect();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            match groups.iter_mut().find(|g| swappable(pat, &blocks[g[0]], b)) {
                Some(g) => g.push(i),
                None => groups.push(vec![i]),
            }
        }
        let chains: Vec<&Vec<usize>> = groups.iter().filter(|g| g.len() > 1).collect();
        if chains.is_empty() {
            continue;
        }
        for g in chains {
            for w in g.windows(2) {
                out.push((blocks[w[0]][0], blocks[w[1]][0]));
            }
        }
        break;
    }
    out
}

/// Whether exchanging `a` and `b` (matched by sorted position) and fixing everything
/// else maps the arc set onto itself.
fn swappable(pat: &Digraph, a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut sigma: Vec<usize> = (0..pat.n()).collect();
    for (&x, &y) in a.iter().zip(b) {
        sigma[x] = y;
        sigma[y] = x;
    }
    pat.arcs().iter().all(|&(u, v)| pat.has_arc(vid(sigma[u.index()]), vid(sigma[v.index()])))
}
