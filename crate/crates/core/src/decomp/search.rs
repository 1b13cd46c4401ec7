//! Exhaustive searches on tiny digraphs: a singleton-bag width upper bound and breakability.

use super::{ArborealDecomposition, DecompError};
use crate::graph::{strong_components, vid, Arc, Digraph, VertexId};
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

type Mask = u32;

fn bit(v: usize) -> Mask {
    1 << v
}

fn members(m: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| m >> i & 1 == 1)
}

fn to_set(m: Mask) -> Vec<VertexId> {
    members(m).map(vid).collect()
}

/// Submasks of `m`, including zero and `m` itself.
fn submasks(m: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

struct Adjacency {
    out: Vec<Mask>,
    inn: Vec<Mask>,
}

impl Adjacency {
    fn of(d: &Digraph) -> Self {
        let mut out = vec![0; d.n()];
        let mut inn = vec![0; d.n()];
        for &(u, v) in d.arcs() {
            out[u.index()] |= bit(v.index());
            inn[v.index()] |= bit(u.index());
        }
        Adjacency { out, inn }
    }

    fn closure(&self, from: Mask, allowed: Mask, backward: bool) -> Mask {
        let adj = if backward { &self.inn } else { &self.out };
        let mut seen = from & allowed;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in members(frontier) {
                next |= adj[v];
            }
            frontier = next & allowed & !seen;
            seen |= frontier;
        }
        seen
    }

    /// `s` (disjoint from `z`) is `z`-guarded inside the vertex universe `all`.
    fn guarded(&self, s: Mask, z: Mask, all: Mask) -> bool {
        let allowed = all & !z;
        let fwd = self.closure(s, allowed, false);
        let bwd = self.closure(s, allowed, true);
        fwd & bwd & !s == 0
    }
}

/// An upper bound on directed treewidth together with the decomposition achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtwBound {
    pub width_upper_bound: usize,
    pub decomposition: ArborealDecomposition,
}

struct Sub {
    vertex: usize,
    children: Vec<(Mask, Rc<Sub>)>,
}

type Parts = Rc<Vec<(Mask, Rc<Sub>)>>;

struct WidthSearch<'a> {
    adj: &'a Adjacency,
    all: Mask,
    budget: usize,
    /// Largest allowed `|W_r ∪ incident guards|`.
    span: usize,
    feasible: HashMap<(Mask, Mask), Option<Rc<Sub>>>,
    parts: HashMap<(Mask, Mask), Option<Parts>>,
}

impl WidthSearch<'_> {
    /// A subtree decomposing `s` whose incoming guard is `x`.
    fn feasible(&mut self, s: Mask, x: Mask) -> Option<Rc<Sub>> {
        if let Some(hit) = self.feasible.get(&(s, x)) {
            return hit.clone();
        }
        let found = self.feasible_uncached(s, x);
        self.feasible.insert((s, x), found.clone());
        found
    }

    fn feasible_uncached(&mut self, s: Mask, x: Mask) -> Option<Rc<Sub>> {
        for v in members(s) {
            let base = x | bit(v);
            let room = self.span.checked_sub(base.count_ones() as usize)?;
            let rest = s & !bit(v);
            if rest == 0 {
                return Some(Rc::new(Sub { vertex: v, children: vec![] }));
            }
            for extra in submasks(self.all & !base).filter(|e| e.count_ones() as usize <= room) {
                if let Some(parts) = self.partition(rest, base | extra) {
                    return Some(Rc::new(Sub { vertex: v, children: parts.to_vec() }));
                }
            }
        }
        None
    }

    /// Splits `rest` into child blocks whose guards are drawn from `u`.
    fn partition(&mut self, rest: Mask, u: Mask) -> Option<Parts> {
        if rest == 0 {
            return Some(Rc::new(Vec::new()));
        }
        if let Some(hit) = self.parts.get(&(rest, u)) {
            return hit.clone();
        }
        let low = rest & rest.wrapping_neg();
        let budget = self.budget;
        let mut found = None;
        'blocks: for more in submasks(rest & !low) {
            let block = more | low;
            for guard in submasks(u).filter(|g| g.count_ones() as usize <= budget) {
                if !self.adj.guarded(block & !guard, guard, self.all) {
                    continue;
                }
                let Some(sub) = self.feasible(block, guard) else { continue };
                if let Some(tail) = self.partition(rest & !block, u) {
                    let mut v = vec![(guard, sub)];
                    v.extend(tail.iter().cloned());
                    found = Some(Rc::new(v));
                    break 'blocks;
                }
            }
        }
        self.parts.insert((rest, u), found.clone());
        found
    }
}

fn flatten(root: &Rc<Sub>) -> ArborealDecomposition {
    let mut bags = Vec::new();
    let mut edges = Vec::new();
    let mut stack: Vec<(Rc<Sub>, Option<(usize, Mask)>)> = vec![(root.clone(), None)];
    while let Some((sub, link)) = stack.pop() {
        let id = bags.len();
        bags.push(vec![vid(sub.vertex)]);
        if let Some((p, g)) = link {
            edges.push((p, id, to_set(g)));
        }
        for (g, c) in sub.children.iter().rev() {
            stack.push((c.clone(), Some((id, *g))));
        }
    }
    ArborealDecomposition::new(0, bags, edges).expect("search builds a tree")
}

/// Least width reachable by decompositions whose bags are single vertices and whose
/// guards have at most `budget` vertices. This is only an upper bound on the directed
/// treewidth. `None` when no such decomposition exists under the budget.
pub fn dtw_upper_small(d: &Digraph, budget: usize) -> Result<Option<DtwBound>, DecompError> {
    let n = d.n();
    if n > 7 {
        return Err(DecompError::TooLarge);
    }
    if n == 0 {
        return Ok(None);
    }
    let adj = Adjacency::of(d);
    let all: Mask = (1 << n) - 1;
    for width in 0..n {
        let mut search = WidthSearch { adj: &adj, all, budget, span: width + 1, feasible: HashMap::new(), parts: HashMap::new() };
        if let Some(root) = search.feasible(all, 0) {
            return Ok(Some(DtwBound { width_upper_bound: width, decomposition: flatten(&root) }));
        }
    }
    Ok(None)
}

/// Largest number of weak components of `d[h_vertices ∩ X]` over all `w`-guarded `X`.
pub fn breakability(d: &Digraph, h_vertices: &BTreeSet<VertexId>, w: usize) -> Result<usize, DecompError> {
    let arcs: Vec<Arc> = d
        .arcs()
        .iter()
        .copied()
        .filter(|(u, v)| h_vertices.contains(u) && h_vertices.contains(v))
        .collect();
    subdigraph_breakability(d, h_vertices, &arcs, w)
}

/// As [`breakability`], for a subdigraph `H` of `d` given by its vertices and its own arcs.
pub fn subdigraph_breakability(
    d: &Digraph,
    h_vertices: &BTreeSet<VertexId>,
    h_arcs: &[Arc],
    w: usize,
) -> Result<usize, DecompError> {
    let n = d.n();
    if n > 15 || (w > 2 && n > 10) {
        return Err(DecompError::TooLarge);
    }
    for &v in h_vertices {
        d.check_vertex(v)?;
    }
    let mut h_adj = vec![0 as Mask; n];
    for &(u, v) in h_arcs {
        d.check_vertex(u)?;
        d.check_vertex(v)?;
        h_adj[u.index()] |= bit(v.index());
        h_adj[v.index()] |= bit(u.index());
    }
    let h_mask: Mask = h_vertices.iter().map(|v| bit(v.index())).fold(0, |a, b| a | b);
    let all: Mask = if n == 0 { 0 } else { (1 << n) - 1 };
    let mut best = 0;
    for z in submasks(all).filter(|z| z.count_ones() as usize <= w) {
        best = best.max(best_for_guard(d, z, h_mask, &h_adj));
        if best == h_mask.count_ones() as usize {
            break;
        }
    }
    Ok(best)
}

/// The `z`-guarded sets are exactly the unions of strong components of `d - z` that are
/// convex in its condensation: no outside component lies on a path between two chosen ones.
fn best_for_guard(d: &Digraph, z: Mask, h_mask: Mask, h_adj: &[Mask]) -> usize {
    let keep: BTreeSet<VertexId> = (0..d.n()).filter(|&v| z >> v & 1 == 0).map(vid).collect();
    let (sub, old) = d.induced(&keep);
    let comps = strong_components(&sub);
    let c = comps.len();
    let mut comp_of = vec![0; d.n()];
    let mut comp_mask = vec![0 as Mask; c];
    for (i, comp) in comps.iter().enumerate() {
        for v in comp {
            let orig = old[v.index()].index();
            comp_of[orig] = i;
            comp_mask[i] |= bit(orig);
        }
    }
    // Components come in topological order, so descendants can be filled backwards.
    let mut desc = vec![0 as Mask; c];
    for i in (0..c).rev() {
        for v in &comps[i] {
            for &x in sub.out_neighbors(*v) {
                let j = comp_of[old[x.index()].index()];
                if j != i {
                    desc[i] |= bit(j) | desc[j];
                }
            }
        }
    }
    let mut anc = vec![0 as Mask; c];
    for i in 0..c {
        for j in members(desc[i]) {
            anc[j] |= bit(i);
        }
    }
    let mut best = 0;
    for chosen in 1..(1 as Mask) << c {
        let convex = (0..c).all(|b| chosen >> b & 1 == 1 || anc[b] & chosen == 0 || desc[b] & chosen == 0);
        if !convex {
            continue;
        }
        let x: Mask = members(chosen).map(|i| comp_mask[i]).fold(0, |a, b| a | b);
        best = best.max(count_components(x & h_mask, h_adj));
    }
    best
}

fn count_components(set: Mask, adj: &[Mask]) -> usize {
    let mut rest = set;
    let mut count = 0;
    while rest != 0 {
        let mut frontier = rest & rest.wrapping_neg();
        let mut comp = frontier;
        while frontier != 0 {
            let mut next = 0;
            for v in members(frontier) {
                next |= adj[v];
            }
            frontier = next & set & !comp;
            comp |= frontier;
        }
        rest &= !comp;
        count += 1;
    }
    count
}
