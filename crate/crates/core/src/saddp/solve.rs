//! Driving the itinerary engine over an arboreal decomposition.

use super::engine::{Bits, Engine, Piece, Plan};
use super::{PathSolution, SaddpError, SaddpInstance};
use crate::decomp::{validate, ArborealDecomposition};
use crate::graph::{strong_components, vid, DigraphBuilder, VertexId};
use std::collections::BTreeSet;

fn bits_of<'a>(vs: impl IntoIterator<Item = &'a VertexId>) -> Bits {
    vs.into_iter().fold(Bits::default(), |b, v| b.with(v.index() as u8))
}

fn member_masks(inst: &SaddpInstance, n: usize, excluded: &BTreeSet<VertexId>) -> Vec<u32> {
    (0..n)
        .map(|v| {
            if excluded.contains(&vid(v)) || v >= inst.digraph.n() {
                return 0;
            }
            inst.avoid_sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.vertices.contains(&vid(v)))
                .fold(0, |m, (j, _)| m | 1 << j)
        })
        .collect()
}

struct Layout {
    below: Vec<Bits>,
    /// Bag plus every incident guard, per node.
    span: Vec<Bits>,
}

/// Builds the plan for the vertices `s` of the subtree at `r`: children first, ordered
/// along the condensation of the arcs between them, then the node's own span by brute force.
fn build_plan(engine: &mut Engine, dec: &ArborealDecomposition, lay: &Layout, r: usize, s: Bits) -> Option<usize> {
    if s.is_empty() {
        return None;
    }
    let z = s.and(lay.span[r]);
    let mut parts: Vec<(usize, Bits)> = Vec::new();
    for &c in dec.children(r) {
        let cs = s.and(lay.below[c]).minus(lay.span[r]);
        if let Some(p) = build_plan(engine, dec, lay, c, cs) {
            parts.push((p, cs));
        }
    }
    let m = parts.len();
    let mut rel = DigraphBuilder::new(m);
    for i in 0..m {
        for j in 0..m {
            if i != j && engine.has_arc_between(parts[i].1, parts[j].1) {
                rel.add_arc(vid(i), vid(j));
            }
        }
    }
    let order: Vec<usize> = strong_components(&rel.build()).into_iter().flatten().map(VertexId::index).collect();
    let mut acc: Option<(usize, Bits)> = None;
    for i in order {
        let (p, cs) = parts[i];
        acc = Some(match acc {
            None => (p, cs),
            Some((ap, aset)) => {
                let sequential = !engine.has_arc_between(cs, aset);
                let set = aset.or(cs);
                (engine.add(Plan::Join { set, a: ap, b: p, sequential }), set)
            }
        });
    }
    if z.is_empty() {
        return acc.map(|(p, _)| p);
    }
    let inner = acc.map(|(p, _)| p);
    Some(engine.add(Plan::Small { set: s, inner, b: z }))
}

fn layout(dec: &ArborealDecomposition) -> Layout {
    let below = dec.below_sets().iter().map(|b| bits_of(b)).collect();
    let span = (0..dec.node_count()).map(|r| bits_of(&dec.node_span(r))).collect();
    Layout { below, span }
}

/// Every Pareto-minimal usage vector (terminals included) over solutions with the exact
/// requested sizes, with a witness each, and with `blocked` vertices kept out of all path
/// interiors. Budgets are not applied.
fn frontier_raw(
    inst: &SaddpInstance,
    dec: &ArborealDecomposition,
    blocked: &BTreeSet<VertexId>,
) -> Result<Vec<(Vec<usize>, PathSolution)>, SaddpError> {
    let n = inst.digraph.n();
    let r = inst.requests.len();
    let k = inst.avoid_sets.len();
    if r == 0 {
        return Ok(vec![(vec![0; k], PathSolution::default())]);
    }
    if n + 2 * r > 128 || k > 32 || inst.requests.iter().any(|q| q.size > 255) {
        return Err(SaddpError::TooLarge);
    }
    let terminals = inst.terminals();
    let excluded: BTreeSet<VertexId> = terminals.union(blocked).copied().collect();
    let base: Vec<usize> = inst.avoid_sets.iter().map(|s| s.vertices.intersection(&terminals).count()).collect();

    // Each request gets a private source copy and sink copy; terminals themselves vanish.
    let d = &inst.digraph;
    let mut b = DigraphBuilder::new(n + 2 * r);
    for &(u, v) in d.arcs() {
        if u != v && !excluded.contains(&u) && !excluded.contains(&v) {
            b.add_arc(u, v);
        }
    }
    for (i, q) in inst.requests.iter().enumerate() {
        let (src, snk) = (vid(n + 2 * i), vid(n + 2 * i + 1));
        for &x in d.out_neighbors(q.source).iter().filter(|x| !excluded.contains(x)) {
            b.add_arc(src, x);
        }
        for &x in d.in_neighbors(q.target).iter().filter(|x| !excluded.contains(x)) {
            b.add_arc(x, snk);
        }
        if q.source != q.target && d.has_arc(q.source, q.target) {
            b.add_arc(src, snk);
        }
    }
    let hat = b.build();
    let max_piece = inst.requests.iter().map(|q| q.size).max().unwrap_or(0) as u8;
    let mut engine = Engine::new(&hat, member_masks(inst, n + 2 * r, &excluded), k, max_piece);
    let lay = layout(dec);
    let inside = Bits(if n == 0 { 0 } else { u128::MAX >> (128 - n) }).minus(bits_of(&excluded));
    let core = if dec.node_count() == 0 { None } else { build_plan(&mut engine, dec, &lay, dec.root(), inside) };
    let copies = (n..n + 2 * r).fold(Bits::default(), |b, v| b.with(v as u8));
    let core_set = core.map_or(Bits::default(), |p| engine.plans[p].set());
    let top = engine.add(Plan::Small { set: core_set.or(copies), inner: core, b: copies });
    let pieces: Vec<Piece> = (0..r).map(|i| ((n + 2 * i) as u8, (n + 2 * i + 1) as u8)).collect();
    let frontier = engine.query(top, &pieces);
    let mut out = Vec::new();
    for e in frontier.iter() {
        if e.sizes.iter().zip(&inst.requests).any(|(&s, q)| s as usize != q.size) {
            continue;
        }
        let usage: Vec<usize> = base.iter().zip(&e.usage).map(|(b, &u)| b + u as usize).collect();
        let paths = e
            .paths
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.iter()
                    .map(|&v| {
                        let v = v as usize;
                        match v.checked_sub(n) {
                            Some(c) if c % 2 == 0 => inst.requests[i].source,
                            Some(_) => inst.requests[i].target,
                            None => vid(v),
                        }
                    })
                    .collect()
            })
            .collect();
        out.push((usage, PathSolution { paths }));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn check_decomposition(inst: &SaddpInstance, dec: &ArborealDecomposition) -> Result<(), SaddpError> {
    validate(&inst.digraph, dec).map(|_| ()).map_err(SaddpError::InvalidDecomposition)
}

/// Solves the instance using a valid decomposition of its digraph.
pub fn solve_saddp(inst: &SaddpInstance, dec: &ArborealDecomposition) -> Result<Option<PathSolution>, SaddpError> {
    check_decomposition(inst, dec)?;
    let budgets: Vec<usize> = inst.avoid_sets.iter().map(|s| s.budget).collect();
    Ok(frontier_raw(inst, dec, &BTreeSet::new())?
        .into_iter()
        .find(|(u, _)| u.iter().zip(&budgets).all(|(a, b)| a <= b))
        .map(|(_, p)| p))
}

/// All Pareto-minimal usage vectors within budget, lexicographically ordered, each with a
/// witness. Vertices in `blocked` never appear inside a path.
pub fn saddp_frontier(
    inst: &SaddpInstance,
    dec: &ArborealDecomposition,
    blocked: &BTreeSet<VertexId>,
) -> Result<Vec<(Vec<usize>, PathSolution)>, SaddpError> {
    check_decomposition(inst, dec)?;
    let budgets: Vec<usize> = inst.avoid_sets.iter().map(|s| s.budget).collect();
    Ok(frontier_raw(inst, dec, blocked)?
        .into_iter()
        .filter(|(u, _)| u.iter().zip(&budgets).all(|(a, b)| a <= b))
        .collect())
}

/// Direct access to itineraries over the instance digraph. Here requests are pieces:
/// pairwise vertex-disjoint paths, with `(v, v)` of size one meaning the vertex `v`.
pub struct ItineraryEngine {
    engine: Engine,
    n: usize,
}

/// An itinerary for the vertex set it was built over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Itinerary {
    plan: usize,
    pub vertices: BTreeSet<VertexId>,
}

impl ItineraryEngine {
    pub fn new(inst: &SaddpInstance) -> Result<Self, SaddpError> {
        let n = inst.digraph.n();
        if n > 128 || inst.avoid_sets.len() > 32 {
            return Err(SaddpError::TooLarge);
        }
        let member = member_masks(inst, n, &BTreeSet::new());
        Ok(ItineraryEngine { engine: Engine::new(&inst.digraph, member, inst.avoid_sets.len(), n.min(255) as u8), n })
    }

    fn check(&self, vs: &BTreeSet<VertexId>) -> Result<(), SaddpError> {
        match vs.iter().find(|v| v.index() >= self.n) {
            Some(&v) => Err(SaddpError::BadVertex(v)),
            None => Ok(()),
        }
    }

    /// Brute force inside `a`.
    pub fn base_itinerary(&mut self, a: &BTreeSet<VertexId>) -> Result<Itinerary, SaddpError> {
        self.check(a)?;
        let set = bits_of(a);
        let plan = self.engine.add(Plan::Small { set, inner: None, b: set });
        Ok(Itinerary { plan, vertices: a.clone() })
    }

    /// Union of disjoint sets with no arc from the second into the first.
    pub fn combine_sequential(&mut self, fa: &Itinerary, fb: &Itinerary) -> Result<Itinerary, SaddpError> {
        if fa.vertices.intersection(&fb.vertices).next().is_some() {
            return Err(SaddpError::Overlapping);
        }
        let (a, b) = (bits_of(&fa.vertices), bits_of(&fb.vertices));
        if self.engine.has_arc_between(b, a) {
            return Err(SaddpError::ArcFromBToA);
        }
        let plan = self.engine.add(Plan::Join { set: a.or(b), a: fa.plan, b: fb.plan, sequential: true });
        Ok(Itinerary { plan, vertices: fa.vertices.union(&fb.vertices).copied().collect() })
    }

    /// Extends `fa` by the vertices `b`, routing through them exhaustively.
    pub fn combine_small(&mut self, fa: &Itinerary, b: &BTreeSet<VertexId>) -> Result<Itinerary, SaddpError> {
        self.check(b)?;
        if b.is_empty() {
            return Ok(fa.clone());
        }
        if fa.vertices.intersection(b).next().is_some() {
            return Err(SaddpError::Overlapping);
        }
        let set = bits_of(&fa.vertices).or(bits_of(b));
        let plan = self.engine.add(Plan::Small { set, inner: Some(fa.plan), b: bits_of(b) });
        Ok(Itinerary { plan, vertices: fa.vertices.union(b).copied().collect() })
    }

    /// A witness realising `pieces` with exactly `sizes` and usage within `budgets`.
    pub fn query(
        &mut self,
        it: &Itinerary,
        pieces: &[(VertexId, VertexId)],
        sizes: &[usize],
        budgets: &[usize],
    ) -> Option<PathSolution> {
        let l: Vec<Piece> = pieces.iter().map(|&(s, t)| (s.index() as u8, t.index() as u8)).collect();
        let frontier = self.engine.query(it.plan, &l);
        frontier
            .iter()
            .find(|e| {
                e.sizes.iter().zip(sizes).all(|(&a, &b)| a as usize == b)
                    && e.usage.iter().zip(budgets).all(|(&u, &b)| u as usize <= b)
            })
            .map(|e| PathSolution { paths: e.paths.iter().map(|p| p.iter().map(|&v| vid(v as usize)).collect()).collect() })
    }
}
