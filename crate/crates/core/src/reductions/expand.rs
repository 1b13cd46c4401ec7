//! Degree-bounded expansion of a digraph.
//!
//! Out-neighbourhoods are replaced by balanced binary out-arborescences (type-1 internal
//! vertices), in-neighbourhoods of originals with in-degree above two by balanced binary
//! in-arborescences (type-2). Arcs between internal vertices of the same arborescence are
//! doubled, as are the two children of a root with two children. Originals get loops.

use super::ReductionError;
use crate::graph::{vid, Digraph, DigraphBuilder, VertexId};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExpansionRole {
    Original,
    /// Added while processing the out-neighbourhood of the given original.
    Type1(VertexId),
    /// Added while processing the in-neighbourhood of the given original.
    Type2(VertexId),
}

impl fmt::Display for ExpansionRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionRole::Original => write!(f, "original"),
            ExpansionRole::Type1(u) => write!(f, "type1:{u}"),
            ExpansionRole::Type2(u) => write!(f, "type2:{u}"),
        }
    }
}

/// One arborescence under construction: arcs are stored root-to-leaf.
struct Arborescence {
    root: VertexId,
    arcs: Vec<(VertexId, VertexId)>,
    internals: Vec<VertexId>,
}

impl Arborescence {
    /// Balanced binary tree over `leaves`, with new vertices taken from `b`.
    fn grow(b: &mut DigraphBuilder, root: VertexId, leaves: &[VertexId]) -> Self {
        let mut t = Arborescence { root, arcs: Vec::new(), internals: Vec::new() };
        if leaves.len() == 1 {
            t.arcs.push((root, leaves[0]));
        } else {
            t.attach(b, root, leaves);
        }
        t
    }

    fn attach(&mut self, b: &mut DigraphBuilder, parent: VertexId, leaves: &[VertexId]) {
        let (lo, hi) = leaves.split_at(leaves.len().div_ceil(2));
        for half in [lo, hi] {
            if let [leaf] = half {
                self.arcs.push((parent, *leaf));
            } else {
                let x = b.add_vertex();
                self.internals.push(x);
                self.arcs.push((parent, x));
                self.attach(b, x, half);
            }
        }
    }

    /// Puts a fresh vertex on every root arc whose far end satisfies `needs`.
    fn subdivide_root_arcs(&mut self, b: &mut DigraphBuilder, needs: impl Fn(VertexId) -> bool) {
        let root = self.root;
        for i in 0..self.arcs.len() {
            let (p, c) = self.arcs[i];
            if p == root && needs(c) {
                let x = b.add_vertex();
                self.internals.push(x);
                self.arcs[i] = (root, x);
                self.arcs.push((x, c));
            }
        }
    }

    fn root_children(&self) -> Vec<VertexId> {
        self.arcs.iter().filter(|(p, _)| *p == self.root).map(|&(_, c)| c).collect()
    }
}

/// The expansion of a loopless digraph, with a role per vertex. Originals keep their ids;
/// internal vertices follow in creation order.
pub fn expand(d: &Digraph) -> Result<(Digraph, Vec<ExpansionRole>), ReductionError> {
    if d.has_loops() {
        return Err(ReductionError::HasLoops);
    }
    let n = d.n();
    let mut b = DigraphBuilder::new(n);
    let mut roles = vec![ExpansionRole::Original; n];
    let original = |v: VertexId| v.index() < n;

    for u in d.vertices() {
        let leaves = d.out_neighbors(u);
        if leaves.is_empty() {
            continue;
        }
        let mut t = Arborescence::grow(&mut b, u, leaves);
        t.subdivide_root_arcs(&mut b, original);
        for &(p, c) in &t.arcs {
            b.add_arc(p, c);
            if !original(p) && !original(c) {
                b.add_arc(c, p);
            }
        }
        if let [x, y] = t.root_children()[..] {
            b.add_bidirected(x, y);
        }
        roles.extend(t.internals.iter().map(|_| ExpansionRole::Type1(u)));
    }

    let phase1 = b.clone().build();
    for u in (0..n).map(vid) {
        let leaves = phase1.in_neighbors(u).to_vec();
        if leaves.len() <= 2 {
            continue;
        }
        for &x in &leaves {
            b.remove_arc(x, u);
        }
        let mut t = Arborescence::grow(&mut b, u, &leaves);
        // Keep type-1 vertices off the root, so its two in-neighbours are both type-2.
        let first_new = b.n() - t.internals.len();
        t.subdivide_root_arcs(&mut b, |v| v.index() < first_new);
        let type2 = |v: VertexId| v.index() >= first_new;
        for &(p, c) in &t.arcs {
            b.add_arc(c, p);
            if type2(p) && type2(c) {
                b.add_arc(p, c);
            }
        }
        if let [x, y] = t.root_children()[..] {
            b.add_bidirected(x, y);
        }
        roles.extend(t.internals.iter().map(|_| ExpansionRole::Type2(u)));
    }

    for u in (0..n).map(vid) {
        b.add_arc(u, u);
    }
    Ok((b.build(), roles))
}
