//! Rooted stars-paths search: star leaves from the integer system, paths from the
//! disjoint-paths solver, glued along the cells of the star neighbourhoods.
//!
//! Leaf feasibility only depends on how many vertices each cell loses to path interiors,
//! and losing fewer never hurts. So the Pareto frontier of cell-usage vectors over all
//! path systems is enough: some frontier entry works whenever any path system does.

use crate::decomp::{dag_decomposition, ArborealDecomposition};
use crate::graph::{max_matching, Digraph, Embedding, Orientation, StarsPathsPattern, VertexId};
use crate::saddp::{saddp_frontier, AvoidSet, Request, SaddpError, SaddpInstance};
use crate::star_system::{build_system, homogenize, solve, StarSystem};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RspsiError {
    #[error("host is not a DAG and no decomposition was supplied")]
    NoDecomposition,
    #[error("pattern has no roots")]
    MissingRoots,
    #[error("root {0} is not a host vertex")]
    BadRoot(VertexId),
    #[error("star neighbourhoods split the host into {0} cells, more than 32")]
    TooManyCells(usize),
    #[error(transparent)]
    Saddp(#[from] SaddpError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RspsiInstance {
    pub d: Digraph,
    pub pattern: StarsPathsPattern,
    pub decomposition: Option<ArborealDecomposition>,
}

fn decomposition_for(d: &Digraph, dec: Option<&ArborealDecomposition>) -> Result<ArborealDecomposition, RspsiError> {
    match dec {
        Some(dec) => Ok(dec.clone()),
        None => dag_decomposition(d).map_err(|_| RspsiError::NoDecomposition),
    }
}

/// Finds the pattern with star `i` centred at root `i`.
pub fn solve_rooted(inst: &RspsiInstance) -> Result<Option<Embedding>, RspsiError> {
    let dec = decomposition_for(&inst.d, inst.decomposition.as_ref())?;
    rooted_with(&inst.d, &inst.pattern, &dec)
}

fn rooted_with(d: &Digraph, pattern: &StarsPathsPattern, dec: &ArborealDecomposition) -> Result<Option<Embedding>, RspsiError> {
    let f = pattern.roots().ok_or(RspsiError::MissingRoots)?;
    if let Some(&v) = f.iter().find(|v| v.index() >= d.n()) {
        return Err(RspsiError::BadRoot(v));
    }
    let centers: BTreeSet<VertexId> = f.iter().copied().collect();
    let (specs, origin) = homogenize(pattern, f);
    let base = build_system(d, &specs, &vec![0; specs.len()], &centers);
    if base.cells.len() > 32 {
        return Err(RspsiError::TooManyCells(base.cells.len()));
    }
    // Without paths eating into them, can the cells host the leaves at all?
    if solve(&base).is_none() {
        return Ok(None);
    }
    let requests = pattern
        .paths()
        .iter()
        .map(|p| Request { source: f[p.from], target: f[p.to], size: p.vertex_count })
        .collect();
    let avoid_sets = base
        .cells
        .iter()
        .map(|c| AvoidSet { vertices: c.vertices.iter().copied().collect(), budget: c.vertices.len() })
        .collect();
    let paths_inst = SaddpInstance::new(d.clone(), requests, avoid_sets)?;
    let mut frontier = saddp_frontier(&paths_inst, dec, &centers)?;
    // Ascending induced slack vector, ties by the usage vector itself.
    let slack_of = |usage: &[usize]| -> Vec<usize> {
        (0..specs.len())
            .map(|i| base.cells.iter().zip(usage).filter(|(c, _)| c.members >> i & 1 == 1).map(|(_, &u)| u).sum())
            .collect()
    };
    frontier.sort_by_cached_key(|(u, _)| (slack_of(u), u.clone()));
    for (usage, paths) in frontier {
        let gate = build_system(d, &specs, &slack_of(&usage), &centers);
        if solve(&gate).is_none() {
            continue;
        }
        let mut reserved = centers.clone();
        for p in &paths.paths {
            reserved.extend(p.iter().copied());
        }
        let exact: StarSystem = build_system(d, &specs, &vec![0; specs.len()], &reserved);
        let Some(assign) = solve(&exact) else { continue };
        let mut star_leaves = vec![Vec::new(); pattern.k()];
        for (spec, leaves) in assign.leaves.iter().enumerate() {
            star_leaves[origin[spec]].extend(leaves.iter().copied());
        }
        return Ok(Some(Embedding { star_centers: f.to_vec(), star_leaves, path_vertices: paths.paths }));
    }
    Ok(None)
}

/// Tries every injective placement of the centers in lexicographic order.
pub fn solve_unrooted(
    d: &Digraph,
    pattern: &StarsPathsPattern,
    dec: Option<&ArborealDecomposition>,
) -> Result<Option<Embedding>, RspsiError> {
    let dec = decomposition_for(d, dec)?;
    let pattern = pattern.without_roots();
    let k = pattern.k();
    if k > d.n() {
        return Ok(None);
    }
    // Arcs each center must be able to start or end.
    let need: Vec<(usize, usize)> = (0..k)
        .map(|i| {
            let s = pattern.stars()[i];
            let outs = pattern.paths().iter().filter(|p| p.from == i).count();
            let ins = pattern.paths().iter().filter(|p| p.to == i).count();
            (s.out_leaves + outs, s.in_leaves + ins)
        })
        .collect();
    let fits = |i: usize, v: VertexId| d.out_degree(v) >= need[i].0 && d.in_degree(v) >= need[i].1;
    let mut placement: Vec<VertexId> = Vec::with_capacity(k);
    let mut used = vec![false; d.n()];
    place(d, &pattern, &dec, &fits, &mut placement, &mut used)
}

fn place(
    d: &Digraph,
    pattern: &StarsPathsPattern,
    dec: &ArborealDecomposition,
    fits: &dyn Fn(usize, VertexId) -> bool,
    placement: &mut Vec<VertexId>,
    used: &mut [bool],
) -> Result<Option<Embedding>, RspsiError> {
    let i = placement.len();
    if i == pattern.k() {
        let rooted = pattern.with_roots(placement.clone()).expect("placement is injective and complete");
        return rooted_with(d, &rooted, dec);
    }
    for v in d.vertices() {
        if used[v.index()] || !fits(i, v) {
            continue;
        }
        used[v.index()] = true;
        placement.push(v);
        let found = place(d, pattern, dec, fits, placement, used)?;
        placement.pop();
        used[v.index()] = false;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// `l` pairwise vertex-disjoint arcs, read off a maximum matching of the underlying graph.
/// The embedding matches [`StarsPathsPattern::disjoint_arcs`]; `l = 0` gives the empty one.
pub fn find_disjoint_arcs(d: &Digraph, l: usize) -> Option<Embedding> {
    let m = max_matching(d.n(), &d.underlying_edges());
    if m.len() < l {
        return None;
    }
    let mut emb = Embedding::default();
    for &(a, b) in m.iter().take(l) {
        let (u, v) = if d.has_arc(a, b) { (a, b) } else { (b, a) };
        emb.star_centers.push(u);
        emb.star_leaves.push(vec![v]);
    }
    Some(emb)
}

/// The `l`-star with each arc subdivided once, in the layout of
/// [`StarsPathsPattern::once_subdivided_star`].
///
/// For the out case at center `v`: every arc `a -> b` with `a ∈ N⁺(v)` and `b ≠ v` is a
/// candidate spoke-plus-leaf, and `l` of them fit disjointly exactly when their underlying
/// graph has a matching of size `l`. Arcs into `v` must be left out: with `a -> v` and
/// `a ∈ N⁺(v)` the edge `{a, v}` would be matchable yet `v` cannot be its own leaf.
pub fn find_once_subdivided_star(d: &Digraph, l: usize, orientation: Orientation) -> Option<Embedding> {
    let flipped;
    let host = match orientation {
        Orientation::Out => d,
        Orientation::In => {
            flipped = d.reversed();
            &flipped
        }
    };
    for v in host.vertices() {
        let spokes: BTreeSet<VertexId> = host.out_neighbors(v).iter().copied().filter(|&a| a != v).collect();
        let arcs: Vec<(VertexId, VertexId)> = spokes
            .iter()
            .flat_map(|&a| host.out_neighbors(a).iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| b != v && b != a)
            .collect();
        let m = max_matching(host.n(), &arcs);
        if m.len() < l {
            continue;
        }
        let mut emb = Embedding { star_centers: vec![v], star_leaves: vec![vec![]], path_vertices: vec![] };
        for &(x, y) in m.iter().take(l) {
            // Tail in N⁺(v); if both ends qualify, any arc between them will do.
            let (a, b) = if spokes.contains(&x) && host.has_arc(x, y) { (x, y) } else { (y, x) };
            emb.star_centers.push(a);
            emb.star_leaves.push(vec![b]);
            emb.path_vertices.push(match orientation {
                Orientation::Out => vec![v, a],
                Orientation::In => vec![a, v],
            });
        }
        return Some(emb);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::condensation_decomposition;
    use crate::graph::{oracle_find_pattern, validate_embedding, vid, PatternPath, StarShape};

    fn rooted(stars: Vec<StarShape>, paths: Vec<PatternPath>, roots: &[usize]) -> StarsPathsPattern {
        StarsPathsPattern::new(stars, paths, Some(roots.iter().map(|&r| vid(r)).collect())).unwrap()
    }

    #[test]
    fn trivial_single_vertex() {
        let d = Digraph::from_pairs(2, &[(0, 1)], false).unwrap();
        let pattern = rooted(vec![StarShape::default()], vec![], &[1]);
        let inst = RspsiInstance { d, pattern, decomposition: None };
        let emb = solve_rooted(&inst).unwrap().unwrap();
        assert_eq!(emb.star_centers, vec![vid(1)]);
    }

    #[test]
    fn star_and_path_share_the_center() {
        // v=0, a=1, b=2, v'=3.
        let d = Digraph::from_pairs(4, &[(0, 1), (0, 2), (2, 3)], false).unwrap();
        let pattern = rooted(
            vec![StarShape::new(1, 0), StarShape::default()],
            vec![PatternPath { from: 0, to: 1, vertex_count: 3 }],
            &[0, 3],
        );
        assert!(oracle_find_pattern(&d, &pattern, 12).unwrap().is_some());
        let inst = RspsiInstance { d: d.clone(), pattern: pattern.clone(), decomposition: None };
        let emb = solve_rooted(&inst).unwrap().unwrap();
        assert_eq!(emb.star_leaves[0], vec![vid(1)]);
        assert_eq!(emb.path_vertices[0], vec![vid(0), vid(2), vid(3)]);
        assert_eq!(validate_embedding(&d, &pattern, &emb), Ok(()));
    }

    #[test]
    fn unrooted_examples() {
        let arc = Digraph::from_pairs(2, &[(0, 1)], false).unwrap();
        let single = StarsPathsPattern::new(vec![StarShape::new(1, 0)], vec![], None).unwrap();
        assert!(solve_unrooted(&arc, &single, None).unwrap().is_some());
        let path3 = Digraph::from_pairs(3, &[(0, 1), (1, 2)], false).unwrap();
        let two_out = StarsPathsPattern::new(vec![StarShape::new(2, 0)], vec![], None).unwrap();
        assert_eq!(solve_unrooted(&path3, &two_out, None).unwrap(), None);
    }

    #[test]
    fn cycles_need_a_decomposition() {
        let c3 = Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)], false).unwrap();
        let p = StarsPathsPattern::new(vec![StarShape::default()], vec![PatternPath { from: 0, to: 0, vertex_count: 4 }], None).unwrap();
        assert_eq!(solve_unrooted(&c3, &p, None), Err(RspsiError::NoDecomposition));
        let dec = condensation_decomposition(&c3);
        let emb = solve_unrooted(&c3, &p, Some(&dec)).unwrap().unwrap();
        assert_eq!(validate_embedding(&c3, &p, &emb), Ok(()));
    }

    #[test]
    fn the_slack_gate_is_not_sufficient() {
        // N⁺(0) = {a, q}, N⁺(1) = {q, b} with a = 2, q = 3, b = 4. The only path
        // 0 -> a -> b -> 1 leaves slack one at each center, and counted slacks allow
        // leaves a and b. Positionally only q is left for two stars.
        let d = Digraph::from_pairs(5, &[(0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (4, 1)], false).unwrap();
        let pattern = rooted(
            vec![StarShape::new(1, 0), StarShape::new(1, 0)],
            vec![PatternPath { from: 0, to: 1, vertex_count: 4 }],
            &[0, 1],
        );
        let (specs, _) = homogenize(&pattern, &[vid(0), vid(1)]);
        let centers: BTreeSet<VertexId> = [vid(0), vid(1)].into();
        assert!(solve(&build_system(&d, &specs, &[1, 1], &centers)).is_some());
        let reserved: BTreeSet<VertexId> = [vid(0), vid(1), vid(2), vid(4)].into();
        assert!(solve(&build_system(&d, &specs, &[0, 0], &reserved)).is_none());
        let inst = RspsiInstance { d: d.clone(), pattern: pattern.clone(), decomposition: Some(condensation_decomposition(&d)) };
        assert_eq!(solve_rooted(&inst).unwrap(), None);
        assert_eq!(oracle_find_pattern(&d, &pattern, 12).unwrap(), None);
    }

    #[test]
    fn matching_cases() {
        let star = Digraph::from_pairs(3, &[(0, 1), (0, 2)], false).unwrap();
        assert_eq!(find_disjoint_arcs(&star, 0), Some(Embedding::default()));
        assert_eq!(find_disjoint_arcs(&star, 2), None);
        let two = Digraph::from_pairs(4, &[(0, 1), (3, 2)], false).unwrap();
        let emb = find_disjoint_arcs(&two, 2).unwrap();
        let pattern = StarsPathsPattern::disjoint_arcs(2).unwrap();
        assert_eq!(validate_embedding(&two, &pattern, &emb), Ok(()));

        assert_eq!(find_once_subdivided_star(&star, 1, Orientation::Out), None);
        let h1 = StarsPathsPattern::once_subdivided_star(1, Orientation::Out);
        let (host, _) = h1.to_digraph();
        let emb = find_once_subdivided_star(&host, 1, Orientation::Out).unwrap();
        assert_eq!(validate_embedding(&host, &h1, &emb), Ok(()));
        // A digon between the center and its only spoke gives no subdivided arc.
        let digon = Digraph::from_pairs(2, &[(0, 1), (1, 0)], false).unwrap();
        assert_eq!(find_once_subdivided_star(&digon, 1, Orientation::Out), None);
    }
}
