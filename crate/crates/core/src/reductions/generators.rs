//! The six hardness constructions.

use super::sources::{AntidirectedInput, BipartiteInput, Formula};
use super::{expand, ReductionError, ReductionOutput, Target};
use crate::graph::{
    is_dag, transitive_tournament, vid, Digraph, DigraphBuilder, PatternPath, StarShape, StarsPathsPattern,
    UndirectedGraph, VertexId,
};
use std::collections::BTreeMap;

/// Orient by index and expand; the target is the expansion of the transitive tournament
/// on `k` vertices.
pub fn gen_clique_to_expansion(g: &UndirectedGraph, k: usize) -> Result<ReductionOutput, ReductionError> {
    let (host, roles) = expand(&g.orient_ascending())?;
    let (target, _) = expand(&transitive_tournament(k))?;
    let mut out = ReductionOutput::new(host, Target::Digraph(target), 3);
    for (i, r) in roles.iter().enumerate() {
        out.role(vid(i), r.to_string());
    }
    out.note("k", k);
    Ok(out)
}

/// The antidirected path with `arcs` arcs starting at a source: `0 -> 1 <- 2 -> 3 ...`.
pub fn antidirected_path(arcs: usize) -> Digraph {
    let pairs: Vec<(usize, usize)> = (0..arcs).map(|i| if i % 2 == 0 { (i, i + 1) } else { (i + 1, i) }).collect();
    Digraph::from_pairs(arcs + 1, &pairs, false).expect("path arcs are distinct")
}

/// One antidirected gadget of `6k + 2` arcs per edge, glued at usable sink/source pairs.
/// The target is one gadget; the question is whether the host has an antidirected path
/// between the terminals.
pub fn gen_antidirected(input: &AntidirectedInput) -> Result<ReductionOutput, ReductionError> {
    input.validate()?;
    let g = &input.graph;
    let n = g.n();
    let norm = |(u, v): (usize, usize)| (u.min(v), u.max(v));
    let edge_index: BTreeMap<(usize, usize), usize> = g.edges().iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut uses = vec![0usize; g.edges().len()];
    for &(e, f) in &input.pairs {
        uses[edge_index[&norm(e)]] += 1;
        uses[edge_index[&norm(f)]] += 1;
    }
    let k = uses.iter().copied().max().unwrap_or(0);
    let len = 6 * k + 2;

    // Internal vertex j of the gadget of edge i, before identification: n + i(len-1) + j-1.
    let raw = |i: usize, j: usize| n + i * (len - 1) + j - 1;
    let vertex = |i: usize, j: usize| -> usize {
        let (u, v) = g.edges()[i];
        match j {
            0 => u,
            j if j == len => v,
            j => raw(i, j),
        }
    };
    // Usable positions 3j+1: odd ones are sinks, even ones sources.
    let usable: Vec<usize> = (0..=2 * k).map(|j| 3 * j + 1).collect();
    let mut next_sink = vec![0usize; g.edges().len()];
    let mut next_source = vec![0usize; g.edges().len()];
    let mut merged: BTreeMap<usize, usize> = BTreeMap::new();
    for &(e, f) in &input.pairs {
        let (ie, jf) = (edge_index[&norm(e)], edge_index[&norm(f)]);
        let sink = usable.iter().copied().filter(|p| p % 2 == 1).nth(next_sink[ie]).expect("enough usable sinks");
        let source = usable.iter().copied().filter(|p| p % 2 == 0).nth(next_source[jf]).expect("enough usable sources");
        next_sink[ie] += 1;
        next_source[jf] += 1;
        merged.insert(raw(jf, source), raw(ie, sink));
    }
    // Compact ids: originals, then surviving internals in order.
    let total = n + g.edges().len() * (len - 1);
    let mut id = vec![usize::MAX; total];
    let mut next = 0;
    for (x, slot) in id.iter_mut().enumerate() {
        if !merged.contains_key(&x) {
            *slot = next;
            next += 1;
        }
    }
    let resolve = |x: usize| id[*merged.get(&x).unwrap_or(&x)];
    let mut b = DigraphBuilder::new(next);
    for i in 0..g.edges().len() {
        for j in 0..len {
            let (a, c) = (resolve(vertex(i, j)), resolve(vertex(i, j + 1)));
            if j % 2 == 0 {
                b.add_arc(vid(a), vid(c));
            } else {
                b.add_arc(vid(c), vid(a));
            }
        }
    }
    let host = b.build();
    debug_assert!(is_dag(&host));
    let mut out = ReductionOutput::new(host, Target::Digraph(antidirected_path(len)), 0);
    for v in 0..n {
        out.role(vid(v), "original");
    }
    for (&src, &sink) in &merged {
        out.role(vid(resolve(src)), format!("identified:{}", id[sink]));
    }
    out.note("s", input.s);
    out.note("t", input.t);
    out.note("gadget_arcs", len);
    Ok(out)
}

/// Host of the 2-out-star construction. Returns the builder, `k'`, the `c(e)` ids and the
/// output skeleton with roles.
struct MatchingHost {
    b: DigraphBuilder,
    k_prime: usize,
    c: Vec<VertexId>,
    f: Vec<VertexId>,
    roles: BTreeMap<VertexId, String>,
}

fn matching_host(g: &BipartiteInput) -> Result<MatchingHost, ReductionError> {
    g.validate()?;
    let (n1, n2) = (g.n1, g.n2);
    let mut b = DigraphBuilder::new(n1 + n2);
    let mut roles = BTreeMap::new();
    for a in 0..n1 {
        roles.insert(vid(a), "left".to_string());
    }
    for x in 0..n2 {
        roles.insert(vid(n1 + x), "right".to_string());
    }
    let mut c = Vec::new();
    for (i, &(a, x)) in g.edges.iter().enumerate() {
        b.add_arc(vid(a), vid(n1 + x));
        let ce = b.add_vertex();
        b.add_arc(ce, vid(a));
        b.add_arc(ce, vid(n1 + x));
        roles.insert(ce, format!("c:{i}"));
        c.push(ce);
    }
    let mut k_prime = 0;
    let mut f = Vec::new();
    for pa in 0..g.part1.len() {
        for pb in 0..g.part2.len() {
            let between: Vec<VertexId> = g
                .edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, x))| g.part_of1(a) == pa && g.part_of2(x) == pb)
                .map(|(i, _)| c[i])
                .collect();
            let mut add = |tag: &str, outs: &[VertexId]| {
                let v = b.add_vertex();
                for &o in outs {
                    b.add_arc(v, o);
                }
                roles.insert(v, tag.to_string());
                v
            };
            match between.len() {
                0 | 1 => {}
                2 => {
                    let extra = add("F-leaf", &[]);
                    f.push(add("F", &[between[0], between[1], extra]));
                    k_prime += 1;
                }
                3 => {
                    f.push(add("F", &between));
                    k_prime += 1;
                }
                _ => {
                    let extra = add("F-leaf", &[]);
                    let outs: Vec<VertexId> = between.iter().copied().chain([extra]).collect();
                    f.push(add("F", &outs));
                    f.push(add("F", &outs));
                    k_prime += 2;
                }
            }
        }
    }
    Ok(MatchingHost { b, k_prime, c, f, roles })
}

fn two_out_stars(count: usize) -> Vec<StarShape> {
    vec![StarShape::new(2, 0); count]
}

/// Disjoint 2-out-stars: `|V1| + k'` of them fit iff a consistent perfect matching exists.
pub fn gen_matching_to_stars(g: &BipartiteInput) -> Result<ReductionOutput, ReductionError> {
    let h = matching_host(g)?;
    let k = g.n1 + h.k_prime;
    let pattern = StarsPathsPattern::new(two_out_stars(k), vec![], None).expect("k >= 1 stars");
    let mut out = ReductionOutput::new(h.b.build(), Target::Pattern(pattern), 0);
    out.roles = h.roles;
    out.note("k_prime", h.k_prime);
    out.note("k", k);
    Ok(out)
}

/// As [`gen_matching_to_stars`], plus a vertex `u` with an arc to every `c(e)` and every
/// vertex of `F`; the target gains a star whose leaves are the centers of the 2-out-stars.
pub fn gen_matching_to_stars_plus_bigstar(g: &BipartiteInput) -> Result<ReductionOutput, ReductionError> {
    let mut h = matching_host(g)?;
    let u = h.b.add_vertex();
    for &x in h.c.iter().chain(&h.f) {
        h.b.add_arc(u, x);
    }
    h.roles.insert(u, "big-center".to_string());
    let k = g.n1 + h.k_prime;
    let mut stars = two_out_stars(k);
    stars.push(StarShape::default());
    let paths = (0..k).map(|i| PatternPath { from: k, to: i, vertex_count: 2 }).collect();
    let pattern = StarsPathsPattern::new(stars, paths, None).expect("valid stars and arcs");
    let mut out = ReductionOutput::new(h.b.build(), Target::Pattern(pattern), 0);
    out.roles = h.roles;
    out.note("k_prime", h.k_prime);
    out.note("k", k);
    Ok(out)
}

/// Variable selector `s` with a 2-armed gadget per variable, clause verifier `c` with one
/// vertex per clause. The target is the 2-subdivided `n`-out-star plus the 1-subdivided
/// `m`-out-star.
pub fn gen_sat22(f: &Formula) -> Result<ReductionOutput, ReductionError> {
    f.validate_two_two()?;
    let (n, m) = (f.vars, f.clauses.len());
    // Layout: s, then per variable v, x1, x2, nx1, nx2, then c, then y_1..y_m.
    let s = 0;
    let var = |i: usize| 1 + 5 * i;
    let c = 1 + 5 * n;
    let y = |j: usize| c + 1 + j;
    let mut b = DigraphBuilder::new(c + 1 + m);
    let mut out_roles = BTreeMap::new();
    out_roles.insert(vid(s), "selector".to_string());
    out_roles.insert(vid(c), "verifier".to_string());
    for i in 0..n {
        let v = var(i);
        b.add_arc(vid(s), vid(v));
        b.add_arc(vid(v), vid(v + 1));
        b.add_arc(vid(v + 1), vid(v + 2));
        b.add_arc(vid(v), vid(v + 3));
        b.add_arc(vid(v + 3), vid(v + 4));
        for (off, tag) in [(0, "v"), (1, "x1"), (2, "x2"), (3, "nx1"), (4, "nx2")] {
            out_roles.insert(vid(v + off), format!("{tag}:{}", i + 1));
        }
    }
    // Occurrence counter per literal picks the first or second vertex of its arm.
    let mut seen: BTreeMap<i32, usize> = BTreeMap::new();
    for (j, clause) in f.clauses.iter().enumerate() {
        b.add_arc(vid(c), vid(y(j)));
        out_roles.insert(vid(y(j)), format!("clause:{}", j + 1));
        for &l in clause {
            let occ = seen.entry(l).or_insert(0);
            let base = var(l.unsigned_abs() as usize - 1) + if l > 0 { 1 } else { 3 };
            b.add_arc(vid(y(j)), vid(base + *occ));
            *occ += 1;
        }
    }
    let host = b.build();
    debug_assert!(is_dag(&host));
    // Stars: 0 = selector, 1..=n arm ends, n+1 = verifier, then m clause ends.
    let mut stars = vec![StarShape::default()];
    let mut paths = Vec::new();
    for i in 1..=n {
        stars.push(StarShape::new(1, 0));
        paths.push(PatternPath { from: 0, to: i, vertex_count: 3 });
    }
    stars.push(StarShape::default());
    for j in 0..m {
        stars.push(StarShape::new(1, 0));
        paths.push(PatternPath { from: n + 1, to: n + 2 + j, vertex_count: 2 });
    }
    let pattern = StarsPathsPattern::new(stars, paths, None).expect("valid subdivided stars");
    let mut out = ReductionOutput::new(host, Target::Pattern(pattern), 0);
    out.roles = out_roles;
    out.note("n", n);
    out.note("m", m);
    Ok(out)
}

/// The 2-out-star host plus a subdivided transitive tournament on the `c(e)` vertices and a
/// vertex `r` closing every cycle. The target is a caterpillar whose spine has `2|V1| + 1`
/// vertices before the final star at `r`.
pub fn gen_caterpillar(g: &BipartiteInput) -> Result<ReductionOutput, ReductionError> {
    let mut h = matching_host(g)?;
    let m = g.edges.len();
    if m <= g.n1 {
        return Err(ReductionError::TooFewEdges);
    }
    let mut u_set = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let x = h.b.add_vertex();
            h.b.add_arc(h.c[i], x);
            h.b.add_arc(x, h.c[j]);
            h.roles.insert(x, format!("U:{i}:{j}"));
            u_set.push(x);
        }
    }
    let r = h.b.add_vertex();
    h.roles.insert(r, "r".to_string());
    for &ce in &h.c {
        h.b.add_arc(ce, r);
    }
    for &x in &u_set {
        h.b.add_arc(r, x);
    }
    // Spine x_1..x_l with l = 2|V1| + 1: odd positions are stars with two out-leaves,
    // joined by paths with one interior vertex; x_l then points to the final star.
    let branching = g.n1 + 1;
    let mut stars = vec![StarShape::new(2, 0); branching];
    let mut paths: Vec<PatternPath> =
        (0..branching - 1).map(|i| PatternPath { from: i, to: i + 1, vertex_count: 3 }).collect();
    stars.push(StarShape::new(u_set.len() - g.n1, 0));
    paths.push(PatternPath { from: branching - 1, to: branching, vertex_count: 2 });
    let pattern = StarsPathsPattern::new(stars, paths, None).expect("valid caterpillar");
    let mut out = ReductionOutput::new(h.b.build(), Target::Pattern(pattern), 1);
    out.roles = h.roles;
    out.note("k_prime", h.k_prime);
    out.note("spine", 2 * g.n1 + 1);
    Ok(out)
}
