//! Oracle-driven suites shared by the acceptance harness.

#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starpaths::decomp::{
    breakability, condensation_decomposition, dag_decomposition, dtw_upper_small, running_example_decomposition,
    subdigraph_breakability, validate, ArborealDecomposition, DecompError,
};
use starpaths::graph::{
    find_subdigraph, is_dag, oracle_find_pattern, reachable, running_example,
    transitive_tournament, validate_embedding, vid, Digraph, Orientation, PatternPath, StarShape,
    StarsPathsPattern, UndirectedGraph, VertexId,
};
use starpaths::reductions::{
    expand, gen_antidirected, gen_caterpillar, gen_clique_to_expansion, gen_matching_to_stars,
    gen_matching_to_stars_plus_bigstar, gen_sat22, AntidirectedInput, BipartiteInput, ExpansionRole, Formula,
    ReductionError, ReductionOutput, Target,
};
use starpaths::rspsi::{find_disjoint_arcs, find_once_subdivided_star, solve_unrooted};
use starpaths::saddp::{oracle_saddp, solve_saddp, validate_solution, AvoidSet, Request, SaddpInstance};
use std::collections::{BTreeMap, BTreeSet, HashSet};

pub const ORACLE_CAP: usize = 64;

/// Counts checked cases and keeps the first few failures.
#[derive(Debug, Default)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
    pub examples: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < 3 {
                self.examples.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.checked > 0 && self.failed == 0
    }

    pub fn absorb(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
        self.examples.extend(other.examples.into_iter().take(3usize.saturating_sub(self.examples.len())));
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{} checked, {} failed", self.checked, self.failed);
        for e in &self.examples {
            s.push_str(&format!("\n      e.g. {e}"));
        }
        s
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_digraph(rng: &mut impl Rng, n: usize, density: std::ops::Range<f64>) -> Digraph {
    let p = rng.gen_range(density);
    let pairs: Vec<(usize, usize)> =
        (0..n).cartesian_product(0..n).filter(|&(u, v)| u != v && rng.gen_bool(p)).collect();
    Digraph::from_pairs(n, &pairs, false).unwrap()
}

/// Arcs follow a hidden random order, so ids do not reveal the topological order.
pub fn random_dag(rng: &mut impl Rng, n: usize, density: std::ops::Range<f64>) -> Digraph {
    let p = rng.gen_range(density);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let pairs: Vec<(usize, usize)> =
        (0..n).tuple_combinations().filter(|_| rng.gen_bool(p)).map(|(i, j)| (order[i], order[j])).collect();
    Digraph::from_pairs(n, &pairs, false).unwrap()
}

/// A random DAG plus a few arcs pointing back at most two steps in its order, so every
/// strong component has at most three vertices.
pub fn random_low_width(rng: &mut impl Rng, n: usize, density: std::ops::Range<f64>) -> Digraph {
    let p = rng.gen_range(density);
    let mut pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().filter(|_| rng.gen_bool(p)).collect();
    for i in 1..n {
        if rng.gen_bool(0.3) {
            let back = i.saturating_sub(rng.gen_range(1..=2));
            let j = if (back / 3) == (i / 3) { back } else { i - 1 };
            if (j / 3) == (i / 3) && !pairs.contains(&(i, j)) {
                pairs.push((i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (order[a], order[b])).collect();
    Digraph::from_pairs(n, &pairs, false).unwrap()
}

fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).cartesian_product(0..n).filter(|(u, v)| u != v).collect()
}

/// Every loopless labelled digraph on `n` vertices.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs = ordered_pairs(n);
    (0u64..1 << pairs.len()).map(move |mask| {
        let chosen: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        Digraph::from_pairs(n, &chosen, false).unwrap()
    })
}

/// One representative per isomorphism class of loopless digraphs on `n` vertices.
pub fn digraph_classes(n: usize) -> Vec<Digraph> {
    let pairs = ordered_pairs(n);
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let canon = perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(0u64, |acc, (_, &(u, v))| acc | 1 << index[&(p[u], p[v])])
            })
            .min()
            .unwrap_or(0);
        if seen.insert(canon) {
            let chosen: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            out.push(Digraph::from_pairs(n, &chosen, false).unwrap());
        }
    }
    out
}

/// Every stars-paths pattern with at most `max_vertices` vertices, up to reordering of
/// the path list.
pub fn all_patterns(max_vertices: usize) -> Vec<StarsPathsPattern> {
    let mut out = Vec::new();
    for k in 1..=max_vertices {
        let shapes: Vec<(usize, usize)> =
            (0..max_vertices).cartesian_product(0..max_vertices).filter(|(o, i)| k + o + i <= max_vertices).collect();
        for stars in (0..k).map(|_| shapes.iter().copied()).multi_cartesian_product() {
            let used = k + stars.iter().map(|(o, i)| o + i).sum::<usize>();
            if used > max_vertices {
                continue;
            }
            let stars: Vec<StarShape> = stars.into_iter().map(|(o, i)| StarShape::new(o, i)).collect();
            let slots: Vec<(usize, usize, usize)> = (0..k)
                .cartesian_product(0..k)
                .flat_map(|(a, b)| (2..=2 + max_vertices - used).map(move |len| (a, b, len)))
                .collect();
            let mut lists: Vec<Vec<(usize, usize, usize)>> = vec![vec![]];
            grow_path_lists(&slots, 0, max_vertices - used, &mut vec![], &mut lists);
            for list in lists {
                let paths = list.iter().map(|&(from, to, vertex_count)| PatternPath { from, to, vertex_count }).collect();
                if let Ok(p) = StarsPathsPattern::new(stars.clone(), paths, None) {
                    if p.vertex_count() <= max_vertices {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn grow_path_lists(
    slots: &[(usize, usize, usize)],
    start: usize,
    room: usize,
    cur: &mut Vec<(usize, usize, usize)>,
    out: &mut Vec<Vec<(usize, usize, usize)>>,
) {
    for (i, &s) in slots.iter().enumerate().skip(start) {
        let cost = s.2 - 2;
        if cost > room || cur.len() >= 3 {
            continue;
        }
        cur.push(s);
        out.push(cur.clone());
        grow_path_lists(slots, i, room - cost, cur, out);
        cur.pop();
    }
}

/// Random unrooted pattern with up to three stars and three paths.
pub fn random_pattern(rng: &mut impl Rng, max_vertices: usize) -> StarsPathsPattern {
    loop {
        let k = rng.gen_range(1..=3);
        let stars: Vec<StarShape> = (0..k).map(|_| StarShape::new(rng.gen_range(0..3), rng.gen_range(0..2))).collect();
        let paths: Vec<PatternPath> = (0..rng.gen_range(0..=3))
            .map(|_| PatternPath { from: rng.gen_range(0..k), to: rng.gen_range(0..k), vertex_count: rng.gen_range(2..=5) })
            .collect();
        if let Ok(p) = StarsPathsPattern::new(stars, paths, None) {
            if p.vertex_count() <= max_vertices {
                return p;
            }
        }
    }
}

/// A decomposition for the solvers: the exact small-width search when it fits, else the
/// condensation.
pub fn some_decomposition(d: &Digraph) -> ArborealDecomposition {
    if d.n() <= 7 {
        if let Ok(Some(b)) = dtw_upper_small(d, d.n()) {
            return b.decomposition;
        }
    }
    condensation_decomposition(d)
}

// --- 1 ---

pub fn running_example_fixture() -> Tally {
    let mut t = Tally::default();
    let d = running_example();
    let dec = running_example_decomposition();
    let width = validate(&d, &dec);
    t.check(width == Ok(2), || format!("width {width:?}"));

    let v = |xs: &[usize]| xs.iter().map(|&x| vid(x)).collect::<Vec<_>>();
    let broken = ArborealDecomposition::new(
        0,
        vec![v(&[0]), v(&[1, 2]), v(&[3, 4]), v(&[5, 6])],
        vec![(0, 1, vec![]), (1, 2, v(&[1])), (1, 3, v(&[2]))],
    )
    .unwrap();
    let below: BTreeSet<VertexId> = (1..7).map(vid).collect();
    match validate(&d, &broken) {
        Err(DecompError::GuardViolation { edge, certificate }) => {
            let walk = certificate.violating_walk.unwrap_or_default();
            let ok = edge == (0, 1)
                && walk.len() >= 2
                && below.contains(&walk[0])
                && below.contains(walk.last().unwrap())
                && walk.iter().any(|x| !below.contains(x))
                && walk.windows(2).all(|w| d.has_arc(w[0], w[1]));
            t.check(ok, || format!("bad certificate {walk:?} on {edge:?}"));
        }
        other => t.check(false, || format!("expected a guard violation, got {other:?}")),
    }
    t
}

// --- 2 ---

pub fn dags_have_width_zero(seed: u64, count: usize) -> Tally {
    let mut t = Tally::default();
    let mut r = rng(seed);
    for _ in 0..count {
        let n = r.gen_range(1..=20);
        let d = random_dag(&mut r, n, 0.05..0.5);
        let w = dag_decomposition(&d).map_err(|e| e.to_string()).and_then(|dec| validate(&d, &dec).map_err(|e| e.to_string()));
        t.check(w == Ok(0), || format!("n={n}: {w:?}"));
    }
    t
}

// --- 3 ---

/// All simple directed paths, as vertex sequences, including single vertices.
fn simple_paths(d: &Digraph) -> Vec<Vec<VertexId>> {
    fn grow(d: &Digraph, cur: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        out.push(cur.clone());
        let last = *cur.last().unwrap();
        for &w in d.out_neighbors(last) {
            if !cur.contains(&w) {
                cur.push(w);
                grow(d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in d.vertices() {
        grow(d, &mut vec![v], &mut out);
    }
    out
}

fn path_system_bound(d: &Digraph, system: &[&Vec<VertexId>], t: &mut Tally) {
    let vertices: BTreeSet<VertexId> = system.iter().flat_map(|p| p.iter().copied()).collect();
    let arcs: Vec<(VertexId, VertexId)> = system.iter().flat_map(|p| p.windows(2).map(|w| (w[0], w[1]))).collect();
    let k = system.len();
    for w in 0..=2 {
        let b = subdigraph_breakability(d, &vertices, &arcs, w).expect("small host");
        t.check(b <= k + w, || format!("{:?} paths {:?} w={w}: {b} > {}", d.arcs(), system, k + w));
    }
}

/// Every system of at most three disjoint paths in every class of hosts up to
/// `exhaustive_n` vertices, then random systems in random hosts up to eight vertices.
pub fn path_breakability(exhaustive_n: usize, seed: u64, random_hosts: usize) -> Tally {
    let mut t = Tally::default();
    for n in 1..=exhaustive_n {
        for d in digraph_classes(n) {
            let paths = simple_paths(&d);
            for k in 1..=3 {
                for system in paths.iter().combinations(k) {
                    let mut seen = BTreeSet::new();
                    if system.iter().flat_map(|p| p.iter()).all(|v| seen.insert(*v)) {
                        path_system_bound(&d, &system, &mut t);
                    }
                }
            }
        }
    }
    let mut r = rng(seed);
    for _ in 0..random_hosts {
        let n = r.gen_range(exhaustive_n + 1..=8);
        let d = random_digraph(&mut r, n, 0.15..0.6);
        let paths = simple_paths(&d);
        for _ in 0..5 {
            let k = r.gen_range(1..=3);
            let mut used = BTreeSet::new();
            let mut system = Vec::new();
            for p in paths.choose_multiple(&mut r, paths.len()) {
                if system.len() == k {
                    break;
                }
                if p.iter().all(|v| !used.contains(v)) {
                    used.extend(p.iter().copied());
                    system.push(p);
                }
            }
            path_system_bound(&d, &system, &mut t);
        }
    }
    t
}

// --- 4 ---

fn saddp_case(inst: &SaddpInstance, dec: &ArborealDecomposition, t: &mut Tally) {
    let want = oracle_saddp(inst).expect("small instance");
    let got = solve_saddp(inst, dec);
    let ok = match (&got, &want) {
        (Ok(Some(sol)), Some(w)) => validate_solution(inst, sol).is_ok() && validate_solution(inst, w).is_ok(),
        (Ok(None), None) => true,
        _ => false,
    };
    t.check(ok, || format!("{inst:?}: solver {got:?}, oracle {want:?}"));
}

/// Every digraph on up to three vertices with one request and at most one avoid set, and
/// with two unconstrained requests.
pub fn saddp_exhaustive() -> Tally {
    let mut t = Tally::default();
    for n in 1..=3 {
        for d in all_digraphs(n) {
            let dec = some_decomposition(&d);
            let subsets: Vec<BTreeSet<VertexId>> =
                (0u32..1 << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(vid).collect()).collect();
            let requests: Vec<Request> = (0..n)
                .cartesian_product(0..n)
                .flat_map(|(s, t)| {
                    let lo = if s == t { 3 } else { 2 };
                    (lo..=4).map(move |size| Request { source: vid(s), target: vid(t), size })
                })
                .collect();
            for &req in &requests {
                let mut sets = vec![vec![]];
                for s in &subsets {
                    for budget in 0..=1 {
                        sets.push(vec![AvoidSet { vertices: s.clone(), budget }]);
                    }
                }
                for avoid in sets {
                    let inst = SaddpInstance::new(d.clone(), vec![req], avoid).unwrap();
                    saddp_case(&inst, &dec, &mut t);
                }
            }
            for (a, b) in requests.iter().tuple_combinations() {
                let inst = SaddpInstance::new(d.clone(), vec![*a, *b], vec![]).unwrap();
                saddp_case(&inst, &dec, &mut t);
            }
        }
    }
    t
}

/// Random instances with at most eight vertices, two requests, two avoid sets and a
/// decomposition of width at most two.
pub fn saddp_random(seed: u64, count: usize) -> Tally {
    let mut t = Tally::default();
    let mut r = rng(seed);
    while t.checked < count {
        let n = r.gen_range(2..=8);
        let d = if r.gen_bool(0.5) && n <= 7 {
            random_digraph(&mut r, n, 0.15..0.45)
        } else {
            random_low_width(&mut r, n, 0.15..0.5)
        };
        let dec = if n <= 7 {
            match dtw_upper_small(&d, 2) {
                Ok(Some(b)) if b.width_upper_bound <= 2 => b.decomposition,
                _ => continue,
            }
        } else {
            condensation_decomposition(&d)
        };
        if validate(&d, &dec).map_or(true, |w| w > 2) {
            continue;
        }
        let requests: Vec<Request> = (0..r.gen_range(1..=2))
            .map(|_| {
                let (s, tt) = (r.gen_range(0..n), r.gen_range(0..n));
                let lo = if s == tt { 3 } else { 2 };
                Request { source: vid(s), target: vid(tt), size: r.gen_range(lo..=lo + 4) }
            })
            .collect();
        let avoid_sets: Vec<AvoidSet> = (0..r.gen_range(0..=2))
            .map(|_| AvoidSet {
                vertices: (0..n).filter(|_| r.gen_bool(0.4)).map(vid).collect(),
                budget: r.gen_range(0..=3),
            })
            .collect();
        let inst = SaddpInstance::new(d, requests, avoid_sets).unwrap();
        saddp_case(&inst, &dec, &mut t);
    }
    t
}

// --- 5 ---

fn rspsi_case(d: &Digraph, dec: Option<&ArborealDecomposition>, p: &StarsPathsPattern, t: &mut Tally) {
    let want = oracle_find_pattern(d, p, ORACLE_CAP).expect("small pattern").is_some();
    let got = solve_unrooted(d, p, dec);
    let ok = match &got {
        Ok(Some(e)) => want && validate_embedding(d, p, e).is_ok(),
        Ok(None) => !want,
        Err(_) => false,
    };
    t.check(ok, || format!("host {:?} n={} pattern {p:?}: solver {got:?}, oracle {want}", d.arcs(), d.n()));
}

fn rspsi_decomposition(d: &Digraph) -> Option<ArborealDecomposition> {
    (!is_dag(d)).then(|| some_decomposition(d))
}

/// Every pattern with at most five vertices against every host class with at most
/// `exhaustive_n` vertices, then against random hosts with up to six vertices.
pub fn rspsi_exhaustive(exhaustive_n: usize, seed: u64, random_hosts: usize) -> Tally {
    let mut t = Tally::default();
    let patterns = all_patterns(5);
    for n in 1..=exhaustive_n {
        for d in digraph_classes(n) {
            let dec = rspsi_decomposition(&d);
            for p in &patterns {
                rspsi_case(&d, dec.as_ref(), p, &mut t);
            }
        }
    }
    let mut r = rng(seed);
    for _ in 0..random_hosts {
        let n = r.gen_range(exhaustive_n + 1..=6);
        let d = random_digraph(&mut r, n, 0.15..0.5);
        let dec = rspsi_decomposition(&d);
        for p in &patterns {
            rspsi_case(&d, dec.as_ref(), p, &mut t);
        }
    }
    t
}

pub fn rspsi_random(seed: u64, count: usize) -> Tally {
    let mut t = Tally::default();
    let mut r = rng(seed);
    for _ in 0..count {
        let n = r.gen_range(1..=10);
        let d = if r.gen_bool(0.5) {
            random_dag(&mut r, n, 0.1..0.5)
        } else {
            random_low_width(&mut r, n, 0.1..0.5)
        };
        let p = random_pattern(&mut r, 8);
        let dec = rspsi_decomposition(&d);
        rspsi_case(&d, dec.as_ref(), &p, &mut t);
    }
    t
}

// --- 6 ---

/// Whether some simple directed cycle has at least three vertices.
pub fn has_long_cycle(d: &Digraph) -> bool {
    fn go(d: &Digraph, start: VertexId, cur: &mut Vec<VertexId>) -> bool {
        let last = *cur.last().unwrap();
        d.out_neighbors(last).iter().any(|&w| {
            if w == start {
                return cur.len() >= 3;
            }
            if w < start || cur.contains(&w) {
                return false;
            }
            cur.push(w);
            let found = go(d, start, cur);
            cur.pop();
            found
        })
    }
    d.vertices().any(|v| go(d, v, &mut vec![v]))
}

pub fn max_degree(d: &Digraph) -> usize {
    d.vertices().map(|v| d.total_degree(v)).max().unwrap_or(0)
}

/// A second, straight-line expansion over a plain arc set, used only to cross-check
/// vertex and arc counts.
pub fn reference_expansion(d: &Digraph) -> (usize, BTreeSet<(usize, usize)>) {
    fn tree(root: usize, leaves: &[usize], next: &mut usize, arcs: &mut Vec<(usize, usize)>) {
        if leaves.len() == 1 {
            arcs.push((root, leaves[0]));
            return;
        }
        let mid = (leaves.len() + 1) / 2;
        for half in [&leaves[..mid], &leaves[mid..]] {
            if half.len() == 1 {
                arcs.push((root, half[0]));
            } else {
                let x = *next;
                *next += 1;
                arcs.push((root, x));
                tree(x, half, next, arcs);
            }
        }
    }
    let n = d.n();
    let mut next = n;
    let mut all = BTreeSet::new();
    for u in 0..n {
        let outs: Vec<usize> = d.out_neighbors(vid(u)).iter().map(|v| v.index()).collect();
        if outs.is_empty() {
            continue;
        }
        let mut raw = Vec::new();
        tree(u, &outs, &mut next, &mut raw);
        let mut arcs = Vec::new();
        for (p, c) in raw {
            if p == u && c < n {
                arcs.push((u, next));
                arcs.push((next, c));
                next += 1;
            } else {
                arcs.push((p, c));
            }
        }
        for &(p, c) in &arcs {
            all.insert((p, c));
            if p >= n && c >= n {
                all.insert((c, p));
            }
        }
        let kids: Vec<usize> = arcs.iter().filter(|a| a.0 == u).map(|a| a.1).collect();
        if kids.len() == 2 {
            all.insert((kids[0], kids[1]));
            all.insert((kids[1], kids[0]));
        }
    }
    for u in 0..n {
        let ins: Vec<usize> = all.iter().filter(|a| a.1 == u).map(|a| a.0).collect();
        if ins.len() <= 2 {
            continue;
        }
        for &x in &ins {
            all.remove(&(x, u));
        }
        let first = next;
        let mut raw = Vec::new();
        tree(u, &ins, &mut next, &mut raw);
        let mut arcs = Vec::new();
        for (p, c) in raw {
            if p == u && c < first {
                arcs.push((u, next));
                arcs.push((next, c));
                next += 1;
            } else {
                arcs.push((p, c));
            }
        }
        for &(p, c) in &arcs {
            all.insert((c, p));
            if p >= first && c >= first {
                all.insert((p, c));
            }
        }
        let kids: Vec<usize> = arcs.iter().filter(|a| a.0 == u).map(|a| a.1).collect();
        if kids.len() == 2 {
            all.insert((kids[0], kids[1]));
            all.insert((kids[1], kids[0]));
        }
    }
    for u in 0..n {
        all.insert((u, u));
    }
    (next, all)
}

/// Degree, long cycles and reachability over small bases, plus the tournament claims.
pub fn expansion_lemmas() -> Tally {
    let mut t = Tally::default();
    for n in 1..=4 {
        for d in all_digraphs(n) {
            let (e, roles) = expand(&d).unwrap();
            let deg = max_degree(&e);
            t.check(deg <= 7, || format!("{:?}: degree {deg}", d.arcs()));
            let dag = is_dag(&d);
            if dag {
                t.check(!has_long_cycle(&e), || format!("{:?}: cycle longer than two", d.arcs()));
            }
            let none = BTreeSet::new();
            for (u, v) in (0..n).cartesian_product(0..n) {
                let a = reachable(&d, vid(u), vid(v), &none).unwrap();
                let b = reachable(&e, vid(u), vid(v), &none).unwrap();
                t.check(a == b, || format!("{:?}: reach {u}->{v} {a} vs {b}", d.arcs()));
            }
            let type2_to_type1 = e.arcs().iter().any(|(x, y)| {
                matches!(roles[x.index()], ExpansionRole::Type2(_)) && matches!(roles[y.index()], ExpansionRole::Type1(_))
            });
            t.check(!type2_to_type1, || format!("{:?}: arc from type-2 to type-1", d.arcs()));
            if dag && e.n() <= 7 {
                let w = dtw_upper_small(&e, e.n()).unwrap().map(|b| b.width_upper_bound);
                t.check(w.is_some_and(|w| w <= 3), || format!("{:?}: width {w:?}", d.arcs()));
            }
        }
    }
    for k in 1..=4 {
        let (e, _) = expand(&transitive_tournament(k)).unwrap();
        let none = BTreeSet::new();
        for (u, v) in e.vertices().collect::<Vec<_>>().into_iter().tuple_combinations() {
            let ok = reachable(&e, u, v, &none).unwrap() || reachable(&e, v, u, &none).unwrap();
            t.check(ok, || format!("TT{k}: no path between {u} and {v}"));
        }
        let all: BTreeSet<VertexId> = e.vertices().collect();
        for w in 0..=1u32 {
            let b = breakability(&e, &all, w as usize).unwrap();
            t.check(b <= 4usize.pow(w), || format!("TT{k}: {w}-breakability {b}"));
        }
    }
    t
}

/// Expansion sizes of small tournaments, frozen from [`reference_expansion`].
pub const TOURNAMENT_EXPANSION_SIZES: [(usize, usize); 5] = [(1, 1), (3, 4), (6, 11), (11, 23), (16, 36)];

pub fn expansion_regression() -> Tally {
    let mut t = Tally::default();
    for (k, &(vn, an)) in TOURNAMENT_EXPANSION_SIZES.iter().enumerate() {
        let tt = transitive_tournament(k + 1);
        let (e, _) = expand(&tt).unwrap();
        let (rn, rarcs) = reference_expansion(&tt);
        let mine: BTreeSet<(usize, usize)> = e.arcs().iter().map(|(u, v)| (u.index(), v.index())).collect();
        t.check(e.n() == rn && mine == rarcs, || format!("TT{}: differs from the reference", k + 1));
        t.check((e.n(), e.arc_count()) == (vn, an), || format!("TT{}: {} vertices {} arcs", k + 1, e.n(), e.arc_count()));
    }
    t
}

// --- 7 ---

/// One suite per generator, keyed by name.
pub fn reductions_all(caterpillar_max_n: usize) -> Vec<(&'static str, Tally)> {
    vec![
        ("clique->expansion", clique_suite()),
        ("antidirected", antidirected_suite()),
        ("matching->2-out-stars", bipartite_suite(3, gen_matching_to_stars, |o| is_dag(&o.host))),
        ("matching->stars+big", bipartite_suite(3, gen_matching_to_stars_plus_bigstar, |o| is_dag(&o.host))),
        ("sat22->subdivided stars", sat22_suite()),
        ("matching->caterpillar", bipartite_suite(caterpillar_max_n, gen_caterpillar, cycles_through_r)),
    ]
}

fn all_undirected(n: usize) -> impl Iterator<Item = UndirectedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    (0u32..1 << pairs.len()).map(move |m| {
        let e: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &p)| p).collect();
        UndirectedGraph::new(n, &e).unwrap()
    })
}

fn has_clique(g: &UndirectedGraph, k: usize) -> bool {
    (0..g.n()).combinations(k).any(|c| c.iter().tuple_combinations().all(|(&a, &b)| g.has_edge(a, b)))
}

fn host_contains(out: &ReductionOutput) -> bool {
    match &out.target {
        Target::Pattern(p) => oracle_find_pattern(&out.host, p, 512).unwrap().is_some(),
        Target::Digraph(h) => find_subdigraph(&out.host, h, &[], 512).unwrap().is_some(),
    }
}

pub fn clique_suite() -> Tally {
    let mut t = Tally::default();
    for n in 1..=5 {
        for g in all_undirected(n) {
            let out = gen_clique_to_expansion(&g, 3).unwrap();
            t.check(max_degree(&out.host) <= 7 && !has_long_cycle(&out.host), || format!("{:?}: structure", g.edges()));
            for k in 2..=n.min(4) {
                let out = gen_clique_to_expansion(&g, k).unwrap();
                let want = has_clique(&g, k);
                let got = host_contains(&out);
                t.check(want == got, || format!("{:?} k={k}: clique {want}, host {got}", g.edges()));
            }
        }
    }
    t
}

/// An antidirected path between the terminals, found by direct search over simple
/// alternating walks.
fn antidirected_between(d: &Digraph, s: VertexId, t: VertexId) -> bool {
    fn go(d: &Digraph, u: VertexId, forward: bool, t: VertexId, on: &mut Vec<bool>) -> bool {
        let next = if forward { d.out_neighbors(u) } else { d.in_neighbors(u) };
        next.iter().any(|&w| {
            if w == t {
                return true;
            }
            if on[w.index()] {
                return false;
            }
            on[w.index()] = true;
            let found = go(d, w, !forward, t, on);
            on[w.index()] = false;
            found
        })
    }
    [true, false].into_iter().any(|first| {
        let mut on = vec![false; d.n()];
        on[s.index()] = true;
        go(d, s, first, t, &mut on)
    })
}

pub fn antidirected_suite() -> Tally {
    let mut t = Tally::default();
    for n in 2..=4 {
        for g in all_undirected(n) {
            let edges = g.edges().to_vec();
            let pairs: Vec<((usize, usize), (usize, usize))> = edges.iter().copied().tuple_combinations().collect();
            let sets = pairs.iter().map(|&p| vec![p]).chain(pairs.iter().tuple_combinations().map(|(&a, &b)| vec![a, b]));
            for pair_set in sets {
                let input = AntidirectedInput { graph: g.clone(), s: 0, t: n - 1, pairs: pair_set };
                let out = gen_antidirected(&input).unwrap();
                let identified: Vec<VertexId> =
                    out.roles.iter().filter(|(_, r)| r.starts_with("identified")).map(|(&v, _)| v).collect();
                let shape = is_dag(&out.host)
                    && identified.iter().all(|&v| out.host.in_degree(v) == 2 && out.host.out_degree(v) == 2);
                t.check(shape, || format!("{}: structure", starpaths::reductions::write_antidirected_input(&input)));
                let want = input.has_pair_avoiding_path();
                let got = antidirected_between(&out.host, vid(input.s), vid(input.t));
                t.check(want == got, || {
                    format!("{}: source {want}, host {got}", starpaths::reductions::write_antidirected_input(&input).replace('\n', "; "))
                });
            }
        }
    }
    t
}

/// Partitions of `0..n` into blocks of size one or two.
pub fn small_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(rest: &[usize]) -> Vec<Vec<Vec<usize>>> {
        let Some((&a, tail)) = rest.split_first() else { return vec![vec![]] };
        let mut out: Vec<Vec<Vec<usize>>> = rec(tail).into_iter().map(|mut p| {
            p.insert(0, vec![a]);
            p
        }).collect();
        for (i, &b) in tail.iter().enumerate() {
            let mut others = tail.to_vec();
            others.remove(i);
            out.extend(rec(&others).into_iter().map(|mut p| {
                p.insert(0, vec![a, b]);
                p
            }));
        }
        out
    }
    rec(&(0..n).collect::<Vec<_>>())
}

/// Every bipartite input with `|V1| = |V2| <= max_n`, all edge sets and all partitions.
pub fn all_bipartite(max_n: usize) -> Vec<BipartiteInput> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let all: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).collect();
        for mask in 0u32..1 << all.len() {
            let edges: Vec<(usize, usize)> = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            for (p1, p2) in small_partitions(n).into_iter().cartesian_product(small_partitions(n)) {
                let b = BipartiteInput { n1: n, n2: n, edges: edges.clone(), part1: p1, part2: p2.clone() };
                if b.validate().is_ok() {
                    out.push(b);
                }
            }
        }
    }
    out
}

fn cycles_through_r(out: &ReductionOutput) -> bool {
    let r = out.with_role("r");
    let [r] = r[..] else { return false };
    let keep: BTreeSet<VertexId> = out.host.vertices().filter(|&v| v != r).collect();
    let (rest, _) = out.host.induced(&keep);
    is_dag(&rest)
}

fn bipartite_suite(
    max_n: usize,
    generate: fn(&BipartiteInput) -> Result<ReductionOutput, ReductionError>,
    structure: fn(&ReductionOutput) -> bool,
) -> Tally {
    let mut t = Tally::default();
    for b in all_bipartite(max_n) {
        let out = match generate(&b) {
            Ok(o) => o,
            Err(ReductionError::TooFewEdges) => continue,
            Err(e) => panic!("{e}"),
        };
        let text = || starpaths::reductions::write_bipartite(&b).replace('\n', "; ");
        t.check(structure(&out), || format!("{}: structure", text()));
        let want = b.has_consistent_perfect_matching();
        let got = host_contains(&out);
        t.check(want == got, || format!("{}: source {want}, host {got}", text()));
    }
    t
}

/// Every (2,2)-formula over three variables, up to clause order and literal order.
pub fn all_two_two_formulas() -> Vec<Formula> {
    let lits: Vec<i32> = (1..=3).flat_map(|v| [v, v, -v, -v]).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    fn split(rest: &mut Vec<i32>, cur: &mut Vec<Vec<i32>>, seen: &mut BTreeSet<Vec<Vec<i32>>>, out: &mut Vec<Formula>) {
        if rest.is_empty() {
            let mut key: Vec<Vec<i32>> = cur.iter().map(|c| c.iter().copied().sorted().collect()).collect();
            key.sort();
            if seen.insert(key.clone()) {
                out.push(Formula { vars: 3, clauses: key });
            }
            return;
        }
        let first = rest.remove(0);
        for (i, j) in (0..rest.len()).tuple_combinations() {
            let (a, b) = (rest[i], rest[j]);
            let mut left = rest.clone();
            left.remove(j);
            left.remove(i);
            cur.push(vec![first, a, b]);
            split(&mut left, cur, seen, out);
            cur.pop();
        }
        rest.insert(0, first);
    }
    split(&mut lits.clone(), &mut vec![], &mut seen, &mut out);
    out
}

pub fn sat22_suite() -> Tally {
    let mut t = Tally::default();
    for f in all_two_two_formulas() {
        let out = gen_sat22(&f).unwrap();
        t.check(is_dag(&out.host), || format!("{:?}: not a DAG", f.clauses));
        let want = f.brute_force_satisfiable();
        let got = host_contains(&out);
        t.check(want == got, || format!("{:?}: satisfiable {want}, host {got}", f.clauses));
    }
    t
}

// --- 8 ---

pub fn polynomial_cases(seed: u64, count: usize) -> Tally {
    let mut t = Tally::default();
    let mut r = rng(seed);
    for _ in 0..count {
        let n = r.gen_range(1..=10);
        let d = if r.gen_bool(0.5) { random_dag(&mut r, n, 0.1..0.5) } else { random_digraph(&mut r, n, 0.1..0.4) };
        t.check(find_disjoint_arcs(&d, 0).is_some(), || "zero arcs always fit".into());
        for l in 1..=n / 2 + 1 {
            let p = StarsPathsPattern::disjoint_arcs(l).unwrap();
            let want = oracle_find_pattern(&d, &p, ORACLE_CAP).unwrap().is_some();
            let got = find_disjoint_arcs(&d, l);
            let ok = match &got {
                Some(e) => want && validate_embedding(&d, &p, e).is_ok(),
                None => !want,
            };
            t.check(ok, || format!("{:?} n={n} arcs l={l}: oracle {want}, got {got:?}", d.arcs()));
        }
        for l in 1..=n / 2 + 1 {
            for o in [Orientation::Out, Orientation::In] {
                let p = StarsPathsPattern::once_subdivided_star(l, o);
                let want = oracle_find_pattern(&d, &p, ORACLE_CAP).unwrap().is_some();
                let got = find_once_subdivided_star(&d, l, o);
                let ok = match &got {
                    Some(e) => want && validate_embedding(&d, &p, e).is_ok(),
                    None => !want,
                };
                t.check(ok, || format!("{:?} n={n} star l={l} {o:?}: oracle {want}, got {got:?}", d.arcs()));
            }
        }
    }
    t
}
