//! The itinerary engine.
//!
//! An itinerary for a vertex set `A` answers: given pieces `L = [(a_1, z_1), ...]` with
//! endpoints in `A`, which (size vector, usage vector) pairs are realised by pairwise
//! vertex-disjoint paths in `D[A]`, path `j` running from `a_j` to `z_j`? A piece with
//! `a_j = z_j` is the single vertex `a_j`. Answers are Pareto frontiers: for each size
//! vector only the usage vectors not dominated by another realised one, each with a
//! witness. Itineraries are plans built by three constructors and evaluated lazily with
//! memoisation on `(plan, L)`.

use crate::graph::Digraph;
use std::collections::HashMap;
use std::rc::Rc;

/// Vertex set over at most 128 vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub(crate) struct Bits(pub u128);

impl Bits {
    pub fn has(self, v: u8) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn with(self, v: u8) -> Self {
        Bits(self.0 | 1 << v)
    }

    pub fn and(self, o: Bits) -> Bits {
        Bits(self.0 & o.0)
    }

    pub fn minus(self, o: Bits) -> Bits {
        Bits(self.0 & !o.0)
    }

    pub fn or(self, o: Bits) -> Bits {
        Bits(self.0 | o.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let v = rest.trailing_zeros() as u8;
            rest &= rest - 1;
            Some(v)
        })
    }
}

pub(crate) type Piece = (u8, u8);

#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub sizes: Vec<u8>,
    pub usage: Vec<u8>,
    pub paths: Rc<Vec<Vec<u8>>>,
}

pub(crate) type Frontier = Rc<Vec<Entry>>;

#[derive(Debug, Clone)]
pub(crate) enum Plan {
    /// The inner itinerary (if any) extended by a handful of vertices handled by brute force.
    Small { set: Bits, inner: Option<usize>, b: Bits },
    /// Two disjoint itineraries. When `sequential`, no arc runs from `b` to `a`; otherwise
    /// every path inside the union is assumed to visit `b` at most once.
    Join { set: Bits, a: usize, b: usize, sequential: bool },
}

impl Plan {
    pub fn set(&self) -> Bits {
        match self {
            Plan::Small { set, .. } | Plan::Join { set, .. } => *set,
        }
    }
}

pub(crate) struct Engine {
    out: Vec<Bits>,
    inn: Vec<Bits>,
    /// Bit `j` set when the vertex counts towards avoid set `j`.
    member: Vec<u32>,
    k: usize,
    /// Entries with a larger piece are discarded.
    max_piece: u8,
    pub plans: Vec<Plan>,
    memo: HashMap<(usize, Vec<Piece>), Frontier>,
}

/// Keeps, per size vector, the usage vectors not dominated by another.
#[derive(Default)]
struct FrontierBuilder {
    by_sizes: HashMap<Vec<u8>, Vec<Entry>>,
}

fn dominates(a: &[u8], b: &[u8]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl FrontierBuilder {
    fn insert(&mut self, e: Entry) {
        let list = self.by_sizes.entry(e.sizes.clone()).or_default();
        if list.iter().any(|o| dominates(&o.usage, &e.usage)) {
            return;
        }
        list.retain(|o| !dominates(&e.usage, &o.usage));
        list.push(e);
    }

    fn finish(self) -> Frontier {
        let mut all: Vec<Entry> = self.by_sizes.into_values().flatten().collect();
        all.sort_by(|a, b| (&a.sizes, &a.usage).cmp(&(&b.sizes, &b.usage)));
        Rc::new(all)
    }
}

/// One step of a skeleton: a vertex handled directly, or the index of a sub-piece.
#[derive(Debug, Clone, Copy)]
enum Step {
    Vertex(u8),
    Sub(usize),
}

/// Partial routing of all pieces at one plan node.
#[derive(Clone, Default)]
struct Skeleton {
    steps: Vec<Vec<Step>>,
    /// Sub-pieces sent to each side (side 0 for `Small`'s inner plan).
    subs: [Vec<Piece>; 2],
    /// For each sub-piece in concatenated order: side and index.
    sub_side: Vec<(usize, usize)>,
    direct_count: Vec<u8>,
    direct_usage: Vec<u8>,
    /// Endpoints claimed on each side.
    ends: [Bits; 2],
    used: Bits,
}

impl Engine {
    pub fn new(d: &Digraph, member: Vec<u32>, k: usize, max_piece: u8) -> Self {
        assert!(d.n() <= 128, "engine works on at most 128 vertices");
        let mut out = vec![Bits::default(); d.n()];
        let mut inn = vec![Bits::default(); d.n()];
        for &(u, v) in d.arcs() {
            if u != v {
                out[u.index()] = out[u.index()].with(v.index() as u8);
                inn[v.index()] = inn[v.index()].with(u.index() as u8);
            }
        }
        Engine { out, inn, member, k, max_piece, plans: Vec::new(), memo: HashMap::new() }
    }

    /// Whether some arc leaves `a` and enters `b`.
    pub fn has_arc_between(&self, a: Bits, b: Bits) -> bool {
        a.iter().any(|v| !self.out[v as usize].and(b).is_empty())
    }

    pub fn add(&mut self, plan: Plan) -> usize {
        self.plans.push(plan);
        self.plans.len() - 1
    }

    fn add_usage(&self, usage: &mut [u8], v: u8) {
        let m = self.member[v as usize];
        for (j, u) in usage.iter_mut().enumerate() {
            *u += (m >> j & 1) as u8;
        }
    }

    /// Frontier of the itinerary of `plan` for the pieces `l`.
    pub fn query(&mut self, plan: usize, l: &[Piece]) -> Frontier {
        if l.is_empty() {
            return Rc::new(vec![Entry { sizes: vec![], usage: vec![0; self.k], paths: Rc::new(vec![]) }]);
        }
        let key = (plan, l.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let set = self.plans[plan].set();
        let mut ends = Bits::default();
        let mut ok = true;
        for &(s, t) in l {
            for v in if s == t { vec![s] } else { vec![s, t] } {
                ok &= set.has(v) && !ends.has(v);
                ends = ends.with(v);
            }
        }
        let result = if ok {
            match self.plans[plan].clone() {
                Plan::Small { inner, b, .. } => self.eval_small(inner, b, l),
                Plan::Join { a, b, sequential, .. } => self.eval_join(a, b, sequential, l),
            }
        } else {
            Rc::new(Vec::new())
        };
        self.memo.insert(key, result.clone());
        result
    }

    fn empty_skeleton(&self, pieces: usize) -> Skeleton {
        Skeleton {
            steps: vec![Vec::new(); pieces],
            direct_count: vec![0; pieces],
            direct_usage: vec![0; self.k],
            ..Skeleton::default()
        }
    }

    /// Completes routings into frontier entries by querying the sub-itineraries.
    fn assemble(&mut self, sides: [Option<usize>; 2], skeletons: Vec<Skeleton>, out: &mut FrontierBuilder) {
        for sk in skeletons {
            let mut fronts: [Frontier; 2] = [Rc::new(vec![]), Rc::new(vec![])];
            let mut feasible = true;
            for side in 0..2 {
                if sk.subs[side].is_empty() {
                    fronts[side] = self.query_empty();
                    continue;
                }
                match sides[side] {
                    Some(p) => fronts[side] = self.query(p, &sk.subs[side]),
                    None => feasible = false,
                }
            }
            if !feasible {
                continue;
            }
            for ea in fronts[0].iter() {
                for eb in fronts[1].iter() {
                    if let Some(e) = self.combine_entry(&sk, [ea, eb]) {
                        out.insert(e);
                    }
                }
            }
        }
    }

    fn query_empty(&self) -> Frontier {
        Rc::new(vec![Entry { sizes: vec![], usage: vec![0; self.k], paths: Rc::new(vec![]) }])
    }

    fn combine_entry(&self, sk: &Skeleton, parts: [&Entry; 2]) -> Option<Entry> {
        let mut usage = sk.direct_usage.clone();
        for p in parts {
            for (u, x) in usage.iter_mut().zip(&p.usage) {
                *u += x;
            }
        }
        let mut sizes = sk.direct_count.clone();
        let mut paths = Vec::with_capacity(sk.steps.len());
        for (j, steps) in sk.steps.iter().enumerate() {
            let mut path = Vec::new();
            for st in steps {
                match *st {
                    Step::Vertex(v) => path.push(v),
                    Step::Sub(i) => {
                        let (side, idx) = sk.sub_side[i];
                        sizes[j] += parts[side].sizes[idx];
                        path.extend_from_slice(&parts[side].paths[idx]);
                    }
                }
            }
            if sizes[j] > self.max_piece {
                return None;
            }
            paths.push(path);
        }
        Some(Entry { sizes, usage, paths: Rc::new(paths) })
    }

    fn eval_small(&mut self, inner: Option<usize>, b: Bits, l: &[Piece]) -> Frontier {
        let a_set = inner.map_or(Bits::default(), |p| self.plans[p].set());
        let mut terms = Bits::default();
        for &(s, t) in l {
            terms = terms.with(s).with(t);
        }
        let mut skeletons = Vec::new();
        let start = self.empty_skeleton(l.len());
        self.route_small(l, 0, a_set, b, terms, start, &mut skeletons);
        let mut out = FrontierBuilder::default();
        self.assemble([inner, None], skeletons, &mut out);
        out.finish()
    }

    /// Routes piece `j` onwards through `b` vertices and sub-pieces of the inner set.
    #[allow(clippy::too_many_arguments)]
    fn route_small(&self, l: &[Piece], j: usize, a: Bits, b: Bits, terms: Bits, sk: Skeleton, out: &mut Vec<Skeleton>) {
        if j == l.len() {
            out.push(sk);
            return;
        }
        let (s, t) = l[j];
        if b.has(s) {
            let mut sk = sk;
            self.take_vertex(&mut sk, j, s);
            if s == t {
                self.route_small(l, j + 1, a, b, terms, sk, out);
            } else {
                self.walk_from_b(l, j, a, b, terms, s, sk, out);
            }
        } else {
            self.walk_in_a(l, j, a, b, terms, s, sk, out);
        }
    }

    fn take_vertex(&self, sk: &mut Skeleton, j: usize, v: u8) {
        sk.used = sk.used.with(v);
        sk.steps[j].push(Step::Vertex(v));
        sk.direct_count[j] += 1;
        let mut u = std::mem::take(&mut sk.direct_usage);
        self.add_usage(&mut u, v);
        sk.direct_usage = u;
    }

    /// Claims a sub-piece `(u, v)` on `side`, failing on endpoint clashes. `own` are the
    /// terminals of the piece being routed, which may be claimed.
    fn claim(sk: &mut Skeleton, side: usize, j: usize, piece: Piece, terms: Bits, own: Piece) -> bool {
        let (u, v) = piece;
        let clash = |x: u8| sk.ends[side].has(x) || (terms.has(x) && x != own.0 && x != own.1);
        if clash(u) || (u != v && clash(v)) {
            return false;
        }
        sk.ends[side] = sk.ends[side].with(u).with(v);
        let idx = sk.sub_side.len();
        sk.subs[side].push(piece);
        sk.sub_side.push((side, sk.subs[side].len() - 1));
        sk.steps[j].push(Step::Sub(idx));
        true
    }

    /// Piece `j` currently sits at `x ∈ b`.
    #[allow(clippy::too_many_arguments)]
    fn walk_from_b(&self, l: &[Piece], j: usize, a: Bits, b: Bits, terms: Bits, x: u8, sk: Skeleton, out: &mut Vec<Skeleton>) {
        let (_, t) = l[j];
        let next_b = self.out[x as usize].and(b);
        for y in next_b.iter() {
            if y == t {
                let mut sk = sk.clone();
                self.take_vertex(&mut sk, j, y);
                self.route_small(l, j + 1, a, b, terms, sk, out);
            } else if !sk.used.has(y) && !terms.has(y) {
                let mut sk = sk.clone();
                self.take_vertex(&mut sk, j, y);
                self.walk_from_b(l, j, a, b, terms, y, sk, out);
            }
        }
        for u in self.out[x as usize].and(a).iter() {
            if sk.ends[0].has(u) || (terms.has(u) && u != t) {
                continue;
            }
            self.walk_in_a(l, j, a, b, terms, u, sk.clone(), out);
        }
    }

    /// Piece `j` enters the inner set at `u`; choose where that sub-piece ends.
    #[allow(clippy::too_many_arguments)]
    fn walk_in_a(&self, l: &[Piece], j: usize, a: Bits, b: Bits, terms: Bits, u: u8, sk: Skeleton, out: &mut Vec<Skeleton>) {
        let own = l[j];
        let t = own.1;
        if a.has(t) {
            let mut sk = sk.clone();
            if Self::claim(&mut sk, 0, j, (u, t), terms, own) {
                self.route_small(l, j + 1, a, b, terms, sk, out);
            }
        }
        for y in b.iter() {
            if !(y == t || (!sk.used.has(y) && !terms.has(y))) {
                continue;
            }
            for v in self.inn[y as usize].and(a).iter() {
                if v == t {
                    continue;
                }
                let mut sk = sk.clone();
                if !Self::claim(&mut sk, 0, j, (u, v), terms, own) {
                    continue;
                }
                self.take_vertex(&mut sk, j, y);
                if y == t {
                    self.route_small(l, j + 1, a, b, terms, sk, out);
                } else {
                    self.walk_from_b(l, j, a, b, terms, y, sk, out);
                }
            }
        }
    }

    fn eval_join(&mut self, pa: usize, pb: usize, sequential: bool, l: &[Piece]) -> Frontier {
        let sets = [self.plans[pa].set(), self.plans[pb].set()];
        let mut terms = Bits::default();
        for &(s, t) in l {
            terms = terms.with(s).with(t);
        }
        // Crossing arcs, both directions.
        let mut a_to_b = Vec::new();
        let mut b_to_a = Vec::new();
        for u in sets[0].iter() {
            for v in self.out[u as usize].and(sets[1]).iter() {
                a_to_b.push((u, v));
            }
        }
        if !sequential {
            for u in sets[1].iter() {
                for v in self.out[u as usize].and(sets[0]).iter() {
                    b_to_a.push((u, v));
                }
            }
        }
        let mut skeletons = Vec::new();
        let start = self.empty_skeleton(l.len());
        Self::route_join(l, 0, sets, terms, &a_to_b, &b_to_a, start, &mut skeletons);
        let mut out = FrontierBuilder::default();
        self.assemble([Some(pa), Some(pb)], skeletons, &mut out);
        out.finish()
    }

    #[allow(clippy::too_many_arguments)]
    fn route_join(
        l: &[Piece],
        j: usize,
        sets: [Bits; 2],
        terms: Bits,
        a_to_b: &[(u8, u8)],
        b_to_a: &[(u8, u8)],
        sk: Skeleton,
        out: &mut Vec<Skeleton>,
    ) {
        if j == l.len() {
            out.push(sk);
            return;
        }
        let own = l[j];
        let (s, t) = own;
        let side = |v: u8| usize::from(!sets[0].has(v));
        let mut options: Vec<Vec<(usize, Piece)>> = Vec::new();
        match (side(s), side(t)) {
            (0, 0) => {
                options.push(vec![(0, (s, t))]);
                if s != t {
                    for &(u, b1) in a_to_b {
                        for &(b2, v) in b_to_a {
                            options.push(vec![(0, (s, u)), (1, (b1, b2)), (0, (v, t))]);
                        }
                    }
                }
            }
            (0, _) => {
                for &(u, b1) in a_to_b {
                    options.push(vec![(0, (s, u)), (1, (b1, t))]);
                }
            }
            (_, 0) => {
                for &(b2, v) in b_to_a {
                    options.push(vec![(1, (s, b2)), (0, (v, t))]);
                }
            }
            _ => options.push(vec![(1, (s, t))]),
        }
        for opt in options {
            let mut next = sk.clone();
            if opt.iter().all(|&(sd, p)| Self::claim(&mut next, sd, j, p, terms, own)) {
                Self::route_join(l, j + 1, sets, terms, a_to_b, b_to_a, next, out);
            }
        }
    }
}
