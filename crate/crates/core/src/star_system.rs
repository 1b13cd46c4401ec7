//! Placing star leaves at fixed centers, phrased as a small integer system.
//!
//! Variables `t_i(J)` count the leaves of star `i` drawn from cell `X_J`, the set of
//! vertices lying in exactly the neighbourhoods `N_j` for `j ∈ J`. A solution needs
//! `Σ_J t_i(J) = ℓ_i`, `Σ_{i∈J} t_i(J) ≤ |X_J|`, and for every `i` at most
//! `|N_i| - slack(i)` vertices of `N_i` consumed by any star.

use crate::graph::{Digraph, Orientation, StarsPathsPattern, VertexId};
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// A star with a single orientation, centred at a host vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StarSpec {
    pub center: VertexId,
    pub orientation: Orientation,
    pub leaf_count: usize,
}

/// Splits every star into homogeneous pieces. Returns the specs and, per spec, the index
/// of the pattern star it came from. A star with both kinds of leaves yields an out-spec
/// followed by an in-spec on the same center; a leafless star yields one empty out-spec.
pub fn homogenize(pattern: &StarsPathsPattern, f: &[VertexId]) -> (Vec<StarSpec>, Vec<usize>) {
    let mut specs = Vec::new();
    let mut origin = Vec::new();
    for (i, s) in pattern.stars().iter().enumerate() {
        if s.out_leaves > 0 || s.in_leaves == 0 {
            specs.push(StarSpec { center: f[i], orientation: Orientation::Out, leaf_count: s.out_leaves });
            origin.push(i);
        }
        if s.in_leaves > 0 {
            specs.push(StarSpec { center: f[i], orientation: Orientation::In, leaf_count: s.in_leaves });
            origin.push(i);
        }
    }
    (specs, origin)
}

/// A cell: the vertices lying in exactly the neighbourhoods of the specs in `members`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// Bit `i` set when spec `i` can use these vertices.
    pub members: u64,
    pub vertices: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSystem {
    pub specs: Vec<StarSpec>,
    pub neighborhoods: Vec<BTreeSet<VertexId>>,
    /// Non-empty cells ordered by their member mask.
    pub cells: Vec<Cell>,
    pub slacks: Vec<usize>,
}

/// Leaves per spec, in spec order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafAssignment {
    pub leaves: Vec<Vec<VertexId>>,
}

/// Builds the system. `N_i` is the relevant neighbourhood of the center without the center
/// itself and without `reserved`.
pub fn build_system(d: &Digraph, specs: &[StarSpec], slacks: &[usize], reserved: &BTreeSet<VertexId>) -> StarSystem {
    assert_eq!(specs.len(), slacks.len(), "one slack per spec");
    assert!(specs.len() <= 64, "at most 64 specs");
    let neighborhoods: Vec<BTreeSet<VertexId>> = specs
        .iter()
        .map(|s| {
            let around = match s.orientation {
                Orientation::Out => d.out_neighbors(s.center),
                Orientation::In => d.in_neighbors(s.center),
            };
            around.iter().copied().filter(|&x| x != s.center && !reserved.contains(&x)).collect()
        })
        .collect();
    let mut by_mask: BTreeMap<u64, Vec<VertexId>> = BTreeMap::new();
    let union: BTreeSet<VertexId> = neighborhoods.iter().flatten().copied().collect();
    for v in union {
        let mask = neighborhoods
            .iter()
            .enumerate()
            .filter(|(_, n)| n.contains(&v))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        by_mask.entry(mask).or_default().push(v);
    }
    let cells = by_mask.into_iter().map(|(members, vertices)| Cell { members, vertices }).collect();
    StarSystem { specs: specs.to_vec(), neighborhoods, cells, slacks: slacks.to_vec() }
}

impl StarSystem {
    fn member_list(&self, c: usize) -> Vec<usize> {
        (0..self.specs.len()).filter(|&i| self.cells[c].members >> i & 1 == 1).collect()
    }

    /// Largest number of vertices of `N_i` that the stars may consume together.
    fn consumption_cap(&self, i: usize) -> Option<usize> {
        self.neighborhoods[i].len().checked_sub(self.slacks[i])
    }
}

/// Decides the system and extracts leaves, lowest ids first within each cell.
pub fn solve(system: &StarSystem) -> Option<LeafAssignment> {
    let k = system.specs.len();
    let need: Vec<usize> = system.specs.iter().map(|s| s.leaf_count).collect();
    let mut caps = Vec::with_capacity(k);
    for i in 0..k {
        let cap = system.consumption_cap(i)?;
        if need[i] > cap {
            return None;
        }
        caps.push(cap);
    }
    if !hall_condition(system, &need) {
        return None;
    }
    let members: Vec<Vec<usize>> = (0..system.cells.len()).map(|c| system.member_list(c)).collect();
    // Capacity still reachable by each spec from cells at index >= c.
    let mut reach = vec![vec![0usize; k]; system.cells.len() + 1];
    for c in (0..system.cells.len()).rev() {
        reach[c] = reach[c + 1].clone();
        for &i in &members[c] {
            reach[c][i] += system.cells[c].vertices.len();
        }
    }
    let mut search = CellSearch {
        system,
        members: &members,
        reach: &reach,
        caps: &caps,
        plan: vec![vec![0; k]; system.cells.len()],
        failed: HashSet::new(),
    };
    let mut need = need;
    let mut taken = vec![0; k];
    if !search.run(0, &mut need, &mut taken) {
        return None;
    }
    let mut leaves = vec![Vec::new(); k];
    for (c, cell) in system.cells.iter().enumerate() {
        let mut pool = cell.vertices.iter().copied();
        for &i in &members[c] {
            leaves[i].extend(pool.by_ref().take(search.plan[c][i]));
        }
    }
    for l in &mut leaves {
        l.sort_unstable();
    }
    Some(LeafAssignment { leaves })
}

/// Every group of specs needs at least as many vertices in the union of its
/// neighbourhoods as it has leaves.
fn hall_condition(system: &StarSystem, need: &[usize]) -> bool {
    let k = system.specs.len();
    if k > 16 {
        return true;
    }
    (1u64..1 << k).all(|group| {
        let want: usize = (0..k).filter(|i| group >> i & 1 == 1).map(|i| need[i]).sum();
        let have: usize = system.cells.iter().filter(|c| c.members & group != 0).map(|c| c.vertices.len()).sum();
        want <= have
    })
}

struct CellSearch<'a> {
    system: &'a StarSystem,
    members: &'a [Vec<usize>],
    reach: &'a [Vec<usize>],
    caps: &'a [usize],
    plan: Vec<Vec<usize>>,
    failed: HashSet<(usize, Vec<usize>, Vec<usize>)>,
}

impl CellSearch<'_> {
    fn run(&mut self, c: usize, need: &mut Vec<usize>, taken: &mut Vec<usize>) -> bool {
        if c == self.system.cells.len() {
            return need.iter().all(|&x| x == 0);
        }
        let k = need.len();
        for i in 0..k {
            if need[i] > self.reach[c][i] || taken[i] + need[i] > self.caps[i] {
                return false;
            }
        }
        let key = (c, need.clone(), taken.clone());
        if self.failed.contains(&key) {
            return false;
        }
        let size = self.system.cells[c].vertices.len();
        let members = self.members[c].clone();
        if self.split(c, &members, 0, size, 0, need, taken) {
            return true;
        }
        self.failed.insert(key);
        false
    }

    /// Chooses `t_i` for the members of cell `c` one at a time, then recurses on `c + 1`.
    #[allow(clippy::too_many_arguments)]
    fn split(&mut self, c: usize, members: &[usize], pos: usize, left: usize, used: usize, need: &mut Vec<usize>, taken: &mut Vec<usize>) -> bool {
        if pos == members.len() {
            for &a in members {
                taken[a] += used;
            }
            let ok = members.iter().all(|&a| taken[a] <= self.caps[a]) && self.run(c + 1, need, taken);
            for &a in members {
                taken[a] -= used;
            }
            return ok;
        }
        let i = members[pos];
        for t in (0..=need[i].min(left)).rev() {
            need[i] -= t;
            self.plan[c][i] = t;
            let ok = self.split(c, members, pos + 1, left - t, used + t, need, taken);
            need[i] += t;
            if ok {
                return true;
            }
        }
        self.plan[c][i] = 0;
        false
    }
}

/// Checks the three defining properties of an assignment against its system.
pub fn check_assignment(system: &StarSystem, a: &LeafAssignment) -> bool {
    if a.leaves.len() != system.specs.len() {
        return false;
    }
    let mut all = HashSet::new();
    for (i, l) in a.leaves.iter().enumerate() {
        if l.len() != system.specs[i].leaf_count || !l.iter().all(|v| system.neighborhoods[i].contains(v)) {
            return false;
        }
        if !l.iter().all(|&v| all.insert(v)) {
            return false;
        }
    }
    system
        .neighborhoods
        .iter()
        .zip(&system.slacks)
        .all(|(n, &s)| n.iter().filter(|v| !all.contains(v)).count() >= s)
}
