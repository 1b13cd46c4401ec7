//! Exhaustive backtracking over simple paths, used as ground truth.

use super::{PathSolution, SaddpError, SaddpInstance};
use crate::graph::VertexId;

const ORACLE_MAX_VERTICES: usize = 10;

pub fn oracle_saddp(inst: &SaddpInstance) -> Result<Option<PathSolution>, SaddpError> {
    if inst.digraph.n() > ORACLE_MAX_VERTICES {
        return Err(SaddpError::TooLarge);
    }
    let n = inst.digraph.n();
    let terminals = inst.terminals();
    let mut blocked = vec![false; n];
    let mut usage = vec![0usize; inst.avoid_sets.len()];
    for &t in &terminals {
        blocked[t.index()] = true;
    }
    for (j, s) in inst.avoid_sets.iter().enumerate() {
        usage[j] = s.vertices.intersection(&terminals).count();
        if usage[j] > s.budget {
            return Ok(None);
        }
    }
    let mut search = Backtrack { inst, blocked, usage, paths: Vec::new() };
    Ok(search.request(0).then(|| PathSolution { paths: search.paths }))
}

struct Backtrack<'a> {
    inst: &'a SaddpInstance,
    /// Terminals and interiors already taken.
    blocked: Vec<bool>,
    usage: Vec<usize>,
    paths: Vec<Vec<VertexId>>,
}

impl Backtrack<'_> {
    fn request(&mut self, i: usize) -> bool {
        if i == self.inst.requests.len() {
            return true;
        }
        let r = self.inst.requests[i];
        let mut path = vec![r.source];
        if self.extend(i, &mut path) {
            return true;
        }
        false
    }

    fn extend(&mut self, i: usize, path: &mut Vec<VertexId>) -> bool {
        let r = self.inst.requests[i];
        let last = *path.last().expect("path starts at the source");
        if path.len() + 1 == r.size {
            if self.inst.digraph.has_arc(last, r.target) {
                path.push(r.target);
                self.paths.push(path.clone());
                if self.request(i + 1) {
                    return true;
                }
                self.paths.pop();
                path.pop();
            }
            return false;
        }
        let next: Vec<VertexId> = self.inst.digraph.out_neighbors(last).to_vec();
        for x in next {
            if self.blocked[x.index()] {
                continue;
            }
            let hits: Vec<usize> = (0..self.inst.avoid_sets.len())
                .filter(|&j| self.inst.avoid_sets[j].vertices.contains(&x))
                .collect();
            if hits.iter().any(|&j| self.usage[j] + 1 > self.inst.avoid_sets[j].budget) {
                continue;
            }
            for &j in &hits {
                self.usage[j] += 1;
            }
            self.blocked[x.index()] = true;
            path.push(x);
            if self.extend(i, path) {
                return true;
            }
            path.pop();
            self.blocked[x.index()] = false;
            for &j in &hits {
                self.usage[j] -= 1;
            }
        }
        false
    }
}
