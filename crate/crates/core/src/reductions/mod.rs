//! Hardness constructions as instance generators, and the expansion gadget.
//!
//! Every generator returns a host digraph, a target, a claimed bound on the host's
//! directed treewidth and machine-readable vertex roles. The source problems come with
//! brute-force deciders so the claimed equivalences can be checked on small inputs.

mod expand;
mod generators;
mod sources;

pub use expand::{expand, ExpansionRole};
pub use generators::{
    antidirected_path, gen_antidirected, gen_caterpillar, gen_clique_to_expansion, gen_matching_to_stars,
    gen_matching_to_stars_plus_bigstar, gen_sat22,
};
pub use sources::{
    parse_antidirected_input, parse_bipartite, parse_dimacs, write_antidirected_input, write_bipartite, write_dimacs,
    AntidirectedInput, BipartiteInput, Formula,
};

use crate::graph::{Digraph, StarsPathsPattern, VertexId};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("input digraph has loops")]
    HasLoops,
    #[error("bad edge pairs: {0}")]
    BadPairs(String),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("formula is not 3-SAT-(2,2): {0}")]
    NotTwoTwo(String),
    #[error("need more edges than vertices on one side")]
    TooFewEdges,
}

/// What the generated host is expected to contain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Pattern(StarsPathsPattern),
    Digraph(Digraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub host: Digraph,
    pub target: Target,
    pub expected_dtw_bound: usize,
    /// Role tag per host vertex, for vertices that have one.
    pub roles: BTreeMap<VertexId, String>,
    /// Named scalars such as `k_prime` or the terminals.
    pub notes: BTreeMap<String, String>,
}

impl ReductionOutput {
    fn new(host: Digraph, target: Target, expected_dtw_bound: usize) -> Self {
        ReductionOutput { host, target, expected_dtw_bound, roles: BTreeMap::new(), notes: BTreeMap::new() }
    }

    fn role(&mut self, v: VertexId, tag: impl Into<String>) {
        self.roles.insert(v, tag.into());
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.insert(key.to_string(), value.to_string());
    }

    /// Vertices carrying exactly the tag `tag`.
    pub fn with_role(&self, tag: &str) -> Vec<VertexId> {
        self.roles.iter().filter(|(_, t)| t.as_str() == tag).map(|(&v, _)| v).collect()
    }

    /// The annotation sidecar: `# role <v> <tag>` and `# note <key> <value>` lines.
    pub fn sidecar(&self) -> String {
        let mut out = String::new();
        for (v, t) in &self.roles {
            let _ = writeln!(out, "# role {v} {t}");
        }
        for (k, v) in &self.notes {
            let _ = writeln!(out, "# note {k} {v}");
        }
        let _ = writeln!(out, "# note expected_dtw_bound {}", self.expected_dtw_bound);
        out
    }
}
