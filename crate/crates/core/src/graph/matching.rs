//! Maximum matching in general undirected graphs, delegated to petgraph's blossom implementation.

use super::VertexId;
use petgraph::graph::UnGraph;

/// A maximum-cardinality matching of the simple graph on `0..n` with the given edges.
/// Each matched pair is returned as `(min, max)`, sorted.
pub fn max_matching(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<(VertexId, VertexId)> {
    let mut g: UnGraph<(), ()> = UnGraph::with_capacity(n, edges.len());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for &(u, v) in edges {
        if u != v {
            g.update_edge(nodes[u.index()], nodes[v.index()], ());
        }
    }
    let m = petgraph::algo::maximum_matching(&g);
    let mut pairs: Vec<(VertexId, VertexId)> = m
        .edges()
        .map(|(a, b)| {
            let (a, b) = (VertexId::new(a.index()), VertexId::new(b.index()));
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort_unstable();
    pairs
}
