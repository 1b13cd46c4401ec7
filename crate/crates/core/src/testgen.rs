//! Shared proptest strategies.

use crate::graph::{Digraph, PatternPath, StarShape, StarsPathsPattern};
use proptest::prelude::*;

/// Loopless digraphs on `1..=max_n` vertices, each arc present with probability `p`.
pub fn arb_digraph_p(max_n: usize, p: f64) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(p), n * n).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> =
                (0..n * n).filter(|&i| bits[i] && i / n != i % n).map(|i| (i / n, i % n)).collect();
            Digraph::from_pairs(n, &pairs, false).unwrap()
        })
    })
}

/// Stars-paths patterns without roots, at most `max_vertices` vertices.
pub fn arb_pattern(max_vertices: usize) -> impl Strategy<Value = StarsPathsPattern> {
    (
        proptest::collection::vec((0usize..3, 0usize..3), 1..=3),
        proptest::collection::vec((0usize..3, 0usize..3, 2usize..5), 0..=2),
    )
        .prop_filter_map("pattern too large or malformed", move |(stars, paths)| {
            let k = stars.len();
            let stars = stars.into_iter().map(|(o, i)| StarShape::new(o, i)).collect();
            let paths = paths
                .into_iter()
                .map(|(a, b, len)| PatternPath { from: a % k, to: b % k, vertex_count: len })
                .collect();
            StarsPathsPattern::new(stars, paths, None).ok().filter(|p| p.vertex_count() <= max_vertices)
        })
}
