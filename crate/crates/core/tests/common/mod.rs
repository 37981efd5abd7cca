#![allow(dead_code)]

use hyperorder_core::{Hypergraph, NodeId, RawHyperedges};
use proptest::prelude::*;

/// Small hypergraphs with repeated hyperedges, up to `max_nodes` nodes.
pub fn hypergraph(max_nodes: usize, max_edges: usize, max_size: usize) -> impl Strategy<Value = Hypergraph> {
    (3..=max_nodes).prop_flat_map(move |n| {
        let edge = proptest::sample::subsequence((0..n as NodeId).collect::<Vec<_>>(), 2..=max_size.min(n));
        (Just(n), proptest::collection::vec((edge, 1..=3usize), 1..=max_edges)).prop_map(|(n, edges)| {
            let mut raw = Vec::new();
            for (e, copies) in edges {
                for _ in 0..copies {
                    raw.push(e.clone());
                }
            }
            Hypergraph::dedup_and_weight(&RawHyperedges::new(n, raw)).unwrap()
        })
    })
}

pub fn graph(node_count: usize, edges: &[&[NodeId]]) -> Hypergraph {
    Hypergraph::dedup_and_weight(&RawHyperedges::new(node_count, edges.iter().map(|e| e.to_vec()).collect())).unwrap()
}
