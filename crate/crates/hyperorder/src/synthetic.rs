//! Planted-triple benchmark hypergraph.
//!
//! Size-4 hyperedges are only ever created by extending a planted triple, so
//! the planted triples carry signal for size-4 prediction that pairwise
//! co-occurrence alone does not.

use std::collections::BTreeSet;

use hyperorder_core::seed::{self, Stage};
use hyperorder_core::{NodeId, NodeSet, RawHyperedges};
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedConfig {
    pub nodes: usize,
    pub planted_triples: usize,
    /// Each planted triple is emitted `1..=max_copies` times.
    pub max_copies: usize,
    pub extensions: usize,
    pub background: usize,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self { nodes: 200, planted_triples: 300, max_copies: 3, extensions: 400, background: 2000 }
    }
}

fn random_set<R: Rng>(rng: &mut R, nodes: usize, k: usize) -> NodeSet {
    let mut s: NodeSet = index::sample(rng, nodes, k).into_iter().map(|v| v as NodeId).collect();
    s.sort_unstable();
    s
}

/// Hyperedge multiset, in emission order: planted triples (with repeats),
/// their size-4 extensions, then size-2/3 background hyperedges.
pub fn planted_hypergraph(cfg: &PlantedConfig, seed: u64) -> RawHyperedges {
    assert!(cfg.nodes >= 4, "need at least 4 nodes");
    assert!(cfg.max_copies >= 1, "max_copies must be positive");
    let mut rng = seed::stage_rng(seed, Stage::Synthetic);
    let mut edges = Vec::new();

    let mut seen = BTreeSet::new();
    let mut triples = Vec::with_capacity(cfg.planted_triples);
    while triples.len() < cfg.planted_triples {
        let t = random_set(&mut rng, cfg.nodes, 3);
        if seen.insert(t.clone()) {
            triples.push(t);
        }
    }
    for t in &triples {
        for _ in 0..rng.random_range(1..=cfg.max_copies) {
            edges.push(t.clone());
        }
    }

    let mut quads = BTreeSet::new();
    if !triples.is_empty() {
        while quads.len() < cfg.extensions {
            let t = &triples[rng.random_range(0..triples.len())];
            let v = rng.random_range(0..cfg.nodes) as NodeId;
            if t.contains(&v) {
                continue;
            }
            let mut q = t.clone();
            q.push(v);
            q.sort_unstable();
            if quads.insert(q.clone()) {
                edges.push(q);
            }
        }
    }

    for _ in 0..cfg.background {
        let k = rng.random_range(2..=3);
        edges.push(random_set(&mut rng, cfg.nodes, k));
    }
    RawHyperedges::new(cfg.nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperorder_core::Hypergraph;

    #[test]
    fn shape() {
        let cfg = PlantedConfig::default();
        let raw = planted_hypergraph(&cfg, 7);
        assert_eq!(raw.node_count, 200);
        let quads: Vec<&NodeSet> = raw.edges.iter().filter(|e| e.len() == 4).collect();
        assert_eq!(quads.len(), 400);
        assert_eq!(raw.edges.iter().filter(|e| e.len() > 4 || e.len() < 2).count(), 0);
        let hg = Hypergraph::dedup_and_weight(&raw).unwrap();
        assert_eq!(hg.indices_of_size(4).len(), 400);
        assert!(hg.hyperedges().iter().all(|e| e.weight <= 3 || e.len() < 4));
        // every size-4 hyperedge contains a planted triple
        let planted: BTreeSet<&NodeSet> = raw.edges[..raw.edges.len() - 400 - cfg.background].iter().collect();
        assert!(planted.len() == 300 && planted.iter().all(|t| t.len() == 3));
        for q in quads {
            assert!((0..4).any(|skip| {
                let t: NodeSet = q.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                planted.contains(&t)
            }));
        }
    }

    #[test]
    fn seeded() {
        let cfg = PlantedConfig::default();
        assert_eq!(planted_hypergraph(&cfg, 1), planted_hypergraph(&cfg, 1));
        assert_ne!(planted_hypergraph(&cfg, 1), planted_hypergraph(&cfg, 2));
    }
}
