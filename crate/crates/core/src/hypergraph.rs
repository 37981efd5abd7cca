//! Canonical weighted hypergraph: unique hyperedges weighted by occurrence count.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rustc_hash::FxBuildHasher;
use serde::{Deserialize, Serialize};

use crate::{Error, NodeId, NodeSet, NodeSetSet, Result};

/// Raw hyperedge multiset over a dense node range, as produced by a parser.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawHyperedges {
    pub node_count: usize,
    pub edges: Vec<NodeSet>,
}

impl RawHyperedges {
    pub fn new(node_count: usize, edges: Vec<NodeSet>) -> Self {
        Self { node_count, edges }
    }

    /// Build from unsorted node lists; the node range is inferred as `max id + 1`.
    pub fn from_unsorted<I, E>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[NodeId]>,
    {
        let mut out = Vec::new();
        let mut node_count = 0usize;
        for e in edges {
            let set = canonical_node_set(e.as_ref())?;
            if let Some(&last) = set.last() {
                node_count = node_count.max(last as usize + 1);
            }
            out.push(set);
        }
        Ok(Self { node_count, edges: out })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Sorts `nodes` and rejects duplicates or sets smaller than two.
pub fn canonical_node_set(nodes: &[NodeId]) -> Result<NodeSet> {
    let mut set = nodes.to_vec();
    set.sort_unstable();
    if set.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidNodeSet { nodes: nodes.to_vec(), reason: "duplicate node id" });
    }
    if set.len() < 2 {
        return Err(Error::InvalidNodeSet { nodes: nodes.to_vec(), reason: "fewer than two nodes" });
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hyperedge {
    pub nodes: NodeSet,
    pub weight: u64,
}

impl Hyperedge {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Weighted hypergraph with unique hyperedges.
///
/// Hyperedges keep the order of their first occurrence in the raw input, so
/// indices are stable for a given dataset file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    node_count: usize,
    edges: Vec<Hyperedge>,
    size_index: BTreeMap<usize, Vec<usize>>,
}

impl Hypergraph {
    /// Collapse a raw multiset into unique hyperedges weighted by multiplicity.
    pub fn dedup_and_weight(raw: &RawHyperedges) -> Result<Self> {
        if raw.edges.is_empty() {
            return Err(Error::EmptyHypergraph);
        }
        let mut slot: HashMap<&[NodeId], usize, FxBuildHasher> = HashMap::default();
        let mut edges: Vec<Hyperedge> = Vec::new();
        for set in &raw.edges {
            validate_node_set(set, raw.node_count)?;
            match slot.get(set.as_slice()) {
                Some(&i) => edges[i].weight += 1,
                None => {
                    slot.insert(set.as_slice(), edges.len());
                    edges.push(Hyperedge { nodes: set.clone(), weight: 1 });
                }
            }
        }
        Ok(Self::from_parts_unchecked(raw.node_count, edges))
    }

    /// Build from already-unique weighted hyperedges, validating every invariant.
    pub fn from_hyperedges(node_count: usize, edges: Vec<Hyperedge>) -> Result<Self> {
        let mut seen = NodeSetSet::default();
        for e in &edges {
            validate_node_set(&e.nodes, node_count)?;
            if e.weight == 0 {
                return Err(Error::InvalidNodeSet { nodes: e.nodes.clone(), reason: "zero weight" });
            }
            if !seen.insert(e.nodes.clone()) {
                return Err(Error::InvalidNodeSet { nodes: e.nodes.clone(), reason: "repeated hyperedge" });
            }
        }
        Ok(Self::from_parts_unchecked(node_count, edges))
    }

    fn from_parts_unchecked(node_count: usize, edges: Vec<Hyperedge>) -> Self {
        let mut size_index: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            size_index.entry(e.len()).or_default().push(i);
        }
        Self { node_count, edges, size_index }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of unique hyperedges, `|E|`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn hyperedge(&self, index: usize) -> Option<&Hyperedge> {
        self.edges.get(index)
    }

    /// Indices of the hyperedges with exactly `size` nodes.
    pub fn indices_of_size(&self, size: usize) -> &[usize] {
        self.size_index.get(&size).map_or(&[], Vec::as_slice)
    }

    /// Hyperedge counts per cardinality.
    pub fn size_histogram(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.size_index.iter().map(|(&k, v)| (k, v.len()))
    }

    pub fn max_edge_size(&self) -> usize {
        self.size_index.keys().next_back().copied().unwrap_or(0)
    }

    /// `Σ_e ω(e)`, the raw multiset cardinality.
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Set of all hyperedge node sets, for membership checks.
    pub fn node_set_index(&self) -> NodeSetSet {
        self.edges.iter().map(|e| e.nodes.clone()).collect()
    }

    /// Expand every hyperedge weight-many times, reproducing the raw multiset.
    pub fn to_raw(&self) -> RawHyperedges {
        let mut edges = Vec::with_capacity(self.total_weight() as usize);
        for e in &self.edges {
            for _ in 0..e.weight {
                edges.push(e.nodes.clone());
            }
        }
        RawHyperedges { node_count: self.node_count, edges }
    }

    /// Copy of the hypergraph without the hyperedges at `indices`.
    ///
    /// The node universe is unchanged and `self` is left untouched.
    pub fn remove_hyperedges(&self, indices: &[usize]) -> Result<Self> {
        let mut drop = alloc::vec![false; self.edges.len()];
        for &i in indices {
            if i >= self.edges.len() {
                return Err(Error::IndexOutOfRange { index: i, len: self.edges.len() });
            }
            drop[i] = true;
        }
        let edges = self.edges.iter().zip(&drop).filter(|(_, &d)| !d).map(|(e, _)| e.clone()).collect();
        Ok(Self::from_parts_unchecked(self.node_count, edges))
    }
}

fn validate_node_set(set: &[NodeId], node_count: usize) -> Result<()> {
    if set.len() < 2 {
        return Err(Error::InvalidNodeSet { nodes: set.to_vec(), reason: "fewer than two nodes" });
    }
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidNodeSet { nodes: set.to_vec(), reason: "not strictly sorted" });
    }
    if set.last().is_some_and(|&v| v as usize >= node_count) {
        return Err(Error::InvalidNodeSet { nodes: set.to_vec(), reason: "node id outside the node range" });
    }
    Ok(())
}
