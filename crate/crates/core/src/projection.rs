//! n-projected graphs and n-order expansions.
//!
//! A projected graph of order `n` has the `(n-1)`-subsets of `V` ("facets")
//! as nodes. Two facets are adjacent when their union is an `n`-subset
//! contained in some hyperedge, and the edge weight is the total weight of
//! the hyperedges containing that union. Every edge inside one active
//! `n`-subset carries the same weight, so the graph is stored as the list of
//! active `n`-subsets with their weights; the `C(n,2)` facet-pair edges of
//! each subset stay implicit.
//!
//! Storage is flat and sorted: subset keys are concatenated in lexicographic
//! order, which makes lookups binary searches and iteration order canonical.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(feature = "std")]
use rayon::prelude::*;

use crate::combinatorics::{binomial, for_each_subset, sorted_union_len, Combinations};
use crate::hypergraph::{Hyperedge, Hypergraph};
use crate::{Error, NodeId, NodeSet, Result};

/// Largest order whose subsets can be projected.
pub const MAX_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionOptions {
    /// Upper bound on `Σ_e C(|e|, n)`, the number of subset occurrences
    /// enumerated before merging. Projections above it are refused.
    pub max_subsets: u64,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self { max_subsets: 200_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedGraph {
    order: usize,
    subsets: Vec<NodeId>,
    weights: Vec<u64>,
    facets: FacetIndex,
}

/// Inverse incidence: facet -> active subsets containing it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct FacetIndex {
    keys: Vec<NodeId>,
    offsets: Vec<usize>,
    members: Vec<u32>,
}

/// Builds the `n`-projected graph of `hg`.
pub fn project(hg: &Hypergraph, n: usize) -> Result<ProjectedGraph> {
    project_with(hg, n, &ProjectionOptions::default())
}

pub fn project_with(hg: &Hypergraph, n: usize, opts: &ProjectionOptions) -> Result<ProjectedGraph> {
    if n < 2 {
        return Err(Error::OrderTooSmall(n));
    }
    let estimated = estimate_subsets(hg, n);
    if estimated > u128::from(opts.max_subsets) {
        return Err(Error::ProjectionTooLarge {
            order: n,
            estimated: u64::try_from(estimated).unwrap_or(u64::MAX),
            budget: opts.max_subsets,
        });
    }
    if estimated == 0 {
        return Ok(ProjectedGraph::empty(n));
    }
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge { order: n, max: MAX_ORDER });
    }
    let (subsets, weights) = collect_dispatch(hg, n);
    Ok(ProjectedGraph::from_sorted_unchecked(n, subsets, weights))
}

/// `Σ_{e : |e| ≥ n} C(|e|, n)`.
pub fn estimate_subsets(hg: &Hypergraph, n: usize) -> u128 {
    hg.size_histogram()
        .map(|(size, count)| binomial(size as u64, n as u64).saturating_mul(count as u128))
        .fold(0u128, u128::saturating_add)
}

macro_rules! dispatch_order {
    ($n:expr, $hg:expr; $($k:literal)*) => {
        match $n {
            $($k => collect_subsets::<$k>($hg),)*
            _ => unreachable!("order checked against MAX_ORDER"),
        }
    };
}

fn collect_dispatch(hg: &Hypergraph, n: usize) -> (Vec<NodeId>, Vec<u64>) {
    dispatch_order!(n, hg; 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16)
}

fn push_subsets<const N: usize>(e: &Hyperedge, out: &mut Vec<([NodeId; N], u64)>) {
    for_each_subset(&e.nodes, N, |s| {
        let mut key = [0; N];
        key.copy_from_slice(s);
        out.push((key, e.weight));
    });
}

fn collect_subsets<const N: usize>(hg: &Hypergraph) -> (Vec<NodeId>, Vec<u64>) {
    let edges = hg.hyperedges();

    #[cfg(feature = "std")]
    let entries = {
        let mut entries: Vec<([NodeId; N], u64)> = edges
            .par_iter()
            .filter(|e| e.len() >= N)
            .fold(Vec::new, |mut acc, e| {
                push_subsets::<N>(e, &mut acc);
                acc
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            });
        entries.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        entries
    };
    #[cfg(not(feature = "std"))]
    let entries = {
        let mut entries: Vec<([NodeId; N], u64)> = Vec::new();
        for e in edges.iter().filter(|e| e.len() >= N) {
            push_subsets::<N>(e, &mut entries);
        }
        entries.sort_unstable_by_key(|e| e.0);
        entries
    };

    let mut subsets = Vec::new();
    let mut weights: Vec<u64> = Vec::new();
    let mut last: Option<[NodeId; N]> = None;
    for (key, w) in entries {
        if last == Some(key) {
            *weights.last_mut().expect("non-empty after first key") += w;
        } else {
            subsets.extend_from_slice(&key);
            weights.push(w);
            last = Some(key);
        }
    }
    (subsets, weights)
}

impl ProjectedGraph {
    pub fn empty(order: usize) -> Self {
        Self { order, subsets: Vec::new(), weights: Vec::new(), facets: FacetIndex::empty() }
    }

    /// Builds a graph from `(subset, weight)` pairs, validating every invariant.
    ///
    /// Subsets must be strictly sorted with cardinality `order`, pairwise
    /// distinct, and carry positive weights. Input order is irrelevant.
    pub fn from_weighted_subsets(order: usize, mut entries: Vec<(NodeSet, u64)>) -> Result<Self> {
        if order < 2 {
            return Err(Error::OrderTooSmall(order));
        }
        for (s, w) in &entries {
            if s.len() != order {
                return Err(Error::WrongCardinality { expected: order, got: s.len() });
            }
            if s.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::MalformedProjection("subset not strictly sorted"));
            }
            if *w == 0 {
                return Err(Error::MalformedProjection("zero-weight subset"));
            }
        }
        entries.sort_unstable();
        if entries.windows(2).any(|p| p[0].0 == p[1].0) {
            return Err(Error::MalformedProjection("repeated subset"));
        }
        let mut subsets = Vec::with_capacity(entries.len() * order);
        let mut weights = Vec::with_capacity(entries.len());
        for (s, w) in entries {
            subsets.extend_from_slice(&s);
            weights.push(w);
        }
        Ok(Self::from_sorted_unchecked(order, subsets, weights))
    }

    fn from_sorted_unchecked(order: usize, subsets: Vec<NodeId>, weights: Vec<u64>) -> Self {
        let facets = FacetIndex::build(order, &subsets);
        Self { order, subsets, weights, facets }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of active `n`-subsets.
    pub fn subset_count(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Facet-pair edge count `|E_n| = C(n,2) × #active subsets`.
    pub fn edge_count(&self) -> u64 {
        (self.order * (self.order - 1) / 2) as u64 * self.subset_count() as u64
    }

    /// Number of facets with at least one neighbor.
    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// `Σ_S ω_n(S)` over active subsets.
    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn subset(&self, index: usize) -> &[NodeId] {
        &self.subsets[index * self.order..(index + 1) * self.order]
    }

    pub fn weight_at(&self, index: usize) -> u64 {
        self.weights[index]
    }

    /// Active subsets with weights, in lexicographic order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&[NodeId], u64)> + '_ {
        self.subsets.chunks_exact(self.order).zip(self.weights.iter().copied())
    }

    /// Weight of `subset`; 0 when it is inactive.
    pub fn subset_weight(&self, subset: &[NodeId]) -> Result<u64> {
        if subset.len() != self.order {
            return Err(Error::WrongCardinality { expected: self.order, got: subset.len() });
        }
        Ok(self.weight_of(subset))
    }

    /// Unchecked form of [`Self::subset_weight`]; any cardinality other than
    /// the order yields 0.
    pub fn weight_of(&self, subset: &[NodeId]) -> u64 {
        if subset.len() != self.order {
            return 0;
        }
        find_chunk(&self.subsets, self.order, subset).map_or(0, |i| self.weights[i])
    }

    /// Indices of the active subsets containing facet `f`.
    pub fn subsets_containing(&self, facet: &[NodeId]) -> &[u32] {
        if facet.len() + 1 != self.order {
            return &[];
        }
        self.facets.members_of(self.order - 1, facet)
    }

    /// Neighbors of facet `f` in the projected graph, sorted.
    ///
    /// Each active subset `S ⊇ f` contributes its other facets `S \ {x}` for
    /// `x ∈ f`; contributions of distinct subsets never coincide.
    pub fn facet_neighbors(&self, facet: &[NodeId]) -> Result<Vec<NodeSet>> {
        if facet.len() + 1 != self.order {
            return Err(Error::WrongCardinality { expected: self.order - 1, got: facet.len() });
        }
        let mut out = Vec::new();
        for &i in self.subsets_containing(facet) {
            let s = self.subset(i as usize);
            for &x in facet {
                out.push(s.iter().copied().filter(|&v| v != x).collect::<NodeSet>());
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `|N_n(f)| = (n-1) × #active subsets containing f`.
    pub fn facet_degree(&self, facet: &[NodeId]) -> usize {
        self.subsets_containing(facet).len() * (self.order - 1)
    }

    /// Facets with non-empty neighborhoods, in lexicographic order.
    pub fn facets(&self) -> impl Iterator<Item = &[NodeId]> + '_ {
        let width = self.order - 1;
        self.facets.keys.chunks_exact(width)
    }
}

impl FacetIndex {
    fn empty() -> Self {
        Self { keys: Vec::new(), offsets: alloc::vec![0], members: Vec::new() }
    }

    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn build(order: usize, subsets: &[NodeId]) -> Self {
        let width = order - 1;
        let count = subsets.len() / order;
        if count == 0 {
            return Self::empty();
        }
        // entry e = subset (e / order) with position (e % order) dropped
        let mut flat = Vec::with_capacity(count * order * width);
        for s in subsets.chunks_exact(order) {
            for skip in 0..order {
                flat.extend(s.iter().enumerate().filter(|&(p, _)| p != skip).map(|(_, &v)| v));
            }
        }
        let mut entries: Vec<u32> = (0..(count * order) as u32).collect();
        let cmp = |a: &u32, b: &u32| {
            let (a, b) = (*a as usize, *b as usize);
            flat[a * width..(a + 1) * width].cmp(&flat[b * width..(b + 1) * width]).then(a.cmp(&b))
        };
        #[cfg(feature = "std")]
        entries.par_sort_unstable_by(cmp);
        #[cfg(not(feature = "std"))]
        entries.sort_unstable_by(cmp);

        let mut keys = Vec::new();
        let mut offsets = Vec::new();
        let mut members = Vec::with_capacity(entries.len());
        let mut prev: Option<&[NodeId]> = None;
        for &e in &entries {
            let e = e as usize;
            let key = &flat[e * width..(e + 1) * width];
            if prev != Some(key) {
                offsets.push(members.len());
                keys.extend_from_slice(key);
                prev = Some(key);
            }
            members.push((e / order) as u32);
        }
        offsets.push(members.len());
        Self { keys, offsets, members }
    }

    fn members_of(&self, width: usize, facet: &[NodeId]) -> &[u32] {
        match find_chunk(&self.keys, width, facet) {
            Some(i) => &self.members[self.offsets[i]..self.offsets[i + 1]],
            None => &[],
        }
    }
}

/// Binary search for `key` among the sorted `width`-sized chunks of `flat`.
fn find_chunk(flat: &[NodeId], width: usize, key: &[NodeId]) -> Option<usize> {
    if width == 0 {
        return None;
    }
    let (mut lo, mut hi) = (0usize, flat.len() / width);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match flat[mid * width..(mid + 1) * width].cmp(key) {
            Ordering::Less => lo = mid + 1,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return Some(mid),
        }
    }
    None
}

/// Default bound on facet pairs examined by [`project_bruteforce`].
pub const BRUTE_FORCE_PAIR_BOUND: u128 = 50_000_000;

/// Reference projection by direct enumeration of the definition.
///
/// Every unordered pair of `(n-1)`-subsets of `V` is tested for union size
/// `n` and containment in each hyperedge. Only meant as a test oracle for
/// small node sets.
pub fn project_bruteforce(hg: &Hypergraph, n: usize, pair_bound: u128) -> Result<ProjectedGraph> {
    bruteforce(hg, n, pair_bound).map(|(g, _)| g)
}

/// Number of facet-pair edges found by brute-force enumeration.
pub fn bruteforce_edge_count(hg: &Hypergraph, n: usize, pair_bound: u128) -> Result<u64> {
    bruteforce(hg, n, pair_bound).map(|(_, c)| c)
}

fn bruteforce(hg: &Hypergraph, n: usize, pair_bound: u128) -> Result<(ProjectedGraph, u64)> {
    if n < 2 {
        return Err(Error::OrderTooSmall(n));
    }
    let v = hg.node_count();
    let facet_total = binomial(v as u64, (n - 1) as u64);
    let pairs = facet_total.saturating_mul(facet_total.saturating_sub(1)) / 2;
    if pairs > pair_bound {
        return Err(Error::BruteForceTooLarge { pairs, bound: pair_bound });
    }
    let mut facets: Vec<NodeSet> = Vec::new();
    let mut combos = Combinations::new(v, n - 1);
    while let Some(pos) = combos.advance() {
        facets.push(pos.iter().map(|&p| p as NodeId).collect());
    }

    let mut weights: BTreeMap<NodeSet, u64> = BTreeMap::new();
    let mut edges = 0u64;
    for (i, u) in facets.iter().enumerate() {
        for w in &facets[i + 1..] {
            if sorted_union_len(u, w) != n {
                continue;
            }
            let union = crate::combinatorics::sorted_union(u, w);
            let weight: u64 = hg
                .hyperedges()
                .iter()
                .filter(|e| crate::combinatorics::is_sorted_subset(&union, &e.nodes))
                .map(|e| e.weight)
                .sum();
            if weight > 0 {
                edges += 1;
                weights.insert(union, weight);
            }
        }
    }
    let graph = ProjectedGraph::from_weighted_subsets(n, weights.into_iter().collect())?;
    Ok((graph, edges))
}

/// The n-order expansion `(G_2, …, G_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    graphs: Vec<ProjectedGraph>,
}

pub fn expand(hg: &Hypergraph, n_max: usize) -> Result<Expansion> {
    expand_with(hg, n_max, &ProjectionOptions::default())
}

pub fn expand_with(hg: &Hypergraph, n_max: usize, opts: &ProjectionOptions) -> Result<Expansion> {
    if n_max < 2 {
        return Err(Error::OrderTooSmall(n_max));
    }
    let graphs = (2..=n_max).map(|n| project_with(hg, n, opts)).collect::<Result<Vec<_>>>()?;
    Ok(Expansion { graphs })
}

impl Expansion {
    /// Assembles an expansion from graphs of consecutive orders `2..`.
    pub fn from_graphs(graphs: Vec<ProjectedGraph>) -> Result<Self> {
        if graphs.is_empty() {
            return Err(Error::InvalidArgument("an expansion needs at least the 2-projected graph".into()));
        }
        for (i, g) in graphs.iter().enumerate() {
            if g.order() != i + 2 {
                return Err(Error::InvalidArgument(alloc::format!(
                    "graph at position {i} has order {}, expected {}",
                    g.order(),
                    i + 2
                )));
            }
        }
        Ok(Self { graphs })
    }

    pub fn max_order(&self) -> usize {
        self.graphs.len() + 1
    }

    pub fn graphs(&self) -> &[ProjectedGraph] {
        &self.graphs
    }

    pub fn graph(&self, order: usize) -> Option<&ProjectedGraph> {
        order.checked_sub(2).and_then(|i| self.graphs.get(i))
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}
