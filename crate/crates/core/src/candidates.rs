//! Candidate hyperedge sets: positives held out from the hypergraph and
//! negatives sampled as stars or cliques of the pairwise projection.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::sorted_intersection;
use crate::hypergraph::Hypergraph;
use crate::projection::ProjectedGraph;
use crate::{seed, Error, NodeId, NodeSet, NodeSetSet, Result};

/// Sampling attempts allowed per requested negative.
pub const ATTEMPTS_PER_SAMPLE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegativeKind {
    Star,
    Clique,
}

impl NegativeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NegativeKind::Star => "star",
            NegativeKind::Clique => "clique",
        }
    }
}

impl core::fmt::Display for NegativeKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for NegativeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "star" | "stars" => Ok(NegativeKind::Star),
            "clique" | "cliques" => Ok(NegativeKind::Clique),
            other => Err(Error::InvalidArgument(format!("unknown negative type {other:?}"))),
        }
    }
}

/// Labeled candidates of one target size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub target_size: usize,
    pub neg_type: NegativeKind,
    pub multiplier: usize,
    pub seed: u64,
    pub positives: Vec<NodeSet>,
    pub negatives: Vec<NodeSet>,
    /// Fewer than `multiplier × |positives|` negatives could be drawn.
    #[serde(default)]
    pub under_sampled: bool,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Positives then negatives, with labels 1 and 0.
    pub fn labeled(&self) -> impl Iterator<Item = (&NodeSet, u8)> + '_ {
        self.positives.iter().map(|c| (c, 1)).chain(self.negatives.iter().map(|c| (c, 0)))
    }

    pub fn requested_negatives(&self) -> usize {
        self.multiplier * self.positives.len()
    }
}

/// Result of removing target-size hyperedges from a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveSplit {
    /// `E'`, the hypergraph left after removal.
    pub remaining: Hypergraph,
    /// Removed node sets, in removal order.
    pub positives: Vec<NodeSet>,
}

/// `⌈frac · total⌉`, tolerant of representation error in `frac`.
pub fn retained_count(total: usize, frac: f64) -> usize {
    let exact = frac * total as f64;
    let c = libm::ceil(exact - 1e-9);
    (c.max(0.0) as usize).min(total)
}

/// Removes uniformly random hyperedges of `target_size` until
/// `⌈retain_frac·|E|⌉` hyperedges remain or none of the target size are left.
pub fn split_positives(hg: &Hypergraph, target_size: usize, retain_frac: f64, seed: u64) -> Result<PositiveSplit> {
    check_fraction("retain_frac", retain_frac)?;
    let pool = hg.indices_of_size(target_size);
    if pool.is_empty() {
        return Err(Error::EmptyPositives(target_size));
    }
    let removable = hg.len() - retained_count(hg.len(), retain_frac);
    let take = removable.min(pool.len());
    if take == 0 {
        return Err(Error::EmptyPositives(target_size));
    }
    let mut rng = seed::rng(seed);
    let mut order = pool.to_vec();
    order.shuffle(&mut rng);
    order.truncate(take);
    let positives = order.iter().map(|&i| hg.hyperedges()[i].nodes.clone()).collect();
    let remaining = hg.remove_hyperedges(&order)?;
    Ok(PositiveSplit { remaining, positives })
}

/// Sorted adjacency lists of a pairwise projected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    neighbors: Vec<Vec<NodeId>>,
}

impl Adjacency {
    pub fn from_pg2(pg2: &ProjectedGraph) -> Result<Self> {
        if pg2.order() != 2 {
            return Err(Error::InvalidArgument(format!(
                "negative sampling needs the 2-projected graph, got order {}",
                pg2.order()
            )));
        }
        let node_count = pg2.iter().map(|(s, _)| s[1] as usize + 1).max().unwrap_or(0);
        let mut neighbors = alloc::vec![Vec::new(); node_count];
        // lexicographic pair order keeps every list sorted
        for (s, _) in pg2.iter() {
            neighbors[s[0] as usize].push(s[1]);
            neighbors[s[1] as usize].push(s[0]);
        }
        Ok(Self { neighbors })
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        self.neighbors.get(v as usize).map_or(&[], Vec::as_slice)
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    fn nodes_with_degree_at_least(&self, d: usize) -> Vec<NodeId> {
        (0..self.neighbors.len() as NodeId).filter(|&v| self.degree(v) >= d).collect()
    }

    /// Star negatives: a uniform center with at least `k-1` neighbors plus
    /// `k-1` distinct uniform neighbors. With `strict`, leaves must be
    /// pairwise non-adjacent.
    pub fn sample_stars(
        &self,
        target_size: usize,
        count: usize,
        forbidden: &NodeSetSet,
        strict: bool,
        seed: u64,
    ) -> Result<SampledNegatives> {
        check_target(target_size)?;
        let centers = self.nodes_with_degree_at_least(target_size - 1);
        let mut rng = seed::rng(seed);
        Ok(rejection_sample(count, forbidden, |_| {
            if centers.is_empty() {
                return None;
            }
            let center = centers[rng.random_range(0..centers.len())];
            let nbrs = self.neighbors(center);
            let mut set: NodeSet =
                index::sample(&mut rng, nbrs.len(), target_size - 1).into_iter().map(|i| nbrs[i]).collect();
            if strict && set.iter().enumerate().any(|(i, &a)| set[i + 1..].iter().any(|&b| self.is_adjacent(a, b))) {
                return None;
            }
            set.push(center);
            set.sort_unstable();
            Some(set)
        }))
    }

    /// Clique negatives: a uniform seed node extended greedily by uniform
    /// picks from the running common neighborhood.
    pub fn sample_cliques(
        &self,
        target_size: usize,
        count: usize,
        forbidden: &NodeSetSet,
        seed: u64,
    ) -> Result<SampledNegatives> {
        check_target(target_size)?;
        let starts = self.nodes_with_degree_at_least(target_size - 1);
        let mut rng = seed::rng(seed);
        Ok(rejection_sample(count, forbidden, |_| {
            if starts.is_empty() {
                return None;
            }
            let first = starts[rng.random_range(0..starts.len())];
            let mut set: NodeSet = alloc::vec![first];
            let mut pool: Vec<NodeId> = self.neighbors(first).to_vec();
            while set.len() < target_size {
                if pool.is_empty() {
                    return None;
                }
                let next = pool[rng.random_range(0..pool.len())];
                set.push(next);
                pool = sorted_intersection(&pool, self.neighbors(next));
            }
            set.sort_unstable();
            Some(set)
        }))
    }
}

/// Negatives drawn by a sampler, with the attempt accounting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledNegatives {
    pub sets: Vec<NodeSet>,
    pub requested: usize,
    pub attempts: usize,
    /// The attempt budget ran out before `requested` sets were found.
    pub under_sampled: bool,
}

fn rejection_sample(
    count: usize,
    forbidden: &NodeSetSet,
    mut draw: impl FnMut(usize) -> Option<NodeSet>,
) -> SampledNegatives {
    let budget = count.saturating_mul(ATTEMPTS_PER_SAMPLE);
    let mut drawn = NodeSetSet::default();
    let mut sets = Vec::new();
    let mut attempts = 0;
    while sets.len() < count && attempts < budget {
        attempts += 1;
        let Some(set) = draw(attempts) else { continue };
        if forbidden.contains(&set) || drawn.contains(&set) {
            continue;
        }
        drawn.insert(set.clone());
        sets.push(set);
    }
    SampledNegatives { under_sampled: sets.len() < count, sets, requested: count, attempts }
}

pub fn sample_star_negatives(
    pg2: &ProjectedGraph,
    target_size: usize,
    count: usize,
    forbidden: &NodeSetSet,
    strict: bool,
    seed: u64,
) -> Result<SampledNegatives> {
    Adjacency::from_pg2(pg2)?.sample_stars(target_size, count, forbidden, strict, seed)
}

pub fn sample_clique_negatives(
    pg2: &ProjectedGraph,
    target_size: usize,
    count: usize,
    forbidden: &NodeSetSet,
    seed: u64,
) -> Result<SampledNegatives> {
    Adjacency::from_pg2(pg2)?.sample_cliques(target_size, count, forbidden, seed)
}

fn check_target(target_size: usize) -> Result<()> {
    if target_size < 2 {
        return Err(Error::InvalidArgument(format!("target size must be at least 2, got {target_size}")));
    }
    Ok(())
}

fn check_fraction(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidFraction { name, value })
    }
}

/// Assembles a candidate set and checks every invariant against the
/// original hyperedge set `original` (the full `E`, before removal).
pub fn build_candidate_set(
    positives: Vec<NodeSet>,
    negatives: Vec<NodeSet>,
    neg_type: NegativeKind,
    multiplier: usize,
    seed: u64,
    original: &NodeSetSet,
) -> Result<CandidateSet> {
    if multiplier == 0 {
        return Err(Error::CandidateInvariant("imbalance multiplier must be positive".into()));
    }
    let Some(first) = positives.first() else {
        return Err(Error::CandidateInvariant("no positives".into()));
    };
    let target_size = first.len();
    let mut seen = NodeSetSet::default();
    for (side, sets) in [("positive", &positives), ("negative", &negatives)] {
        for c in sets {
            if c.len() != target_size {
                return Err(Error::CandidateInvariant(format!(
                    "{side} {c:?} has cardinality {}, expected {target_size}",
                    c.len()
                )));
            }
            if c.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::CandidateInvariant(format!("{side} {c:?} is not a sorted set")));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::CandidateInvariant(format!(
                    "{side} {c:?} is duplicated or overlaps the other class"
                )));
            }
            let in_original = original.contains(c);
            if side == "positive" && !in_original {
                return Err(Error::CandidateInvariant(format!("positive {c:?} is not a hyperedge")));
            }
            if side == "negative" && in_original {
                return Err(Error::CandidateInvariant(format!("negative {c:?} is a hyperedge")));
            }
        }
    }
    let under_sampled = negatives.len() < multiplier * positives.len();
    Ok(CandidateSet { target_size, neg_type, multiplier, seed, positives, negatives, under_sampled })
}

/// Stratified split: each class is shuffled and cut at `train_frac`
/// independently, so both halves keep the class ratio up to rounding.
pub fn train_test_split(cs: &CandidateSet, train_frac: f64, seed: u64) -> Result<(CandidateSet, CandidateSet)> {
    check_fraction("train_frac", train_frac)?;
    for (class, n) in [("positive", cs.positives.len()), ("negative", cs.negatives.len())] {
        if n < 2 {
            return Err(Error::SplitTooSmall { class, count: n });
        }
    }
    let mut rng = seed::rng(seed);
    let mut cut = |sets: &[NodeSet]| {
        let mut shuffled = sets.to_vec();
        shuffled.shuffle(&mut rng);
        let k = (libm::round(train_frac * sets.len() as f64) as usize).clamp(1, sets.len() - 1);
        let test = shuffled.split_off(k);
        (shuffled, test)
    };
    let (pos_train, pos_test) = cut(&cs.positives);
    let (neg_train, neg_test) = cut(&cs.negatives);
    let with = |positives, negatives| CandidateSet { positives, negatives, ..cs.clone() };
    Ok((with(pos_train, neg_train), with(pos_test, neg_test)))
}
