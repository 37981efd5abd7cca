//! Dataset-level statistics comparing the 2- and 3-projected graphs.
//!
//! For a uniformly random node triple, `W2` collects the binned weights of
//! its three pairs in the 2-pg and `W3` the binned weight of the triple in
//! the 3-pg. Plug-in (maximum-likelihood) estimates of `I(W3; W2)` and
//! `H(W3 | W2)` are computed from the empirical joint histogram, in bits.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
#[cfg(feature = "std")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::projection::ProjectedGraph;
use crate::seed::{self, Stage};
use crate::{Error, NodeId, Result};

/// Number of bins produced by [`bin_weight`].
pub const BINS: usize = 10;

/// Fixed partition count for sampling; results do not depend on threads.
pub const SAMPLE_WORKERS: u32 = 64;

/// `h(ω) = min(⌈log₂(ω + 1)⌉, 9)`.
pub fn bin_weight(weight: u64) -> u8 {
    // ⌈log₂ x⌉ for x ≥ 1 is the bit length of x − 1
    let bits = 64 - weight.leading_zeros();
    bits.min(9) as u8
}

/// `100 × #active 3-subsets / C(|V|, 3)`.
pub fn edge_density_3pg(pg3: &ProjectedGraph, node_count: usize) -> Result<f64> {
    if pg3.order() != 3 {
        return Err(Error::InvalidArgument(alloc::format!(
            "expected the 3-projected graph, got order {}",
            pg3.order()
        )));
    }
    if node_count < 3 {
        return Err(Error::InvalidArgument(alloc::format!("edge density needs at least 3 nodes, got {node_count}")));
    }
    let possible = binomial(node_count as u64, 3) as f64;
    Ok(100.0 * pg3.subset_count() as f64 / possible)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleSample {
    pub w2: [u8; 3],
    pub w3: u8,
}

impl TripleSample {
    fn cell(self) -> usize {
        let [a, b, c] = self.w2;
        ((usize::from(a) * BINS + usize::from(b)) * BINS + usize::from(c)) * BINS + usize::from(self.w3)
    }
}

/// Empirical joint law of `(W2, W3)` over the `10³ × 10` binned cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointHistogram {
    counts: Vec<u64>,
    total: u64,
}

const CELLS: usize = BINS * BINS * BINS * BINS;

impl Default for JointHistogram {
    fn default() -> Self {
        Self { counts: vec![0; CELLS], total: 0 }
    }
}

impl JointHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cells<I: IntoIterator<Item = (TripleSample, u64)>>(cells: I) -> Result<Self> {
        let mut h = Self::new();
        for (s, c) in cells {
            if s.w3 as usize >= BINS || s.w2.iter().any(|&v| v as usize >= BINS) {
                return Err(Error::InvalidArgument(alloc::format!("bin out of range in {s:?}")));
            }
            h.counts[s.cell()] += c;
            h.total += c;
        }
        Ok(h)
    }

    pub fn add(&mut self, s: TripleSample) {
        self.counts[s.cell()] += 1;
        self.total += 1;
    }

    /// Cell-wise sum.
    pub fn merge(&mut self, other: &JointHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, s: TripleSample) -> u64 {
        self.counts[s.cell()]
    }

    /// Non-empty cells.
    pub fn cells(&self) -> impl Iterator<Item = (TripleSample, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| {
            let w3 = (i % BINS) as u8;
            let rest = i / BINS;
            let w2 = [(rest / 100) as u8, (rest / 10 % 10) as u8, (rest % 10) as u8];
            (TripleSample { w2, w3 }, c)
        })
    }

    fn w2_marginal(&self) -> Vec<u64> {
        self.counts.chunks_exact(BINS).map(|c| c.iter().sum()).collect()
    }

    fn w3_marginal(&self) -> Vec<u64> {
        let mut m = vec![0; BINS];
        for (i, &c) in self.counts.iter().enumerate() {
            m[i % BINS] += c;
        }
        m
    }

    /// `H(W2, W3)` in bits.
    pub fn joint_entropy(&self) -> f64 {
        entropy_bits(&self.counts, self.total)
    }

    /// `H(W2)` in bits.
    pub fn entropy_w2(&self) -> f64 {
        entropy_bits(&self.w2_marginal(), self.total)
    }

    /// `H(W3)` in bits.
    pub fn entropy_w3(&self) -> f64 {
        entropy_bits(&self.w3_marginal(), self.total)
    }
}

fn entropy_bits(counts: &[u64], total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * libm::log2(p)
        })
        .sum::<f64>()
}

/// Plug-in `I(W3; W2) = Σ p(a,b) log₂(p(a,b) / (p(a) p(b)))`.
pub fn mutual_information(hist: &JointHistogram) -> f64 {
    if hist.total == 0 {
        return 0.0;
    }
    let n = hist.total as f64;
    let w2 = hist.w2_marginal();
    let w3 = hist.w3_marginal();
    let mi: f64 = hist
        .counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| {
            let pab = c as f64 / n;
            let pa = w2[i / BINS] as f64 / n;
            let pb = w3[i % BINS] as f64 / n;
            pab * libm::log2(pab / (pa * pb))
        })
        .sum();
    mi.max(0.0)
}

/// Plug-in `H(W3 | W2) = H(W2, W3) − H(W2)`.
pub fn conditional_entropy(hist: &JointHistogram) -> f64 {
    (hist.joint_entropy() - hist.entropy_w2()).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSampling {
    pub num_samples: u64,
    pub seed: u64,
    /// Sort the three pairwise bins so the sample ignores node labeling.
    pub sort_pairs: bool,
}

impl Default for TripleSampling {
    fn default() -> Self {
        Self { num_samples: 1_000_000, seed: 0, sort_pairs: true }
    }
}

/// Histogram of `(W2, W3)` over uniformly sampled unordered node triples.
///
/// Samples are split over [`SAMPLE_WORKERS`] partitions with derived seeds
/// and merged cell-wise, so the result depends only on the inputs.
pub fn sample_triples(
    pg2: &ProjectedGraph,
    pg3: &ProjectedGraph,
    node_count: usize,
    cfg: &TripleSampling,
) -> Result<JointHistogram> {
    if pg2.order() != 2 || pg3.order() != 3 {
        return Err(Error::InvalidArgument("expected the 2- and 3-projected graphs".into()));
    }
    if node_count < 3 {
        return Err(Error::InvalidArgument(alloc::format!("triple sampling needs at least 3 nodes, got {node_count}")));
    }
    if cfg.num_samples == 0 {
        return Err(Error::InvalidArgument("num_samples must be positive".into()));
    }
    let workers = u64::from(SAMPLE_WORKERS);
    let share = |w: u32| cfg.num_samples / workers + u64::from(u64::from(w) < cfg.num_samples % workers);
    let run = |w: u32| -> JointHistogram {
        let mut rng = seed::stage_rng(seed::derive(cfg.seed, Stage::Diagnostics), Stage::Worker(w));
        let mut hist = JointHistogram::new();
        let n = node_count as NodeId;
        for _ in 0..share(w) {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n);
            while b == a {
                b = rng.random_range(0..n);
            }
            let mut c = rng.random_range(0..n);
            while c == a || c == b {
                c = rng.random_range(0..n);
            }
            let mut t = [a, b, c];
            t.sort_unstable();
            let [v1, v2, v3] = t;
            let mut w2 = [
                bin_weight(pg2.weight_of(&[v1, v2])),
                bin_weight(pg2.weight_of(&[v2, v3])),
                bin_weight(pg2.weight_of(&[v1, v3])),
            ];
            if cfg.sort_pairs {
                w2.sort_unstable();
            }
            hist.add(TripleSample { w2, w3: bin_weight(pg3.weight_of(&t)) });
        }
        hist
    };
    #[cfg(feature = "std")]
    let parts: Vec<JointHistogram> = (0..SAMPLE_WORKERS).into_par_iter().map(run).collect();
    #[cfg(not(feature = "std"))]
    let parts: Vec<JointHistogram> = (0..SAMPLE_WORKERS).map(run).collect();

    let mut total = JointHistogram::new();
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

/// The M3 statistics of one hypergraph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub edge_density_pct: f64,
    pub mutual_information_bits: f64,
    pub conditional_entropy_bits: f64,
    pub num_samples: u64,
    pub seed: u64,
}

pub fn diagnose(
    pg2: &ProjectedGraph,
    pg3: &ProjectedGraph,
    node_count: usize,
    cfg: &TripleSampling,
) -> Result<Diagnostics> {
    let hist = sample_triples(pg2, pg3, node_count, cfg)?;
    Ok(Diagnostics {
        edge_density_pct: edge_density_3pg(pg3, node_count)?,
        mutual_information_bits: mutual_information(&hist),
        conditional_entropy_bits: conditional_entropy(&hist),
        num_samples: cfg.num_samples,
        seed: cfg.seed,
    })
}
