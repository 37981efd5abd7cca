//! Order-indexed candidate features.
//!
//! For a candidate node set `c` and a projected graph of order `n`, the
//! "inner" edges are the facet pairs inside `c` whose union has `n` nodes.
//! Mean features (GM, HM, AM) average the inner edge weights; every inner
//! pair of one `n`-subset has that subset's weight, so the means are taken
//! over the distinct `n`-subsets of `c` (the `C(n,2)` replication cancels).
//! Neighborhood features (CN, JC, AA) intersect the facet neighborhoods of
//! every `(n-1)`-subset of `c`.

use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "std")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::candidates::CandidateSet;
use crate::classifier::Matrix;
use crate::combinatorics::for_each_subset;
use crate::projection::{Expansion, ProjectedGraph};
use crate::{Error, NodeId, NodeSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureKind {
    /// Geometric mean of inner edge weights.
    GM,
    /// Harmonic mean of inner edge weights.
    HM,
    /// Arithmetic mean of inner edge weights.
    AM,
    /// Common neighbors.
    CN,
    /// Jaccard coefficient.
    JC,
    /// Adamic-Adar index.
    AA,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 6] =
        [FeatureKind::GM, FeatureKind::HM, FeatureKind::AM, FeatureKind::CN, FeatureKind::JC, FeatureKind::AA];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::GM => "GM",
            FeatureKind::HM => "HM",
            FeatureKind::AM => "AM",
            FeatureKind::CN => "CN",
            FeatureKind::JC => "JC",
            FeatureKind::AA => "AA",
        }
    }

    pub fn is_mean(self) -> bool {
        matches!(self, FeatureKind::GM | FeatureKind::HM | FeatureKind::AM)
    }
}

impl core::fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for FeatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FeatureKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("unknown feature {s:?}")))
    }
}

/// Which inner edges the mean features average over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanMode {
    /// Every potential inner pair; absent edges count as weight 0.
    #[default]
    AllPairs,
    /// Only inner edges present in the graph; 0 when there are none.
    ExistingOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FeatureOptions {
    pub mean_mode: MeanMode,
}

/// Inner facet pairs of `c` at order `n`: `C(|c|,n)·C(n,2)` pairs, each
/// ordered `(smaller, larger)`, including pairs whose edge is absent.
pub fn inner_pairs(c: &[NodeId], n: usize) -> Vec<(NodeSet, NodeSet)> {
    let mut out = Vec::new();
    if n < 2 || c.len() < n {
        return out;
    }
    let c = canonical(c);
    for_each_subset(&c, n, |s| {
        for i in 0..n {
            for j in i + 1..n {
                let drop =
                    |k: usize| s.iter().enumerate().filter(|&(p, _)| p != k).map(|(_, &v)| v).collect::<NodeSet>();
                out.push((drop(j), drop(i)));
            }
        }
    });
    out
}

fn canonical(c: &[NodeId]) -> NodeSet {
    let mut c = c.to_vec();
    c.sort_unstable();
    c.dedup();
    c
}

/// Weights of the `n`-subsets of `c` (0 for inactive subsets).
fn subset_weights(pg: &ProjectedGraph, c: &[NodeId]) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_subset(c, pg.order(), |s| out.push(pg.weight_of(s)));
    out
}

/// GM, HM or AM of the inner edge weights of `c` in `pg`.
pub fn mean_feature(pg: &ProjectedGraph, c: &[NodeId], kind: FeatureKind, mode: MeanMode) -> Result<f64> {
    if !kind.is_mean() {
        return Err(Error::InvalidArgument(alloc::format!("{kind} is not a mean feature")));
    }
    let c = canonical(c);
    if c.len() < pg.order() {
        return Ok(0.0);
    }
    let mut weights = subset_weights(pg, &c);
    if mode == MeanMode::ExistingOnly {
        weights.retain(|&w| w > 0);
    }
    Ok(mean_of(&weights, kind))
}

fn mean_of(weights: &[u64], kind: FeatureKind) -> f64 {
    if weights.is_empty() {
        return 0.0;
    }
    let m = weights.len() as f64;
    let has_zero = weights.contains(&0);
    match kind {
        FeatureKind::AM => weights.iter().map(|&w| w as f64).sum::<f64>() / m,
        FeatureKind::GM if has_zero => 0.0,
        FeatureKind::GM => libm::exp(weights.iter().map(|&w| libm::log(w as f64)).sum::<f64>() / m),
        FeatureKind::HM if has_zero => 0.0,
        FeatureKind::HM => m / weights.iter().map(|&w| 1.0 / w as f64).sum::<f64>(),
        _ => unreachable!("mean kinds only"),
    }
}

/// CN, JC or AA of `c` in `pg`, over the neighborhoods of all
/// `(n-1)`-subsets of `c`.
pub fn neighborhood_feature(pg: &ProjectedGraph, c: &[NodeId], kind: FeatureKind) -> Result<f64> {
    if kind.is_mean() {
        return Err(Error::InvalidArgument(alloc::format!("{kind} is not a neighborhood feature")));
    }
    let c = canonical(c);
    let n = pg.order();
    if c.len() < n {
        return Ok(0.0);
    }
    let mut neighborhoods: Vec<Vec<NodeSet>> = Vec::new();
    let mut empty = false;
    for_each_subset(&c, n - 1, |f| {
        if empty {
            return;
        }
        let nbrs = pg.facet_neighbors(f).expect("facet width matches order");
        empty = nbrs.is_empty();
        neighborhoods.push(nbrs);
    });
    if empty {
        return Ok(0.0);
    }
    neighborhoods.sort_by_key(Vec::len);
    let mut common = neighborhoods[0].clone();
    for other in &neighborhoods[1..] {
        common.retain(|u| other.binary_search(u).is_ok());
        if common.is_empty() {
            break;
        }
    }
    Ok(match kind {
        FeatureKind::CN => common.len() as f64,
        FeatureKind::JC => {
            if common.is_empty() {
                0.0
            } else {
                let mut union: Vec<&NodeSet> = neighborhoods.iter().flatten().collect();
                union.sort_unstable();
                union.dedup();
                common.len() as f64 / union.len() as f64
            }
        }
        FeatureKind::AA => {
            common.iter().map(|u| pg.facet_degree(u)).filter(|&d| d > 1).map(|d| 1.0 / libm::log(d as f64)).sum()
        }
        _ => unreachable!("neighborhood kinds only"),
    })
}

/// Feature of `c` in a single projected graph.
pub fn feature(pg: &ProjectedGraph, c: &[NodeId], kind: FeatureKind, opts: &FeatureOptions) -> Result<f64> {
    if kind.is_mean() {
        mean_feature(pg, c, kind, opts.mean_mode)
    } else {
        neighborhood_feature(pg, c, kind)
    }
}

/// `[x_2(c), …, x_n(c)]` over the expansion, ascending by order.
pub fn feature_vector(exp: &Expansion, c: &[NodeId], kind: FeatureKind, opts: &FeatureOptions) -> Result<Vec<f64>> {
    exp.graphs().iter().map(|pg| feature(pg, c, kind, opts)).collect()
}

/// Feature rows for every candidate of one kind, positives first.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub kind: FeatureKind,
    /// Projection order of each column.
    pub orders: Vec<usize>,
    pub column_names: Vec<String>,
    pub values: Matrix,
    pub labels: Vec<u8>,
}

impl FeatureMatrix {
    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    /// Columns for orders `2..=max_order` only.
    pub fn up_to_order(&self, max_order: usize) -> Matrix {
        let k = self.orders.iter().take_while(|&&o| o <= max_order).count();
        self.values.leading_columns(k)
    }
}

pub fn feature_matrix(
    exp: &Expansion,
    cs: &CandidateSet,
    kind: FeatureKind,
    opts: &FeatureOptions,
) -> Result<FeatureMatrix> {
    if exp.is_empty() {
        return Err(Error::InvalidArgument("empty expansion".into()));
    }
    let rows: Vec<(&NodeSet, u8)> = cs.labeled().collect();
    if let Some((c, _)) = rows.iter().find(|(c, _)| c.len() != cs.target_size) {
        return Err(Error::WrongCardinality { expected: cs.target_size, got: c.len() });
    }
    let compute = |(c, _): &(&NodeSet, u8)| -> Result<Vec<f64>> {
        let v = feature_vector(exp, c, kind, opts)?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteFeature { feature: kind.as_str(), candidate: (*c).clone() });
        }
        Ok(v)
    };
    #[cfg(feature = "std")]
    let vectors: Vec<Vec<f64>> = rows.par_iter().map(compute).collect::<Result<_>>()?;
    #[cfg(not(feature = "std"))]
    let vectors: Vec<Vec<f64>> = rows.iter().map(compute).collect::<Result<_>>()?;

    let cols = exp.len();
    let mut data = Vec::with_capacity(rows.len() * cols);
    for v in vectors {
        data.extend(v);
    }
    let orders: Vec<usize> = (2..=exp.max_order()).collect();
    Ok(FeatureMatrix {
        kind,
        column_names: orders.iter().map(|o| alloc::format!("x{o}")).collect(),
        orders,
        values: Matrix::from_row_major(rows.len(), cols, data)?,
        labels: rows.iter().map(|&(_, y)| y).collect(),
    })
}
