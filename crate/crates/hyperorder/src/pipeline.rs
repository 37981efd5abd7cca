//! End-to-end hyperedge-prediction experiment.
//!
//! Per seed: remove target-size hyperedges to obtain positives and `E'`,
//! project `E'` up to the maximum order, sample negatives in the 2-pg of
//! `E'`, split, then for each feature and each order `k` train on the
//! columns `x_2..x_k` and score the test half by AUC-PR.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use hyperorder_core::candidates::{
    build_candidate_set, sample_clique_negatives, sample_star_negatives, split_positives, train_test_split,
};
use hyperorder_core::classifier::{predict_scores, train_logreg};
use hyperorder_core::diagnostics::{diagnose, Diagnostics, TripleSampling};
use hyperorder_core::features::feature_matrix;
use hyperorder_core::metrics::{auc_pr, percent_gain};
use hyperorder_core::projection::project_with;
use hyperorder_core::seed::{self, Stage};
use hyperorder_core::{
    CandidateSet, Expansion, FeatureKind, FeatureOptions, Hypergraph, NegativeKind, NodeSetSet, ProjectedGraph,
    ProjectionOptions,
};
use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::config::ExperimentConfig;
use crate::formats::{self, dataset_stem};

/// A value, or the reason it could not be computed. Serialized as the bare
/// value or as the string `"failed:<reason>"`.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<T> {
    Ok(T),
    Failed(String),
}

impl<T> Outcome<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok(v) => Some(v),
            Outcome::Failed(_) => None,
        }
    }

    pub fn failed(reason: impl fmt::Display) -> Self {
        Outcome::Failed(reason.to_string())
    }
}

impl<T, E: fmt::Display> From<Result<T, E>> for Outcome<T> {
    fn from(r: Result<T, E>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::failed(e),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Outcome<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Ok(v) => v.fmt(f),
            Outcome::Failed(r) => write!(f, "failed:{r}"),
        }
    }
}

impl<T: Serialize> Serialize for Outcome<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Outcome::Ok(v) => v.serialize(s),
            Outcome::Failed(r) => s.serialize_str(&format!("failed:{r}")),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Outcome<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr<T> {
            Ok(T),
            Failed(String),
        }
        match Repr::deserialize(d)? {
            Repr::Ok(v) => Ok(Outcome::Ok(v)),
            Repr::Failed(s) => match s.strip_prefix("failed:") {
                Some(r) => Ok(Outcome::Failed(r.to_string())),
                None => Err(de::Error::custom(format!("expected a value or \"failed:<reason>\", got {s:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEdges {
    pub order: usize,
    /// Facet-pair edge count `|E_n|`.
    pub edges: Outcome<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub node_count: usize,
    pub hyperedges: usize,
    pub projected: Vec<OrderEdges>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucCell {
    pub feature: FeatureKind,
    pub order: usize,
    pub auc_pr: Outcome<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    pub seed: u64,
    /// Set when a stage before feature extraction failed; every cell then
    /// carries the same reason.
    pub failure: Option<String>,
    pub remaining_hyperedges: usize,
    pub positives: usize,
    pub negatives: usize,
    pub requested_negatives: usize,
    pub under_sampled: bool,
    pub train_size: usize,
    pub test_size: usize,
    pub cells: Vec<AucCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanCell {
    pub feature: FeatureKind,
    pub order: usize,
    pub mean_auc_pr: Outcome<f64>,
    /// Seeds that contributed to the mean.
    pub seeds_ok: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedGain {
    pub seed: u64,
    pub gain_pct: Outcome<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainCell {
    pub feature: FeatureKind,
    pub from_order: usize,
    pub to_order: usize,
    /// Gain between the seed-averaged AUC-PR values.
    pub gain_pct: Outcome<f64>,
    pub per_seed: Vec<SeedGain>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Timings {
    pub total_ms: f64,
    pub load_ms: f64,
    pub dataset_projection_ms: f64,
    pub diagnostics_ms: f64,
    pub seeds_ms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub dataset: DatasetSummary,
    pub seeds: Vec<SeedResult>,
    pub mean_auc_pr: Vec<MeanCell>,
    pub gains: Vec<GainCell>,
    pub diagnostics: Option<Outcome<Diagnostics>>,
    pub timings: Timings,
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Cache location for one projected graph; `tag` distinguishes the full
/// dataset from per-seed residual hypergraphs.
pub fn cache_path(dir: &Path, dataset: &Path, max_size: usize, tag: &str, order: usize) -> PathBuf {
    dir.join(format!("{}-m{max_size}{tag}-n{order}.pg", dataset_stem(dataset)))
}

/// Projects `hg` at `order`, reading and filling the cache file when given.
pub fn cached_projection(
    hg: &Hypergraph,
    order: usize,
    opts: &ProjectionOptions,
    cache: Option<&Path>,
) -> anyhow::Result<ProjectedGraph> {
    if let Some(path) = cache {
        if path.is_file() {
            if let Ok(pg) = formats::load_projection(path) {
                if pg.order() == order {
                    return Ok(pg);
                }
            }
        }
    }
    let pg = project_with(hg, order, opts)?;
    if let Some(path) = cache {
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        formats::save_projection(&tmp, &pg)?;
        std::fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(pg)
}

/// `|E|` and `|E_n|` for `n = 2..=max_order`; a failing order is recorded
/// and does not stop the others.
pub fn dataset_summary(hg: &Hypergraph, graphs: &[Outcome<ProjectedGraph>]) -> DatasetSummary {
    DatasetSummary {
        node_count: hg.node_count(),
        hyperedges: hg.len(),
        projected: graphs
            .iter()
            .enumerate()
            .map(|(i, g)| OrderEdges {
                order: i + 2,
                edges: match g {
                    Outcome::Ok(pg) => Outcome::Ok(pg.edge_count()),
                    Outcome::Failed(r) => Outcome::Failed(r.clone()),
                },
            })
            .collect(),
    }
}

pub struct Prepared<'a> {
    pub cfg: &'a ExperimentConfig,
    pub hg: &'a Hypergraph,
    pub original: NodeSetSet,
}

impl<'a> Prepared<'a> {
    pub fn new(cfg: &'a ExperimentConfig, hg: &'a Hypergraph) -> Self {
        Self { cfg, hg, original: hg.node_set_index() }
    }

    fn projection_options(&self) -> ProjectionOptions {
        ProjectionOptions { max_subsets: self.cfg.projection_budget }
    }

    fn failed_seed(&self, seed: u64, reason: impl fmt::Display) -> SeedResult {
        let reason = reason.to_string();
        SeedResult {
            seed,
            failure: Some(reason.clone()),
            remaining_hyperedges: 0,
            positives: 0,
            negatives: 0,
            requested_negatives: 0,
            under_sampled: false,
            train_size: 0,
            test_size: 0,
            cells: self.all_cells(|_, _| Outcome::Failed(reason.clone())),
        }
    }

    fn all_cells(&self, mut f: impl FnMut(FeatureKind, usize) -> Outcome<f64>) -> Vec<AucCell> {
        let mut cells = Vec::new();
        for &feature in &self.cfg.features {
            for order in 2..=self.cfg.max_order {
                cells.push(AucCell { feature, order, auc_pr: f(feature, order) });
            }
        }
        cells
    }

    /// Candidate set of one seed plus the expansion of `E'` (possibly
    /// truncated below `max_order` when a projection fails).
    pub fn candidates(&self, seed: u64) -> anyhow::Result<(CandidateSet, usize, Expansion, Option<String>)> {
        let cfg = self.cfg;
        let split = split_positives(self.hg, cfg.target_size, cfg.retain, seed::derive(seed, Stage::Removal))?;
        let opts = self.projection_options();
        let mut graphs = Vec::new();
        let mut truncated = None;
        for order in 2..=cfg.max_order {
            let cache = cfg.cache_dir.as_ref().map(|d| {
                let tag = format!("-t{}-r{}-s{seed}", cfg.target_size, cfg.retain);
                cache_path(d, &cfg.dataset, cfg.max_size, &tag, order)
            });
            match cached_projection(&split.remaining, order, &opts, cache.as_deref()) {
                Ok(pg) => graphs.push(pg),
                Err(e) if order > 2 => {
                    truncated = Some(format!("order {order}: {e}"));
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let exp = Expansion::from_graphs(graphs)?;
        let pg2 = exp.graph(2).expect("order 2 is always built");
        let want = cfg.ratio * split.positives.len();
        let neg_seed = seed::derive(seed, Stage::Negatives);
        let sampled = match cfg.neg_type {
            NegativeKind::Star => {
                sample_star_negatives(pg2, cfg.target_size, want, &self.original, cfg.strict_stars, neg_seed)?
            }
            NegativeKind::Clique => sample_clique_negatives(pg2, cfg.target_size, want, &self.original, neg_seed)?,
        };
        let cs = build_candidate_set(split.positives, sampled.sets, cfg.neg_type, cfg.ratio, seed, &self.original)?;
        Ok((cs, split.remaining.len(), exp, truncated))
    }

    pub fn run_seed(&self, seed: u64) -> SeedResult {
        let cfg = self.cfg;
        let (cs, remaining, exp, truncated) = match self.candidates(seed) {
            Ok(v) => v,
            Err(e) => return self.failed_seed(seed, format!("{e:#}")),
        };
        let (train, test) = match train_test_split(&cs, cfg.train_frac, seed::derive(seed, Stage::Split)) {
            Ok(v) => v,
            Err(e) => {
                let mut r = self.failed_seed(seed, e);
                r.remaining_hyperedges = remaining;
                r.positives = cs.positives.len();
                r.negatives = cs.negatives.len();
                r.requested_negatives = cs.requested_negatives();
                r.under_sampled = cs.under_sampled;
                return r;
            }
        };
        let opts = FeatureOptions { mean_mode: cfg.mean_mode };
        let mut cells = Vec::new();
        for &feature in &cfg.features {
            let matrices = feature_matrix(&exp, &train, feature, &opts)
                .and_then(|tr| feature_matrix(&exp, &test, feature, &opts).map(|te| (tr, te)));
            for order in 2..=cfg.max_order {
                let auc = match (&matrices, order > exp.max_order()) {
                    (_, true) => Outcome::failed(truncated.as_deref().unwrap_or("projection unavailable")),
                    (Err(e), _) => Outcome::failed(e),
                    (Ok((tr, te)), false) => train_logreg(&tr.up_to_order(order), &tr.labels, &cfg.classifier)
                        .and_then(|m| predict_scores(&m, &te.up_to_order(order)))
                        .and_then(|scores| auc_pr(&scores, &te.labels))
                        .map(|r| r.auc_pr)
                        .into(),
                };
                cells.push(AucCell { feature, order, auc_pr: auc });
            }
        }
        SeedResult {
            seed,
            failure: None,
            remaining_hyperedges: remaining,
            positives: cs.positives.len(),
            negatives: cs.negatives.len(),
            requested_negatives: cs.requested_negatives(),
            under_sampled: cs.under_sampled,
            train_size: train.len(),
            test_size: test.len(),
            cells,
        }
    }
}

fn aggregate(cfg: &ExperimentConfig, seeds: &[SeedResult]) -> (Vec<MeanCell>, Vec<GainCell>) {
    let auc = |s: &SeedResult, f: FeatureKind, o: usize| {
        s.cells.iter().find(|c| c.feature == f && c.order == o).and_then(|c| c.auc_pr.ok().copied())
    };
    let mut means = Vec::new();
    for &feature in &cfg.features {
        for order in 2..=cfg.max_order {
            let vals: Vec<f64> = seeds.iter().filter_map(|s| auc(s, feature, order)).collect();
            let mean = if vals.is_empty() {
                let reason = seeds
                    .iter()
                    .find_map(|s| s.cells.iter().find(|c| c.feature == feature && c.order == order))
                    .and_then(|c| match &c.auc_pr {
                        Outcome::Failed(r) => Some(r.clone()),
                        Outcome::Ok(_) => None,
                    })
                    .unwrap_or_else(|| "no seed produced a value".into());
                Outcome::Failed(reason)
            } else {
                Outcome::Ok(vals.iter().sum::<f64>() / vals.len() as f64)
            };
            means.push(MeanCell { feature, order, mean_auc_pr: mean, seeds_ok: vals.len() });
        }
    }
    let mean_of =
        |f: FeatureKind, o: usize| means.iter().find(|m| m.feature == f && m.order == o).map(|m| &m.mean_auc_pr);
    let gain = |lo: Option<&Outcome<f64>>, hi: Option<&Outcome<f64>>| -> Outcome<f64> {
        match (lo, hi) {
            (Some(Outcome::Ok(a)), Some(Outcome::Ok(b))) => percent_gain(*a, *b).into(),
            (Some(Outcome::Failed(r)), _) | (_, Some(Outcome::Failed(r))) => Outcome::Failed(r.clone()),
            _ => Outcome::failed("missing cell"),
        }
    };
    let mut gains = Vec::new();
    for &feature in &cfg.features {
        for from in 2..cfg.max_order {
            let per_seed = seeds
                .iter()
                .map(|s| {
                    let cell = |o| match auc(s, feature, o) {
                        Some(v) => Outcome::Ok(v),
                        None => Outcome::failed("missing AUC-PR"),
                    };
                    SeedGain { seed: s.seed, gain_pct: gain(Some(&cell(from)), Some(&cell(from + 1))) }
                })
                .collect();
            gains.push(GainCell {
                feature,
                from_order: from,
                to_order: from + 1,
                gain_pct: gain(mean_of(feature, from), mean_of(feature, from + 1)),
                per_seed,
            });
        }
    }
    (means, gains)
}

/// Loads the configured dataset as a weighted hypergraph.
pub fn load_hypergraph(cfg: &ExperimentConfig) -> anyhow::Result<Hypergraph> {
    let parsed = formats::load_dataset(&cfg.dataset, cfg.format, cfg.max_size)
        .with_context(|| format!("loading dataset {}", cfg.dataset.display()))?;
    Ok(Hypergraph::dedup_and_weight(&parsed.raw)?)
}

/// Full-dataset projections for orders `2..=max_order`.
pub fn dataset_projections(
    hg: &Hypergraph,
    max_order: usize,
    opts: &ProjectionOptions,
    cache: Option<(&Path, &Path, usize)>,
) -> Vec<Outcome<ProjectedGraph>> {
    (2..=max_order)
        .map(|order| {
            let path = cache.map(|(dir, dataset, max_size)| cache_path(dir, dataset, max_size, "", order));
            cached_projection(hg, order, opts, path.as_deref()).map_err(|e| format!("{e:#}")).into()
        })
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> anyhow::Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let hg = load_hypergraph(cfg)?;
    let load_ms = ms(start);
    run_on_hypergraph(cfg, &hg, load_ms, start)
}

/// Runs every configured seed on an already loaded hypergraph.
pub fn run_on_hypergraph(
    cfg: &ExperimentConfig,
    hg: &Hypergraph,
    load_ms: f64,
    start: Instant,
) -> anyhow::Result<ExperimentResult> {
    cfg.validate()?;
    if let Some(dir) = &cfg.cache_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
    }
    let opts = ProjectionOptions { max_subsets: cfg.projection_budget };
    let cache = cfg.cache_dir.as_deref().map(|d| (d, cfg.dataset.as_path(), cfg.max_size));

    let t = Instant::now();
    let top = if cfg.diagnostics.enabled { cfg.max_order.max(3) } else { cfg.max_order };
    let graphs = dataset_projections(hg, top, &opts, cache);
    let summary = dataset_summary(hg, &graphs[..cfg.max_order - 1]);
    let dataset_projection_ms = ms(t);

    let t = Instant::now();
    let diagnostics = cfg.diagnostics.enabled.then(|| match (&graphs[0], &graphs[1]) {
        (Outcome::Ok(pg2), Outcome::Ok(pg3)) => {
            let sampling = TripleSampling {
                num_samples: cfg.diagnostics.num_samples,
                seed: cfg.seeds[0],
                sort_pairs: cfg.diagnostics.sort_pairs,
            };
            diagnose(pg2, pg3, hg.node_count(), &sampling).into()
        }
        (Outcome::Failed(r), _) | (_, Outcome::Failed(r)) => Outcome::Failed(r.clone()),
    });
    let diagnostics_ms = ms(t);
    drop(graphs);

    let prepared = Prepared::new(cfg, hg);
    let runs: Vec<(SeedResult, f64)> = cfg
        .seeds
        .par_iter()
        .map(|&s| {
            let t = Instant::now();
            let r = prepared.run_seed(s);
            (r, ms(t))
        })
        .collect();
    let (seeds, seeds_ms): (Vec<SeedResult>, Vec<f64>) = runs.into_iter().unzip();
    let (mean_auc_pr, gains) = aggregate(cfg, &seeds);

    let echoed = ExperimentConfig { out: None, cache_dir: None, ..cfg.clone() };
    Ok(ExperimentResult {
        config: echoed,
        dataset: summary,
        seeds,
        mean_auc_pr,
        gains,
        diagnostics,
        timings: Timings { total_ms: ms(start), load_ms, dataset_projection_ms, diagnostics_ms, seeds_ms },
    })
}
