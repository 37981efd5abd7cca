//! Experiment configuration: a TOML file plus command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use hyperorder_core::{FeatureKind, LogRegConfig, MeanMode, NegativeKind};
use serde::{Deserialize, Serialize};

use crate::formats::{DatasetFormat, DEFAULT_MAX_SIZE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    pub enabled: bool,
    pub num_samples: u64,
    /// Sort the three pairwise bins of a triple.
    pub sort_pairs: bool,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self { enabled: true, num_samples: 1_000_000, sort_pairs: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: PathBuf,
    pub format: DatasetFormat,
    pub max_size: usize,
    pub target_size: usize,
    pub max_order: usize,
    pub features: Vec<FeatureKind>,
    pub neg_type: NegativeKind,
    /// Negatives per positive.
    pub ratio: usize,
    pub retain: f64,
    pub train_frac: f64,
    pub seeds: Vec<u64>,
    pub strict_stars: bool,
    pub mean_mode: MeanMode,
    pub classifier: LogRegConfig,
    pub diagnostics: DiagnosticsConfig,
    /// Upper bound on active subsets per projected graph.
    pub projection_budget: u64,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub out_format: ReportFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: PathBuf::new(),
            format: DatasetFormat::Simplicial,
            max_size: DEFAULT_MAX_SIZE,
            target_size: 4,
            max_order: 3,
            features: FeatureKind::ALL.to_vec(),
            neg_type: NegativeKind::Clique,
            ratio: 10,
            retain: 0.6,
            train_frac: 0.5,
            seeds: (0..5).collect(),
            strict_stars: false,
            mean_mode: MeanMode::AllPairs,
            classifier: LogRegConfig::default(),
            diagnostics: DiagnosticsConfig::default(),
            projection_budget: hyperorder_core::ProjectionOptions::default().max_subsets,
            cache_dir: None,
            out: None,
            out_format: ReportFormat::Json,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.dataset.as_os_str().is_empty() {
            bail!("no dataset configured");
        }
        if self.target_size < 3 {
            bail!("target_size must be at least 3, got {}", self.target_size);
        }
        if self.target_size > self.max_size {
            bail!("target_size {} exceeds max_size {}", self.target_size, self.max_size);
        }
        if self.max_order < 2 || self.max_order > self.target_size - 1 {
            bail!("max_order must lie in 2..={}, got {}", self.target_size - 1, self.max_order);
        }
        if self.ratio < 1 {
            bail!("ratio must be at least 1");
        }
        if self.seeds.is_empty() {
            bail!("at least one seed is required");
        }
        if self.features.is_empty() {
            bail!("at least one feature is required");
        }
        for (name, v) in [("retain", self.retain), ("train_frac", self.train_frac)] {
            if !(v > 0.0 && v < 1.0) {
                bail!("{name} must lie strictly between 0 and 1, got {v}");
            }
        }
        if self.diagnostics.enabled && self.diagnostics.num_samples == 0 {
            bail!("diagnostics.num_samples must be positive");
        }
        Ok(())
    }
}

/// Parses `"GM,cn, AA"`.
pub fn parse_features(s: &str) -> anyhow::Result<Vec<FeatureKind>> {
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let k: FeatureKind = part.parse()?;
        if !out.contains(&k) {
            out.push(k);
        }
    }
    Ok(out)
}

/// Parses `"0,1,2"` or a range `"0..10"` (end exclusive).
pub fn parse_seeds(s: &str) -> anyhow::Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
        if a >= b {
            bail!("empty seed range {s:?}");
        }
        return Ok((a..b).collect());
    }
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| Ok(p.trim().parse::<u64>()?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_need_only_a_dataset() {
        let cfg = ExperimentConfig::from_toml_str("dataset = \"x\"").unwrap();
        assert_eq!(cfg.target_size, 4);
        assert_eq!(cfg.features.len(), 6);
        cfg.validate().unwrap();
        assert!(ExperimentConfig::default().validate().is_err());
    }

    #[test]
    fn full_file() {
        let cfg = ExperimentConfig::from_toml_str(
            r#"
            dataset = "data/email-Enron"
            format = "edge-list"
            target_size = 5
            max_order = 4
            features = ["GM", "CN"]
            neg_type = "star"
            ratio = 5
            seeds = [3, 4]
            mean_mode = "existing-only"
            [classifier]
            l2_strength = 0.5
            tol = 1e-6
            max_iter = 100
            standardize = false
            [diagnostics]
            enabled = false
            "#,
        )
        .unwrap();
        assert_eq!(cfg.format, DatasetFormat::EdgeList);
        assert_eq!(cfg.features, vec![FeatureKind::GM, FeatureKind::CN]);
        assert_eq!(cfg.neg_type, NegativeKind::Star);
        assert_eq!(cfg.mean_mode, MeanMode::ExistingOnly);
        assert_eq!(cfg.classifier.max_iter, 100);
        assert!(!cfg.diagnostics.enabled);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_toml_str("dataset = \"x\"\nratoi = 3").is_err());
    }

    #[test]
    fn validation() {
        let ok = ExperimentConfig { dataset: "x".into(), ..Default::default() };
        for bad in [
            ExperimentConfig { max_order: 4, ..ok.clone() },
            ExperimentConfig { max_order: 1, ..ok.clone() },
            ExperimentConfig { target_size: 2, max_order: 2, ..ok.clone() },
            ExperimentConfig { ratio: 0, ..ok.clone() },
            ExperimentConfig { seeds: vec![], ..ok.clone() },
            ExperimentConfig { retain: 1.0, ..ok.clone() },
            ExperimentConfig { features: vec![], ..ok.clone() },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_seeds("0..3").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_seeds("5, 7").unwrap(), vec![5, 7]);
        assert!(parse_seeds("3..3").is_err());
        assert_eq!(parse_features("cn,AA,cn").unwrap(), vec![FeatureKind::CN, FeatureKind::AA]);
        assert!(parse_features("XX").is_err());
    }
}
