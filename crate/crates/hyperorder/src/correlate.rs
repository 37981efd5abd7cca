//! Correlation between a gain column and a diagnostic across datasets.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail};
use hyperorder_core::metrics::pearson;
use hyperorder_core::FeatureKind;
use serde::{Deserialize, Serialize};

use crate::pipeline::{ExperimentResult, Outcome};
use crate::report::load_json_report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticStat {
    EdgeDensityPct,
    MutualInformationBits,
    ConditionalEntropyBits,
}

impl DiagnosticStat {
    pub fn of(self, res: &ExperimentResult) -> Option<f64> {
        let d = res.diagnostics.as_ref()?.ok()?;
        Some(match self {
            DiagnosticStat::EdgeDensityPct => d.edge_density_pct,
            DiagnosticStat::MutualInformationBits => d.mutual_information_bits,
            DiagnosticStat::ConditionalEntropyBits => d.conditional_entropy_bits,
        })
    }
}

/// Seed-averaged gain of `feature` from `from_order` to `from_order + 1`.
pub fn gain_of(res: &ExperimentResult, feature: FeatureKind, from_order: usize) -> Option<f64> {
    res.gains.iter().find(|g| g.feature == feature && g.from_order == from_order).and_then(|g| match g.gain_pct {
        Outcome::Ok(v) => Some(v),
        Outcome::Failed(_) => None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub report: PathBuf,
    pub gain_pct: f64,
    pub stat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub feature: FeatureKind,
    pub from_order: usize,
    pub stat: DiagnosticStat,
    pub pearson: f64,
    pub points: Vec<Point>,
}

pub fn correlate(
    reports: &[PathBuf],
    feature: FeatureKind,
    from_order: usize,
    stat: DiagnosticStat,
) -> anyhow::Result<Correlation> {
    let mut points = Vec::new();
    for path in reports {
        let res = load_json_report(path)?;
        points.push(point(path, &res, feature, from_order, stat)?);
    }
    if points.len() < 2 {
        bail!("need at least two reports, got {}", points.len());
    }
    let xs: Vec<f64> = points.iter().map(|p| p.gain_pct).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.stat).collect();
    let r = pearson(&xs, &ys)?;
    Ok(Correlation { feature, from_order, stat, pearson: r, points })
}

fn point(
    path: &Path,
    res: &ExperimentResult,
    f: FeatureKind,
    from: usize,
    stat: DiagnosticStat,
) -> anyhow::Result<Point> {
    let gain = gain_of(res, f, from).ok_or_else(|| anyhow!("{}: no {f} gain from order {from}", path.display()))?;
    let value = stat.of(res).ok_or_else(|| anyhow!("{}: no diagnostics block", path.display()))?;
    Ok(Point { report: path.to_path_buf(), gain_pct: gain, stat: value })
}
