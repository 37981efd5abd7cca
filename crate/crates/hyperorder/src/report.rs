//! Report serialization.
//!
//! The CSV form has the fixed header `row,seed,feature,order,value`:
//! - `auc`: test AUC-PR of one seed at one order,
//! - `mean_auc`: the seed average (empty `seed`),
//! - `gain`: percent gain from `order` to `order + 1` between seed averages,
//! - `seed_gain`: the same gain within one seed.
//!
//! Failed cells hold `failed:<reason>` in `value`.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::config::ReportFormat;
use crate::formats;
use crate::pipeline::ExperimentResult;

pub const CSV_HEADER: [&str; 5] = ["row", "seed", "feature", "order", "value"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub row: String,
    pub seed: Option<u64>,
    pub feature: String,
    pub order: usize,
    pub value: String,
}

pub fn csv_rows(res: &ExperimentResult) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for s in &res.seeds {
        for c in &s.cells {
            rows.push(CsvRow {
                row: "auc".into(),
                seed: Some(s.seed),
                feature: c.feature.to_string(),
                order: c.order,
                value: c.auc_pr.to_string(),
            });
        }
    }
    for m in &res.mean_auc_pr {
        rows.push(CsvRow {
            row: "mean_auc".into(),
            seed: None,
            feature: m.feature.to_string(),
            order: m.order,
            value: m.mean_auc_pr.to_string(),
        });
    }
    for g in &res.gains {
        rows.push(CsvRow {
            row: "gain".into(),
            seed: None,
            feature: g.feature.to_string(),
            order: g.from_order,
            value: g.gain_pct.to_string(),
        });
        for s in &g.per_seed {
            rows.push(CsvRow {
                row: "seed_gain".into(),
                seed: Some(s.seed),
                feature: g.feature.to_string(),
                order: g.from_order,
                value: s.gain_pct.to_string(),
            });
        }
    }
    rows
}

pub fn write_csv<W: Write>(w: W, res: &ExperimentResult) -> anyhow::Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in csv_rows(res) {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> anyhow::Result<Vec<CsvRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    anyhow::ensure!(header == CSV_HEADER, "unexpected CSV header {header:?}");
    Ok(rdr.deserialize().collect::<Result<_, _>>()?)
}

pub fn to_string(res: &ExperimentResult, format: ReportFormat) -> anyhow::Result<String> {
    match format {
        ReportFormat::Json => Ok(formats::to_json(res)?),
        ReportFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, res)?;
            Ok(String::from_utf8(buf)?)
        }
    }
}

pub fn emit_report(res: &ExperimentResult, format: ReportFormat, path: &Path) -> anyhow::Result<()> {
    anyhow::ensure!(!res.seeds.is_empty(), "refusing to write an empty result");
    let text = to_string(res, format)?;
    std::fs::write(path, text).with_context(|| format!("writing report {}", path.display()))
}

pub fn load_json_report(path: &Path) -> anyhow::Result<ExperimentResult> {
    formats::load_json(path).with_context(|| format!("reading report {}", path.display()))
}
