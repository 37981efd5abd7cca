//! Acceptance criteria, one PASS/FAIL/SKIP line each.
//!
//! Criterion 2 needs the published email-Enron and NDC-classes files; point
//! `HYPERORDER_DATA_DIR` at a directory holding `email-Enron/` and
//! `NDC-classes/` to run it.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use hyperorder::config::ExperimentConfig;
use hyperorder::formats::{self, DatasetFormat};
use hyperorder::pipeline::{dataset_projections, dataset_summary, run_on_hypergraph, Outcome, Prepared};
use hyperorder::synthetic::{planted_hypergraph, PlantedConfig};
use hyperorder_core::combinatorics::{binomial, for_each_subset};
use hyperorder_core::diagnostics::{bin_weight, conditional_entropy, mutual_information};
use hyperorder_core::features::{mean_feature, neighborhood_feature};
use hyperorder_core::metrics::auc_pr;
use hyperorder_core::projection::{project, project_bruteforce, BRUTE_FORCE_PAIR_BOUND};
use hyperorder_core::seed;
use hyperorder_core::{
    FeatureKind, Hypergraph, JointHistogram, MeanMode, NegativeKind, NodeId, NodeSet, ProjectedGraph,
    ProjectionOptions, RawHyperedges, TripleSample,
};
use rand::seq::{index, SliceRandom};
use rand::Rng;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

/// Random hypergraph with `|V| ≤ 12`, `|E| ≤ 20` raw hyperedges of size 2–6.
fn oracle_instance(rng: &mut impl Rng) -> Hypergraph {
    let n = rng.random_range(6..=12usize);
    let m = rng.random_range(1..=20usize);
    let mut edges: Vec<NodeSet> = Vec::with_capacity(m);
    for _ in 0..m {
        if !edges.is_empty() && rng.random_bool(0.2) {
            let again = edges[rng.random_range(0..edges.len())].clone();
            edges.push(again);
            continue;
        }
        let k = rng.random_range(2..=6usize);
        let mut e: NodeSet = index::sample(rng, n, k).into_iter().map(|v| v as NodeId).collect();
        e.sort_unstable();
        edges.push(e);
    }
    Hypergraph::dedup_and_weight(&RawHyperedges::new(n, edges)).unwrap()
}

fn oracle_suite() -> Vec<Hypergraph> {
    let mut rng = seed::rng(2024);
    (0..200).map(|_| oracle_instance(&mut rng)).collect()
}

fn criterion_1() -> Verdict {
    let suite = oracle_suite();
    let start = Instant::now();
    let mut mismatches = 0;
    for hg in &suite {
        for n in 2..=5 {
            if project(hg, n).unwrap() != project_bruteforce(hg, n, BRUTE_FORCE_PAIR_BOUND).unwrap() {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        mismatches == 0 && elapsed < Duration::from_secs(10),
        format!("200 hypergraphs x orders 2..5, {mismatches} mismatches, {:.2} s (limit 10 s)", elapsed.as_secs_f64()),
    )
}

fn criterion_2() -> Verdict {
    let Some(root) = std::env::var_os("HYPERORDER_DATA_DIR").map(PathBuf::from) else {
        return Verdict::Skip("HYPERORDER_DATA_DIR not set; email-Enron / NDC-classes unavailable".into());
    };
    let expected: [(&str, [u64; 4]); 2] =
        [("email-Enron", [1_491, 1_442, 8_916, 25_938]), ("NDC-classes", [901, 3_727, 21_885, 61_176])];
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, want) in expected {
        let dir = root.join(name);
        if !dir.exists() {
            return Verdict::Skip(format!("{} missing", dir.display()));
        }
        let start = Instant::now();
        let parsed = match formats::load_dataset(&dir, DatasetFormat::Simplicial, formats::DEFAULT_MAX_SIZE) {
            Ok(p) => p,
            Err(e) => return Verdict::Fail(format!("{name}: {e}")),
        };
        let hg = Hypergraph::dedup_and_weight(&parsed.raw).unwrap();
        let graphs = dataset_projections(&hg, 4, &ProjectionOptions::default(), None);
        let s = dataset_summary(&hg, &graphs);
        let got: Vec<u64> = std::iter::once(s.hyperedges as u64)
            .chain(s.projected.iter().map(|o| o.edges.ok().copied().unwrap_or(u64::MAX)))
            .collect();
        let secs = start.elapsed().as_secs_f64();
        ok &= got == want && secs < 60.0;
        lines.push(format!("{name} {got:?} vs {want:?} in {secs:.1} s"));
    }
    check(ok, lines.join("; "))
}

fn criterion_3() -> Verdict {
    let mut checked = 0;
    let mut bad = 0;
    for hg in oracle_suite() {
        for n in 2..=6 {
            let lhs = project(&hg, n).unwrap().total_weight();
            let rhs: u64 = hg.hyperedges().iter().map(|e| e.weight * binomial(e.len() as u64, n as u64) as u64).sum();
            checked += 1;
            bad += usize::from(lhs != rhs);
        }
    }
    check(bad == 0, format!("{checked} (hypergraph, order) pairs, {bad} violations"))
}

/// Means over the materialized facet-pair edges inside `c`: every pair of
/// distinct `(n-1)`-subsets of `c` whose union has `n` nodes, weighted by
/// the union's weight (0 when inactive).
fn materialized_means(pg: &ProjectedGraph, c: &[NodeId]) -> (f64, f64, f64, bool) {
    let n = pg.order();
    let mut facets = Vec::new();
    for_each_subset(c, n - 1, |f| facets.push(f.to_vec()));
    let mut ws = Vec::new();
    for i in 0..facets.len() {
        for j in i + 1..facets.len() {
            let mut u: Vec<NodeId> = facets[i].iter().chain(&facets[j]).copied().collect();
            u.sort_unstable();
            u.dedup();
            if u.len() == n {
                ws.push(pg.weight_of(&u) as f64);
            }
        }
    }
    let m = ws.len() as f64;
    let am = ws.iter().sum::<f64>() / m;
    let missing = ws.contains(&0.0);
    let gm = if missing { 0.0 } else { (ws.iter().map(|w| w.ln()).sum::<f64>() / m).exp() };
    let hm = if missing { 0.0 } else { m / ws.iter().map(|w| 1.0 / w).sum::<f64>() };
    (gm, hm, am, missing)
}

fn criterion_4() -> Verdict {
    let mut rng = seed::rng(77);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()));
    let mut failures: Vec<String> = Vec::new();
    let mut all_positive = 0;
    let mut with_missing = 0;
    for instance in 0..1000 {
        let hg = oracle_instance(&mut rng);
        let n = rng.random_range(2..=4usize);
        let pg = project(&hg, n).unwrap();
        // half the candidates come from inside a hyperedge so that fully
        // supported candidates are common
        let big: Vec<&NodeSet> = hg.hyperedges().iter().map(|e| &e.nodes).filter(|e| e.len() >= n.max(3)).collect();
        let c: NodeSet = if !big.is_empty() && rng.random_bool(0.5) {
            let e = big[rng.random_range(0..big.len())];
            let k = rng.random_range(n.max(3)..=e.len());
            let mut c: NodeSet = index::sample(&mut rng, e.len(), k).into_iter().map(|i| e[i]).collect();
            c.sort_unstable();
            c
        } else {
            let k = rng.random_range(n.max(3)..=6usize.min(hg.node_count()));
            let mut c: NodeSet = index::sample(&mut rng, hg.node_count(), k).into_iter().map(|v| v as NodeId).collect();
            c.sort_unstable();
            c
        };
        let f = |kind| mean_feature(&pg, &c, kind, MeanMode::AllPairs).unwrap();
        let (gm, hm, am) = (f(FeatureKind::GM), f(FeatureKind::HM), f(FeatureKind::AM));
        let (ogm, ohm, oam, missing) = materialized_means(&pg, &c);
        if !(close(gm, ogm) && close(hm, ohm) && close(am, oam)) {
            failures.push(format!("#{instance} replication: ({gm},{hm},{am}) vs ({ogm},{ohm},{oam})"));
        }
        if missing {
            with_missing += 1;
            if gm != 0.0 {
                failures.push(format!("#{instance} GM={gm} with a missing inner pair"));
            }
        } else {
            all_positive += 1;
            if !(hm <= gm * (1.0 + 1e-12) && gm <= am * (1.0 + 1e-12)) {
                failures.push(format!("#{instance} ordering HM={hm} GM={gm} AM={am}"));
            }
        }
        let jc = neighborhood_feature(&pg, &c, FeatureKind::JC).unwrap();
        if !(0.0..=1.0).contains(&jc) {
            failures.push(format!("#{instance} JC={jc}"));
        }
        let mut shuffled = c.clone();
        shuffled.shuffle(&mut rng);
        for kind in FeatureKind::ALL {
            let a = hyperorder_core::features::feature(&pg, &c, kind, &Default::default()).unwrap();
            let b = hyperorder_core::features::feature(&pg, &shuffled, kind, &Default::default()).unwrap();
            if a != b {
                failures.push(format!("#{instance} {kind} not permutation invariant: {a} vs {b}"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "1000 instances ({all_positive} fully supported, {with_missing} with a missing pair), {} violations{}",
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_5() -> Verdict {
    let cases: [(&[f64], &[u8], f64); 3] = [
        (&[0.9, 0.8, 0.2], &[1, 1, 0], 1.0),
        (&[0.9, 0.8, 0.2], &[0, 1, 1], 7.0 / 12.0),
        // tied pair forms one threshold: (0.5 recall, 0.5 precision) then (1, 2/3)
        (&[0.5, 0.5, 0.1], &[1, 0, 1], 7.0 / 12.0),
    ];
    let mut worst: f64 = 0.0;
    for (s, l, want) in cases {
        worst = worst.max((auc_pr(s, l).unwrap().auc_pr - want).abs());
    }
    let mut rng = seed::rng(31);
    let labels: Vec<u8> = (0..1100).map(|i| u8::from(i < 100)).collect();
    let mean = (0..1000)
        .map(|_| {
            let scores: Vec<f64> = (0..labels.len()).map(|_| rng.random()).collect();
            auc_pr(&scores, &labels).unwrap().auc_pr
        })
        .sum::<f64>()
        / 1000.0;
    let prevalence = 1.0 / 11.0;
    check(
        worst <= 1e-12 && (mean - prevalence).abs() <= 0.02,
        format!(
            "hand examples max error {worst:.1e}; random scorer mean {mean:.4} vs prevalence {prevalence:.4} (±0.02)"
        ),
    )
}

fn criterion_6() -> Verdict {
    let mut rng = seed::rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let cells = rng.random_range(1..60);
        let h = JointHistogram::from_cells((0..cells).map(|_| {
            let w2 = [rng.random_range(0..10u8), rng.random_range(0..10u8), rng.random_range(0..10u8)];
            (TripleSample { w2, w3: rng.random_range(0..10u8) }, rng.random_range(1..10_000u64))
        }))
        .unwrap();
        worst = worst.max((mutual_information(&h) + conditional_entropy(&h) - h.entropy_w3()).abs());
    }

    let mut h = JointHistogram::new();
    for _ in 0..100_000 {
        let mut w2 = [rng.random_range(0..5u8), rng.random_range(0..5u8), rng.random_range(0..3u8)];
        w2.sort_unstable();
        let w3 = if rng.random_bool(0.7) { 0 } else { rng.random_range(1..4u8) };
        h.add(TripleSample { w2, w3 });
    }
    let mi = mutual_information(&h);

    let bins_ok = (0u64..=1 << 15).all(|w| bin_weight(w) == ((w as f64 + 1.0).log2().ceil() as u8).min(9));
    check(
        worst <= 1e-12 && mi <= 0.05 && bins_ok,
        format!("chain identity max error {worst:.1e}; independent I = {mi:.4} bits (≤ 0.05); binning formula ok: {bins_ok}"),
    )
}

fn planted() -> Hypergraph {
    Hypergraph::dedup_and_weight(&planted_hypergraph(&PlantedConfig::default(), 0)).unwrap()
}

fn planted_config(neg_type: NegativeKind, seeds: Vec<u64>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig {
        dataset: "planted".into(),
        target_size: 4,
        max_order: 3,
        features: vec![FeatureKind::CN, FeatureKind::AA, FeatureKind::AM],
        neg_type,
        ratio: 10,
        seeds,
        ..Default::default()
    };
    cfg.diagnostics.enabled = false;
    cfg
}

fn auc_of(r: &hyperorder::pipeline::SeedResult, f: FeatureKind, order: usize) -> f64 {
    r.cells.iter().find(|c| c.feature == f && c.order == order).and_then(|c| c.auc_pr.ok().copied()).unwrap_or(f64::NAN)
}

fn criterion_7() -> Verdict {
    let hg = planted();
    let cfg = planted_config(NegativeKind::Clique, (0..10).collect());
    let prepared = Prepared::new(&cfg, &hg);
    let mut wins = [0usize; 2];
    let mut rows = Vec::new();
    for s in 0..10 {
        let r = prepared.run_seed(s);
        for (i, f) in [FeatureKind::CN, FeatureKind::AA].into_iter().enumerate() {
            wins[i] += usize::from(auc_of(&r, f, 3) > auc_of(&r, f, 2));
        }
        rows.push(format!(
            "s{s}: CN {:.4}->{:.4} AA {:.4}->{:.4} (AM {:.4}->{:.4})",
            auc_of(&r, FeatureKind::CN, 2),
            auc_of(&r, FeatureKind::CN, 3),
            auc_of(&r, FeatureKind::AA, 2),
            auc_of(&r, FeatureKind::AA, 3),
            auc_of(&r, FeatureKind::AM, 2),
            auc_of(&r, FeatureKind::AM, 3),
        ));
    }
    for row in &rows {
        println!("        {row}");
    }
    check(
        wins[0] >= 8 && wins[1] >= 8,
        format!("order 3 beats order 2 in {}/10 seeds for CN and {}/10 for AA (need 8)", wins[0], wins[1]),
    )
}

fn criterion_8() -> Verdict {
    let hg = planted();
    let mut wins = 0;
    let mut rows = Vec::new();
    for g in 0..10u64 {
        let seeds: Vec<u64> = (3 * g..3 * g + 3).collect();
        let gain = |kind| {
            let cfg = ExperimentConfig { features: vec![FeatureKind::CN], ..planted_config(kind, seeds.clone()) };
            let res = run_on_hypergraph(&cfg, &hg, 0.0, Instant::now()).unwrap();
            match &res.gains[0].gain_pct {
                Outcome::Ok(v) => *v,
                Outcome::Failed(_) => f64::NAN,
            }
        };
        let (clique, star) = (gain(NegativeKind::Clique), gain(NegativeKind::Star));
        wins += usize::from(clique >= star);
        rows.push(format!("g{g}: clique {clique:.3}% star {star:.3}%"));
    }
    println!("        {}", rows.join(", "));
    check(wins >= 7, format!("clique gain ≥ star gain for CN in {wins}/10 seed groups (need 7)"))
}

fn without_timings(path: &Path) -> String {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timings");
    serde_json::to_string_pretty(&v).unwrap()
}

fn criterion_9() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("planted.txt");
    let bin = env!("CARGO_BIN_EXE_hyperorder");
    let status = Command::new(bin).args(["synth", "--seed", "3", "--out"]).arg(&data).status().unwrap();
    assert!(status.success());
    let run = |name: &str, fmt: &str| {
        let out = dir.path().join(name);
        let status = Command::new(bin)
            .args([
                "run",
                "--format",
                "edge-list",
                "--seeds",
                "0..3",
                "--diagnostic-samples",
                "20000",
                "--out-format",
                fmt,
            ])
            .arg("--dataset")
            .arg(&data)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        out
    };
    let (a, b) = (run("a.json", "json"), run("b.json", "json"));
    let json_same = without_timings(&a) == without_timings(&b);
    let (c, d) = (run("a.csv", "csv"), run("b.csv", "csv"));
    let csv_same = std::fs::read(&c).unwrap() == std::fs::read(&d).unwrap();
    check(json_same && csv_same, format!("JSON identical without timings: {json_same}; CSV byte-identical: {csv_same}"))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("projection oracle equivalence", criterion_1),
        ("published dataset statistics", criterion_2),
        ("weight conservation", criterion_3),
        ("feature properties", criterion_4),
        ("metric correctness", criterion_5),
        ("diagnostics identities", criterion_6),
        ("order-3 gain for CN and AA on planted data", criterion_7),
        ("clique vs star gain for CN", criterion_8),
        ("run determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Verdict::Fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Skip(d) => ("SKIP", d),
        };
        println!("{tag} [{}] {name}: {detail}", i + 1);
    }
    println!("acceptance: {} of {} criteria failed", failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
