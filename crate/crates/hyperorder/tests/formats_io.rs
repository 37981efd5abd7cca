use std::fs;

use hyperorder::formats::{self, DatasetFormat};
use hyperorder_core::candidates::build_candidate_set;
use hyperorder_core::classifier::train_logreg;
use hyperorder_core::features::feature_matrix;
use hyperorder_core::projection::{expand, project};
use hyperorder_core::{
    CandidateSet, FeatureKind, FeatureOptions, Hypergraph, LogRegConfig, LogRegModel, NegativeKind, ProjectedGraph,
    RawHyperedges,
};

fn sample_graph() -> Hypergraph {
    let edges = vec![vec![0, 1, 2, 3], vec![0, 1, 2], vec![0, 1, 2], vec![2, 4], vec![1, 3, 4], vec![3, 4, 5, 6]];
    Hypergraph::dedup_and_weight(&RawHyperedges::new(7, edges)).unwrap()
}

#[test]
fn simplicial_directory_and_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("toy");
    fs::create_dir(&ds).unwrap();
    fs::write(ds.join("toy-nverts.txt"), "2\n3\n1\n").unwrap();
    fs::write(ds.join("toy-simplices.txt"), "10\n20\n10\n20\n30\n40\n").unwrap();
    fs::write(ds.join("toy-times.txt"), "1\n2\n3\n").unwrap();

    let by_dir = formats::load_dataset(&ds, DatasetFormat::Simplicial, 10).unwrap();
    let by_prefix = formats::load_dataset(&ds.join("toy"), DatasetFormat::Simplicial, 10).unwrap();
    assert_eq!(by_dir, by_prefix);
    assert_eq!(by_dir.raw.edges, vec![vec![0, 1], vec![0, 1, 2]]);
    assert_eq!(by_dir.original_ids, vec![10, 20, 30]);

    // a directory whose name differs from the file prefix
    let other = dir.path().join("renamed");
    fs::rename(&ds, &other).unwrap();
    assert_eq!(formats::load_dataset(&other, DatasetFormat::Simplicial, 10).unwrap(), by_dir);
}

#[test]
fn missing_files_are_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let err = formats::load_dataset(&dir.path().join("nope"), DatasetFormat::Simplicial, 10).unwrap_err();
    assert!(matches!(err, formats::FormatError::Io { .. }), "{err}");
    let err = formats::load_dataset(dir.path(), DatasetFormat::Simplicial, 10).unwrap_err();
    assert!(matches!(err, formats::FormatError::MalformedDataset(_)), "{err}");
}

#[test]
fn edge_list_round_trip() {
    let hg = sample_graph();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    formats::write_edge_list(fs::File::create(&path).unwrap(), &hg.to_raw()).unwrap();
    let back = formats::load_dataset(&path, DatasetFormat::EdgeList, 10).unwrap();
    assert_eq!(Hypergraph::dedup_and_weight(&back.raw).unwrap(), hg);
}

#[test]
fn projection_cache_reloads_exactly() {
    let hg = sample_graph();
    let dir = tempfile::tempdir().unwrap();
    for n in 2..=4 {
        let pg = project(&hg, n).unwrap();
        let path = dir.path().join(format!("toy-n{n}.pg"));
        formats::save_projection(&path, &pg).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(&format!("n {n} {}\n", pg.subset_count())));
        let back: ProjectedGraph = formats::load_projection(&path).unwrap();
        assert_eq!(back, pg);
        let mut again = Vec::new();
        formats::write_projection(&mut again, &back).unwrap();
        assert_eq!(again, text.as_bytes());
    }
    let empty = ProjectedGraph::empty(5);
    let mut buf = Vec::new();
    formats::write_projection(&mut buf, &empty).unwrap();
    assert_eq!(buf, b"n 5 0\n");
    assert_eq!(formats::read_projection(buf.as_slice()).unwrap(), empty);
}

#[test]
fn candidate_set_json() {
    let hg = sample_graph();
    let cs = build_candidate_set(
        vec![vec![0, 1, 2, 3]],
        vec![vec![0, 1, 2, 4], vec![1, 2, 3, 4]],
        NegativeKind::Clique,
        2,
        9,
        &hg.node_set_index(),
    )
    .unwrap();
    let text = formats::to_json(&cs).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["target_size", "neg_type", "multiplier", "seed", "positives", "negatives"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["neg_type"], "clique");
    assert_eq!(v["positives"], serde_json::json!([[0, 1, 2, 3]]));
    let back: CandidateSet = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cs);
}

#[test]
fn feature_table_and_model() {
    let hg = sample_graph();
    let exp = expand(&hg, 3).unwrap();
    let cs = build_candidate_set(
        vec![vec![0, 1, 2, 3], vec![3, 4, 5, 6]],
        vec![vec![0, 1, 2, 4], vec![1, 2, 3, 4], vec![0, 2, 3, 4]],
        NegativeKind::Clique,
        1,
        0,
        &hg.node_set_index(),
    )
    .unwrap();
    let fm = feature_matrix(&exp, &cs, FeatureKind::AM, &FeatureOptions::default()).unwrap();
    let mut buf = Vec::new();
    formats::write_feature_csv(&mut buf, &fm).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("label,x2,x3\n"));
    let (names, labels, values) = formats::read_feature_csv(buf.as_slice()).unwrap();
    assert_eq!(names, fm.column_names);
    assert_eq!(labels, fm.labels);
    assert_eq!(values, fm.values);

    let model = train_logreg(&fm.values, &fm.labels, &LogRegConfig::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    formats::save_json(&path, &model).unwrap();
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["weights", "bias", "l2_strength", "standardization", "converged"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let back: LogRegModel = formats::load_json(&path).unwrap();
    assert_eq!(back, model);
}
