//! Dataset readers and the on-disk formats of intermediate artifacts.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hyperorder_core::features::FeatureMatrix;
use hyperorder_core::{Matrix, NodeId, NodeSet, ProjectedGraph, RawHyperedges};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Hyperedges larger than this are dropped unless configured otherwise.
pub const DEFAULT_MAX_SIZE: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed dataset: {0}")]
    MalformedDataset(String),
    #[error("line {line}: cannot parse {token:?} as a node id")]
    Parse { line: usize, token: String },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("malformed projection cache: {0}")]
    MalformedCache(String),
    #[error("malformed feature table: {0}")]
    MalformedTable(String),
    #[error(transparent)]
    Core(#[from] hyperorder_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl FormatError {
    fn io(path: &Path) -> impl FnOnce(io::Error) -> FormatError + '_ {
        move |source| FormatError::Io { path: path.to_path_buf(), source }
    }
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetFormat {
    /// `<name>-nverts.txt` + `<name>-simplices.txt`.
    #[default]
    Simplicial,
    /// One hyperedge per line.
    EdgeList,
}

/// Raw hyperedges over dense ids, plus the original id of every dense id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDataset {
    pub raw: RawHyperedges,
    pub original_ids: Vec<u64>,
}

fn tokens<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader.lines().enumerate().flat_map(|(i, line)| {
        let items: Vec<Result<(usize, String)>> = match line {
            Ok(l) => l.split_whitespace().map(|t| Ok((i + 1, t.to_string()))).collect(),
            Err(e) => vec![Err(FormatError::Io { path: PathBuf::from("<stream>"), source: e })],
        };
        items
    })
}

fn parse_id(line: usize, token: &str) -> Result<u64> {
    u64::from_str(token).map_err(|_| FormatError::Parse { line, token: token.to_string() })
}

/// Keeps sets with `2 ..= max_size` nodes and renumbers the surviving ids
/// densely in increasing order of their original value.
fn remap(sets: Vec<Vec<u64>>, max_size: usize) -> ParsedDataset {
    let kept: Vec<Vec<u64>> = sets.into_iter().filter(|s| s.len() >= 2 && s.len() <= max_size).collect();
    let mut ids: Vec<u64> = kept.iter().flatten().copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let edges = kept
        .iter()
        .map(|s| {
            let mut e: NodeSet =
                s.iter().map(|v| ids.binary_search(v).expect("id collected above") as NodeId).collect();
            e.sort_unstable();
            e
        })
        .collect();
    ParsedDataset { raw: RawHyperedges::new(ids.len(), edges), original_ids: ids }
}

/// Reads the published simplicial format: cardinalities in `nverts`, the
/// concatenated members in `simplices`. A node repeated inside one simplex
/// counts once.
pub fn parse_simplicial_dataset<A: BufRead, B: BufRead>(
    nverts: A,
    simplices: B,
    max_size: usize,
) -> Result<ParsedDataset> {
    let sizes: Vec<usize> = tokens(nverts)
        .map(|t| {
            let (line, tok) = t?;
            usize::from_str(&tok).map_err(|_| FormatError::Parse { line, token: tok })
        })
        .collect::<Result<_>>()?;
    let ids: Vec<u64> =
        tokens(simplices).map(|t| t.and_then(|(line, tok)| parse_id(line, &tok))).collect::<Result<_>>()?;
    let expected: usize = sizes.iter().sum();
    if expected != ids.len() {
        return Err(FormatError::MalformedDataset(format!(
            "nverts lists {expected} vertices but simplices holds {}",
            ids.len()
        )));
    }
    let mut sets = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for k in sizes {
        let mut s = ids[at..at + k].to_vec();
        at += k;
        s.sort_unstable();
        s.dedup();
        sets.push(s);
    }
    Ok(remap(sets, max_size))
}

/// One hyperedge per line; `#` starts a comment line.
pub fn parse_edge_list<R: BufRead>(reader: R, max_size: usize) -> Result<ParsedDataset> {
    let mut sets = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| FormatError::Io { path: PathBuf::from("<stream>"), source: e })?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut s: Vec<u64> = body.split_whitespace().map(|t| parse_id(i + 1, t)).collect::<Result<_>>()?;
        s.sort_unstable();
        if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
            return Err(FormatError::MalformedLine { line: i + 1, reason: format!("node {} appears twice", w[0]) });
        }
        sets.push(s);
    }
    Ok(remap(sets, max_size))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(FormatError::io(path))
}

/// Locates `<name>-nverts.txt` and `<name>-simplices.txt` given either the
/// directory holding them or the `<dir>/<name>` prefix.
pub fn simplicial_files(path: &Path) -> Result<(PathBuf, PathBuf)> {
    let pair = |prefix: &Path| {
        let s = prefix.as_os_str().to_string_lossy();
        (PathBuf::from(format!("{s}-nverts.txt")), PathBuf::from(format!("{s}-simplices.txt")))
    };
    if path.is_dir() {
        if let Some(name) = path.file_name() {
            let (a, b) = pair(&path.join(name));
            if a.is_file() && b.is_file() {
                return Ok((a, b));
            }
        }
        let entries = std::fs::read_dir(path).map_err(FormatError::io(path))?;
        let mut found: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.to_string_lossy().ends_with("-nverts.txt"))
            .collect();
        found.sort();
        return match found.as_slice() {
            [one] => {
                let s = one.to_string_lossy();
                Ok(pair(Path::new(&s[..s.len() - "-nverts.txt".len()])))
            }
            [] => Err(FormatError::MalformedDataset(format!("no *-nverts.txt file in {}", path.display()))),
            _ => Err(FormatError::MalformedDataset(format!("several *-nverts.txt files in {}", path.display()))),
        };
    }
    Ok(pair(path))
}

pub fn load_dataset(path: &Path, format: DatasetFormat, max_size: usize) -> Result<ParsedDataset> {
    match format {
        DatasetFormat::Simplicial => {
            let (nverts, simplices) = simplicial_files(path)?;
            parse_simplicial_dataset(open(&nverts)?, open(&simplices)?, max_size)
        }
        DatasetFormat::EdgeList => parse_edge_list(open(path)?, max_size),
    }
}

/// Short dataset name used in cache file names.
pub fn dataset_stem(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "dataset".into());
    name.strip_suffix(".txt").unwrap_or(&name).to_string()
}

pub fn write_edge_list<W: Write>(mut w: W, raw: &RawHyperedges) -> io::Result<()> {
    for e in &raw.edges {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()
}

/// Writes `n <order> <subset-count>` followed by one `ids… weight` line per
/// active subset, in stored order.
pub fn write_projection<W: Write>(w: W, pg: &ProjectedGraph) -> io::Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "n {} {}", pg.order(), pg.subset_count())?;
    for (s, weight) in pg.iter() {
        for v in s {
            write!(w, "{v} ")?;
        }
        writeln!(w, "{weight}")?;
    }
    w.flush()
}

pub fn read_projection<R: Read>(r: R) -> Result<ProjectedGraph> {
    let mut lines = BufReader::new(r).lines();
    let bad = |m: String| FormatError::MalformedCache(m);
    let header = lines
        .next()
        .ok_or_else(|| bad("empty file".into()))?
        .map_err(|e| FormatError::Io { path: "<cache>".into(), source: e })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (order, count) = match parts.as_slice() {
        ["n", o, c] => (
            o.parse::<usize>().map_err(|_| bad(format!("bad order {o:?}")))?,
            c.parse::<usize>().map_err(|_| bad(format!("bad count {c:?}")))?,
        ),
        _ => return Err(bad(format!("bad header {header:?}"))),
    };
    let mut entries = Vec::with_capacity(count);
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| FormatError::Io { path: "<cache>".into(), source: e })?;
        if line.trim().is_empty() {
            continue;
        }
        let nums: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|_| bad(format!("line {}: bad number {t:?}", i + 2))))
            .collect::<Result<_>>()?;
        if nums.len() != order + 1 {
            return Err(bad(format!("line {}: expected {} numbers, got {}", i + 2, order + 1, nums.len())));
        }
        let ids = nums[..order]
            .iter()
            .map(|&v| NodeId::try_from(v).map_err(|_| bad(format!("line {}: node id {v} too large", i + 2))))
            .collect::<Result<NodeSet>>()?;
        entries.push((ids, nums[order]));
    }
    if entries.len() != count {
        return Err(bad(format!("header announces {count} subsets, found {}", entries.len())));
    }
    Ok(ProjectedGraph::from_weighted_subsets(order, entries)?)
}

pub fn save_projection(path: &Path, pg: &ProjectedGraph) -> Result<()> {
    let file = File::create(path).map_err(FormatError::io(path))?;
    write_projection(file, pg).map_err(FormatError::io(path))
}

pub fn load_projection(path: &Path) -> Result<ProjectedGraph> {
    read_projection(File::open(path).map_err(FormatError::io(path))?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?).map_err(FormatError::io(path))
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(open(path)?)?)
}

/// `label,x2,x3,…` with one row per candidate.
pub fn write_feature_csv<W: Write>(w: W, fm: &FeatureMatrix) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["label".to_string()];
    header.extend(fm.column_names.iter().cloned());
    out.write_record(&header)?;
    for (i, label) in fm.labels.iter().enumerate() {
        let mut rec = vec![label.to_string()];
        rec.extend(fm.values.row(i).iter().map(|v| v.to_string()));
        out.write_record(&rec)?;
    }
    out.flush().map_err(FormatError::io(Path::new("<csv>")))?;
    Ok(())
}

/// Labels and values of a table written by [`write_feature_csv`].
pub fn read_feature_csv<R: Read>(r: R) -> Result<(Vec<String>, Vec<u8>, Matrix)> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.first().map(String::as_str) != Some("label") {
        return Err(FormatError::MalformedTable("first column must be `label`".into()));
    }
    let cols = header.len() - 1;
    let mut labels = Vec::new();
    let mut data = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let label: u8 = rec[0].parse().map_err(|_| FormatError::MalformedTable(format!("bad label {:?}", &rec[0])))?;
        labels.push(label);
        for v in rec.iter().skip(1) {
            data.push(v.parse::<f64>().map_err(|_| FormatError::MalformedTable(format!("bad value {v:?}")))?);
        }
    }
    let m = Matrix::from_row_major(labels.len(), cols, data)?;
    Ok((header[1..].to_vec(), labels, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplicial_example() {
        let d = parse_simplicial_dataset("2\n3\n".as_bytes(), "1\n2\n1\n2\n3\n".as_bytes(), 10).unwrap();
        assert_eq!(d.raw.edges, vec![vec![0, 1], vec![0, 1, 2]]);
        assert_eq!(d.original_ids, vec![1, 2, 3]);
        assert_eq!(d.raw.node_count, 3);
    }

    #[test]
    fn oversized_simplices_are_dropped() {
        let ids: String = (1..=11).map(|i| format!("{i}\n")).collect();
        let d = parse_simplicial_dataset("11".as_bytes(), ids.as_bytes(), 10).unwrap();
        assert!(d.raw.is_empty());
        assert_eq!(d.raw.node_count, 0);
    }

    #[test]
    fn length_mismatch() {
        let err = parse_simplicial_dataset("3".as_bytes(), "1\n2\n".as_bytes(), 10).unwrap_err();
        assert!(matches!(err, FormatError::MalformedDataset(_)));
    }

    #[test]
    fn non_integer_token() {
        let err = parse_simplicial_dataset("2".as_bytes(), "1\nx\n".as_bytes(), 10).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }));
        assert!(matches!(parse_edge_list("1 -2".as_bytes(), 10), Err(FormatError::Parse { line: 1, .. })));
    }

    #[test]
    fn singletons_and_repeats_inside_a_simplex() {
        let d = parse_simplicial_dataset("1 3 2".as_bytes(), "9 4 4 7 7 4".as_bytes(), 10).unwrap();
        // {9} dropped, {4,7} kept twice; 9 never survives so ids are 4 and 7
        assert_eq!(d.raw.edges, vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(d.original_ids, vec![4, 7]);
    }

    #[test]
    fn edge_lists() {
        let d = parse_edge_list("0 1 2\n0 1\n".as_bytes(), 10).unwrap();
        assert_eq!(d.raw.edges, vec![vec![0, 1, 2], vec![0, 1]]);
        let d = parse_edge_list("# c\n3 4\n".as_bytes(), 10).unwrap();
        assert_eq!(d.raw.edges, vec![vec![0, 1]]);
        assert_eq!(d.original_ids, vec![3, 4]);
        let err = parse_edge_list("1 1 2".as_bytes(), 10).unwrap_err();
        assert!(matches!(err, FormatError::MalformedLine { line: 1, .. }));
        let d = parse_edge_list("\n  \n5\n2 1\n".as_bytes(), 10).unwrap();
        assert_eq!(d.raw.edges, vec![vec![0, 1]]);
    }

    #[test]
    fn stems() {
        assert_eq!(dataset_stem(Path::new("data/email-Enron")), "email-Enron");
        assert_eq!(dataset_stem(Path::new("planted.txt")), "planted");
    }

    #[test]
    fn bad_cache_headers() {
        assert!(read_projection("".as_bytes()).is_err());
        assert!(read_projection("m 2 0\n".as_bytes()).is_err());
        assert!(read_projection("n 2 2\n0 1 1\n".as_bytes()).is_err());
        assert!(read_projection("n 2 1\n0 1\n".as_bytes()).is_err());
        assert!(read_projection("n 2 1\n1 0 3\n".as_bytes()).is_err());
        let pg = read_projection("n 2 1\n0 1 3\n".as_bytes()).unwrap();
        assert_eq!(pg.weight_of(&[0, 1]), 3);
    }
}
