//! Corpus files: canonical edge lists, TUDataset flat files and DOT export.
//!
//! An edge-list file holds one graph: a header line `N M`, then `M` lines
//! `u v` with `u < v` in lexicographic order. A corpus directory holds one
//! such file per graph plus a `manifest.json` ([`CorpusManifest`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const EDGE_LIST_FORMAT: &str = "edge-list";

/// Canonical text of one graph.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(8 + 12 * g.edge_count());
    let _ = writeln!(out, "{} {}", g.node_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn parse_usize(token: Option<&str>, path: &Path, line: usize, what: &str) -> Result<usize> {
    let token = token.ok_or_else(|| Error::format(path, line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| Error::format(path, line, format!("{what} `{token}` is not a non-negative integer")))
}

/// Parses the text produced by [`format_edge_list`]. `path` only labels
/// errors.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::format(path, 1, "missing `N M` header"))?;
    let mut tokens = header.split_whitespace();
    let n = parse_usize(tokens.next(), path, hline + 1, "node count")?;
    let m = parse_usize(tokens.next(), path, hline + 1, "edge count")?;
    if tokens.next().is_some() {
        return Err(Error::format(path, hline + 1, "header must be `N M`"));
    }
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let mut tokens = line.split_whitespace();
        let u = parse_usize(tokens.next(), path, i + 1, "endpoint")?;
        let v = parse_usize(tokens.next(), path, i + 1, "endpoint")?;
        if tokens.next().is_some() {
            return Err(Error::format(path, i + 1, "edge line must be `u v`"));
        }
        if u >= n || v >= n {
            return Err(Error::format(path, i + 1, format!("node {} out of range for N = {n}", u.max(v))));
        }
        if u == v {
            return Err(Error::format(path, i + 1, format!("self-loop on node {u}")));
        }
        edges.push((u, v));
        if edges.len() > m {
            return Err(Error::format(path, i + 1, format!("more than the declared {m} edges")));
        }
    }
    if edges.len() != m {
        return Err(Error::format(
            path,
            hline + 1,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges).map_err(|e| Error::format(path, 0, e.to_string()))
}

pub fn write_edge_list(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_edge_list(g)).map_err(|e| Error::io(path, e))
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}

/// Size of one graph in a corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub file: String,
    pub n: usize,
    pub m: usize,
}

/// Index of a corpus directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub name: String,
    pub graph_count: usize,
    pub format: String,
    pub graphs: Vec<GraphSummary>,
    /// SHA-256 (hex) over the graph files in order.
    pub checksum: String,
    /// Free-form record of how the corpus was produced (seed, config).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<serde_json::Value>,
}

fn graph_file_name(index: usize) -> String {
    format!("graph_{index:05}.txt")
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl CorpusManifest {
    /// Manifest describing `graphs` as they would be written by
    /// [`write_corpus`].
    pub fn describe(name: &str, graphs: &[Graph]) -> Self {
        let mut hasher = Sha256::new();
        let mut summaries = Vec::with_capacity(graphs.len());
        for (i, g) in graphs.iter().enumerate() {
            hasher.update(format_edge_list(g).as_bytes());
            summaries.push(GraphSummary {
                file: graph_file_name(i),
                n: g.node_count(),
                m: g.edge_count(),
            });
        }
        CorpusManifest {
            name: name.to_string(),
            graph_count: graphs.len(),
            format: EDGE_LIST_FORMAT.to_string(),
            graphs: summaries,
            checksum: hex(&hasher.finalize()),
            generator: None,
        }
    }

    pub fn with_generator(mut self, generator: serde_json::Value) -> Self {
        self.generator = Some(generator);
        self
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::format(path, e.line(), e.to_string()))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Writes every graph as `graph_NNNNN.txt` under `dir` (created if needed)
/// together with the manifest, and returns the manifest.
pub fn write_corpus(dir: impl AsRef<Path>, manifest: &CorpusManifest, graphs: &[Graph]) -> Result<()> {
    let dir = dir.as_ref();
    if manifest.graph_count != graphs.len() {
        return Err(Error::InvalidInput(format!(
            "manifest lists {} graphs, corpus has {}",
            manifest.graph_count,
            graphs.len()
        )));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (summary, g) in manifest.graphs.iter().zip(graphs) {
        write_edge_list(dir.join(&summary.file), g)?;
    }
    manifest.write(dir.join(MANIFEST_FILE))
}

/// Reads a corpus directory. With a manifest, its files are read in order
/// and checked against the recorded sizes; without one, every `*.txt` file
/// is read in file-name order.
pub fn read_corpus(dir: impl AsRef<Path>) -> Result<(Vec<Graph>, Option<CorpusManifest>)> {
    let dir = dir.as_ref();
    let manifest_path = dir.join(MANIFEST_FILE);
    if manifest_path.is_file() {
        let manifest = CorpusManifest::read(&manifest_path)?;
        if manifest.graph_count != manifest.graphs.len() {
            return Err(Error::format(&manifest_path, 0, "graph_count does not match the graph list"));
        }
        let mut graphs = Vec::with_capacity(manifest.graph_count);
        for s in &manifest.graphs {
            let path = dir.join(&s.file);
            let g = read_edge_list(&path)?;
            if (g.node_count(), g.edge_count()) != (s.n, s.m) {
                return Err(Error::format(
                    &path,
                    1,
                    format!("manifest records ({}, {}), file holds ({}, {})", s.n, s.m, g.node_count(), g.edge_count()),
                ));
            }
            graphs.push(g);
        }
        return Ok((graphs, Some(manifest)));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::InvalidInput(format!("{} contains no edge-list files", dir.display())));
    }
    let graphs = files.iter().map(read_edge_list).collect::<Result<_>>()?;
    Ok((graphs, None))
}

fn find_tudataset_prefix(dir: &Path) -> Result<String> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut prefixes: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str().and_then(|s| s.strip_suffix("_A.txt")).map(str::to_string))
        .filter(|p| dir.join(format!("{p}_graph_indicator.txt")).is_file())
        .collect();
    prefixes.sort();
    match prefixes.len() {
        1 => Ok(prefixes.remove(0)),
        0 => Err(Error::InvalidInput(format!(
            "{} has no matching DS_A.txt / DS_graph_indicator.txt pair",
            dir.display()
        ))),
        _ => Err(Error::InvalidInput(format!(
            "{} holds several datasets: {}",
            dir.display(),
            prefixes.join(", ")
        ))),
    }
}

fn parse_id(token: &str, path: &Path, line: usize) -> Result<usize> {
    token
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::format(path, line, format!("`{}` is not an integer id", token.trim())))
}

/// Reads a TUDataset directory (`DS_A.txt` plus `DS_graph_indicator.txt`).
///
/// Node ids are remapped per graph to `0..n_g` in file order; both
/// directions of an edge, repeated rows and self-loops collapse into one
/// simple undirected graph. Label and attribute files are ignored.
pub fn read_tudataset(dir: impl AsRef<Path>) -> Result<Vec<Graph>> {
    let dir = dir.as_ref();
    let prefix = find_tudataset_prefix(dir)?;
    let ind_path = dir.join(format!("{prefix}_graph_indicator.txt"));
    let a_path = dir.join(format!("{prefix}_A.txt"));

    let text = fs::read_to_string(&ind_path).map_err(|e| Error::io(&ind_path, e))?;
    let mut node_graph = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        node_graph.push(parse_id(line, &ind_path, i + 1)?);
    }
    let ids: BTreeSet<usize> = node_graph.iter().copied().collect();
    let graph_index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
    let mut sizes = vec![0usize; ids.len()];
    let mut local = Vec::with_capacity(node_graph.len());
    for id in &mut node_graph {
        let g = graph_index[id];
        local.push(sizes[g]);
        sizes[g] += 1;
        *id = g;
    }

    let text = fs::read_to_string(&a_path).map_err(|e| Error::io(&a_path, e))?;
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); sizes.len()];
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::format(&a_path, i + 1, "expected `u, v`"));
        };
        let (u, v) = (parse_id(a, &a_path, i + 1)?, parse_id(b, &a_path, i + 1)?);
        for x in [u, v] {
            if x == 0 || x > node_graph.len() {
                return Err(Error::format(
                    &a_path,
                    i + 1,
                    format!("node {x} is not listed in the graph indicator ({} nodes)", node_graph.len()),
                ));
            }
        }
        let (gu, gv) = (node_graph[u - 1], node_graph[v - 1]);
        if gu != gv {
            return Err(Error::format(
                &a_path,
                i + 1,
                format!("edge ({u}, {v}) joins nodes of different graphs"),
            ));
        }
        edges[gu].push((local[u - 1], local[v - 1]));
    }
    sizes
        .into_iter()
        .zip(edges)
        .map(|(n, e)| Graph::from_edges_lossy(n, e))
        .collect()
}

/// DOT text of `g`; nodes in `highlight` are filled red.
pub fn format_dot(g: &Graph, highlight: Option<&BTreeSet<usize>>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for u in 0..g.node_count() {
        if highlight.is_some_and(|h| h.contains(&u)) {
            let _ = writeln!(out, "  {u} [style=filled, fillcolor=red];");
        } else {
            let _ = writeln!(out, "  {u};");
        }
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

pub fn write_dot(g: &Graph, path: impl AsRef<Path>, highlight: Option<&BTreeSet<usize>>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_dot(g, highlight)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::from_edges(3, [(1, 2), (0, 2), (0, 1)]).unwrap()
    }

    #[test]
    fn k3_text() {
        assert_eq!(format_edge_list(&k3()), "3 3\n0 1\n0 2\n1 2\n");
        assert_eq!(parse_edge_list("3 3\n0 1\n0 2\n1 2\n", Path::new("k3")).unwrap(), k3());
    }

    #[test]
    fn malformed_edge_lists() {
        let p = Path::new("x");
        for text in ["3 2\n0 1\n0 2\n1 2\n", "3 3\n0 1\n", "3\n", "3 1\n0 3\n", "3 1\n0 a\n", "3 1\n1 1\n", ""] {
            assert!(matches!(parse_edge_list(text, p), Err(Error::Format { .. })), "{text:?}");
        }
        match parse_edge_list("3 2\n0 1\n0 2\n1 2\n", p) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dot_output() {
        let plain = format_dot(&k3(), None);
        assert_eq!(plain.matches(" -- ").count(), 3);
        assert_eq!(plain, format_dot(&k3(), Some(&BTreeSet::new())));
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let dot = format_dot(&star, Some(&BTreeSet::from([0])));
        assert!(dot.contains("  0 [style=filled, fillcolor=red];"));
        assert!(dot.contains("  1;\n"));
    }

    #[test]
    fn manifest_checksum_tracks_content() {
        let a = CorpusManifest::describe("a", &[k3()]);
        let b = CorpusManifest::describe("a", &[Graph::empty(3)]);
        assert_eq!(a.checksum.len(), 64);
        assert_ne!(a.checksum, b.checksum);
        assert_eq!(a.graphs[0], GraphSummary { file: "graph_00000.txt".into(), n: 3, m: 3 });
    }
}
