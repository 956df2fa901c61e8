//! Text formats.
//!
//! Edge list: one edge per line, `u v [w]`, weight defaults to 1. Blank lines
//! and lines starting with `#` are skipped. Ids are 0- or 1-based per
//! [`IndexBase`].
//!
//! Point graph: an `@coordinates` section with one `x y` line per vertex in id
//! order, then an `@edges` section in edge-list format.
//!
//! Hyperedge list: one hyperedge per line, ids separated by whitespace or
//! commas.
//!
//! Labels and embeddings are CSV.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BuildReport, Graph};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IndexBase {
    #[default]
    Zero,
    One,
}

impl IndexBase {
    fn offset(self) -> usize {
        match self {
            IndexBase::Zero => 0,
            IndexBase::One => 1,
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_id(tok: &str, line: usize, base: IndexBase) -> Result<usize> {
    let raw: usize = tok.parse().map_err(|_| parse_err(line, format!("bad vertex id {tok:?}")))?;
    raw.checked_sub(base.offset())
        .ok_or_else(|| parse_err(line, format!("vertex id {raw} below index base {}", base.offset())))
}

fn parse_f64(tok: &str, line: usize, what: &str) -> Result<f64> {
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

/// Lines that carry data, with 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_edge_line(line: usize, l: &str, base: IndexBase) -> Result<(usize, usize, f64)> {
    let toks: Vec<&str> = l.split_whitespace().collect();
    if !(2..=3).contains(&toks.len()) {
        return Err(parse_err(line, format!("expected `u v [w]`, found {} fields", toks.len())));
    }
    let w = match toks.get(2) {
        Some(t) => parse_f64(t, line, "weight")?,
        None => 1.0,
    };
    Ok((parse_id(toks[0], line, base)?, parse_id(toks[1], line, base)?, w))
}

/// Vertex count is the largest id plus one.
pub fn parse_edge_list(text: &str, base: IndexBase) -> Result<(Graph, BuildReport)> {
    let edges = data_lines(text)
        .map(|(line, l)| parse_edge_line(line, l, base))
        .collect::<Result<Vec<_>>>()?;
    Graph::from_edge_list(&edges)
}

pub fn load_edge_list(path: impl AsRef<Path>, base: IndexBase) -> Result<(Graph, BuildReport)> {
    parse_edge_list(&fs::read_to_string(path)?, base)
}

#[derive(Debug, Clone)]
pub struct PointGraph {
    pub graph: Graph,
    pub coordinates: Vec<[f64; 2]>,
    pub report: BuildReport,
}

pub fn parse_point_graph(text: &str, base: IndexBase) -> Result<PointGraph> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Coordinates,
        Edges,
    }
    let mut section = Section::None;
    let mut coordinates = Vec::new();
    let mut edges = Vec::new();
    for (line, l) in data_lines(text) {
        match l {
            "@coordinates" => section = Section::Coordinates,
            "@edges" => section = Section::Edges,
            _ => match section {
                Section::None => return Err(parse_err(line, "data before any section header")),
                Section::Coordinates => {
                    let toks: Vec<&str> = l.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(parse_err(line, "expected `x y`"));
                    }
                    coordinates.push([parse_f64(toks[0], line, "coordinate")?, parse_f64(toks[1], line, "coordinate")?]);
                }
                Section::Edges => edges.push(parse_edge_line(line, l, base)?),
            },
        }
    }
    if coordinates.is_empty() {
        return Err(parse_err(0, "missing @coordinates section"));
    }
    let (graph, report) = Graph::from_edges(coordinates.len(), &edges)?;
    Ok(PointGraph { graph, coordinates, report })
}

pub fn load_point_graph(path: impl AsRef<Path>, base: IndexBase) -> Result<PointGraph> {
    parse_point_graph(&fs::read_to_string(path)?, base)
}

/// `# n=<n> m=<m>` header, then `u v w` with 0-based ids.
pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = format!("# n={} m={}\n", graph.n(), graph.edge_count());
    for (u, v, w) in graph.edges() {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    out
}

/// Returns the hypergraph and the number of dropped singleton lines.
pub fn parse_hypergraph(text: &str, base: IndexBase) -> Result<(Hypergraph, usize)> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (line, l) in data_lines(text) {
        let e = l
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| parse_id(t, line, base))
            .collect::<Result<Vec<_>>>()?;
        n = e.iter().fold(n, |m, &v| m.max(v + 1));
        edges.push(e);
    }
    Hypergraph::new(n, edges)
}

pub fn load_hypergraph(path: impl AsRef<Path>, base: IndexBase) -> Result<(Hypergraph, usize)> {
    parse_hypergraph(&fs::read_to_string(path)?, base)
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    parse_err(line, e.to_string())
}

/// `vertex,label` rows; a header row is skipped when its first field is not
/// an integer. Vertices without a row get an empty label.
pub fn parse_labels(text: &str, n: usize, base: IndexBase) -> Result<Vec<String>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut labels = vec![String::new(); n];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        if rec.len() != 2 {
            return Err(parse_err(line, "expected `vertex,label`"));
        }
        if i == 0 && rec[0].parse::<usize>().is_err() {
            continue;
        }
        let v = parse_id(&rec[0], line, base)?;
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        labels[v] = rec[1].to_string();
    }
    Ok(labels)
}

pub fn load_labels(path: impl AsRef<Path>, n: usize, base: IndexBase) -> Result<Vec<String>> {
    parse_labels(&fs::read_to_string(path)?, n, base)
}

/// Header `vertex,z1,…,zk`; values in shortest round-trip form.
pub fn write_embedding_csv(z: &DMatrix<f64>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["vertex".to_string()];
    header.extend((1..=z.ncols()).map(|j| format!("z{j}")));
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..z.nrows() {
        let mut row = vec![i.to_string()];
        row.extend(z.row(i).iter().map(|x| x.to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

/// Inverse of [`write_embedding_csv`]; rows may come in any order but must
/// cover `0..n` exactly once.
pub fn parse_embedding_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let k = rdr.headers().map_err(csv_err)?.len().saturating_sub(1);
    if k == 0 {
        return Err(parse_err(1, "embedding needs at least one column"));
    }
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != k + 1 {
            return Err(parse_err(line, format!("expected {} fields, found {}", k + 1, rec.len())));
        }
        let v = parse_id(&rec[0], line, IndexBase::Zero)?;
        let vals = (1..=k).map(|j| parse_f64(&rec[j], line, "value")).collect::<Result<_>>()?;
        rows.push((v, vals));
    }
    let n = rows.len();
    let mut z = DMatrix::from_element(n, k, f64::NAN);
    let mut seen = vec![false; n];
    for (v, vals) in rows {
        if v >= n || seen[v] {
            return Err(parse_err(0, format!("vertex {v} missing, repeated or out of range")));
        }
        seen[v] = true;
        z.row_mut(v).iter_mut().zip(vals).for_each(|(d, s)| *d = s);
    }
    Ok(z)
}

pub fn load_embedding_csv(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    parse_embedding_csv(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_basics() {
        let (g, _) = parse_edge_list("0 1\n1 2", IndexBase::Zero).unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 2));
        let (g, _) = parse_edge_list("# header\n\n1 2 0.5\n2 3\n", IndexBase::One).unwrap();
        assert_eq!(g.weight(0, 1), Some(0.5));
        assert_eq!(g.n(), 3);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let e = parse_edge_list("0 1\n# c\n1 x\n", IndexBase::Zero).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_edge_list("0 1 2 3\n", IndexBase::Zero).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_edge_list("0 1\n", IndexBase::One).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        assert!(matches!(parse_edge_list("# nothing\n", IndexBase::Zero), Err(Error::EmptyEdgeList)));
    }

    #[test]
    fn edge_list_round_trip() {
        let (g, _) = parse_edge_list("0 1 2.5\n1 2\n2 0 0.125\n", IndexBase::Zero).unwrap();
        let (h, _) = parse_edge_list(&write_edge_list(&g), IndexBase::Zero).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn point_graph() {
        let p = parse_point_graph("@coordinates\n0 0\n1 0\n1 1\n@edges\n0 1\n1 2\n", IndexBase::Zero).unwrap();
        assert_eq!(p.coordinates[2], [1.0, 1.0]);
        assert_eq!(p.graph.n(), 3);
        let e = parse_point_graph("@coordinates\n0 0\n1\n", IndexBase::Zero).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        // An edge past the coordinate count is a range error.
        assert!(parse_point_graph("@coordinates\n0 0\n1 0\n@edges\n0 2\n", IndexBase::Zero).is_err());
    }

    #[test]
    fn hypergraph_file() {
        let (h, dropped) = parse_hypergraph("0 1 2\n1 3", IndexBase::Zero).unwrap();
        assert_eq!((h.n(), h.hyperedges().len(), dropped), (4, 2, 0));
        let (h, dropped) = parse_hypergraph("0 1 2\n5\n1,3\n", IndexBase::Zero).unwrap();
        assert_eq!((h.hyperedges().len(), dropped), (2, 1));
        assert_eq!(h.n(), 6);
    }

    #[test]
    fn labels_file() {
        let l = parse_labels("vertex,label\n0,a\n2,\"c, d\"\n", 3, IndexBase::Zero).unwrap();
        assert_eq!(l, vec!["a".to_string(), String::new(), "c, d".to_string()]);
        assert!(parse_labels("0,a\n7,b\n", 3, IndexBase::Zero).is_err());
    }

    #[test]
    fn embedding_round_trip() {
        let z = DMatrix::from_row_slice(3, 2, &[0.1, -1.0 / 3.0, 2e-300, 4.0, -0.0, 1e20]);
        let text = write_embedding_csv(&z).unwrap();
        assert!(text.starts_with("vertex,z1,z2\n0,0.1,"));
        let back = parse_embedding_csv(&text).unwrap();
        assert_eq!(back, z);
        assert!(parse_embedding_csv("vertex,z1\n0,1\n0,2\n").is_err());
    }
}
