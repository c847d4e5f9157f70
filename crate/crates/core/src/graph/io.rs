//! Text formats for graphs, features, labels and dense matrices.
//!
//! All formats are UTF-8, tab-separated, with `#` comment lines. Node ids
//! are dense integers `0..N`.
//!
//! ```text
//! graph      # nodes=N              src<TAB>dst[<TAB>weight]
//! features   # nodes=N dims=C       node<TAB>dim<TAB>value
//! labels                            node<TAB>class_id
//! dense      # rows=R cols=C        one tab-separated row per line
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use super::{DenseMatrix, DirectedGraph, LabelVector, SparseMatrix};
use crate::error::{DgcnError, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| DgcnError::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| DgcnError::io(path, e))?;
    f.write_all(text.as_bytes())
        .map_err(|e| DgcnError::io(path, e))
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn body_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

/// Parses a `# key=value key=value` header line into a map.
pub(crate) fn parse_header(line: &str, source: &str) -> Result<HashMap<String, String>> {
    let rest = line.strip_prefix('#').ok_or_else(|| DgcnError::Parse {
        path: source.to_string(),
        line: 1,
        msg: format!("expected '#' header, found {line:?}"),
    })?;
    let mut map = HashMap::new();
    for tok in rest.split_whitespace() {
        if let Some((k, v)) = tok.split_once('=') {
            map.insert(k.to_string(), v.to_string());
        }
    }
    Ok(map)
}

pub(crate) fn header_value<T: FromStr>(
    header: &HashMap<String, String>,
    key: &str,
    source: &str,
    line: usize,
) -> Result<T> {
    let raw = header.get(key).ok_or_else(|| DgcnError::Parse {
        path: source.to_string(),
        line,
        msg: format!("header is missing '{key}='"),
    })?;
    raw.parse().map_err(|_| DgcnError::Parse {
        path: source.to_string(),
        line,
        msg: format!("bad value for '{key}': {raw:?}"),
    })
}

pub(crate) fn field<T: FromStr>(raw: &str, what: &str, source: &str, line: usize) -> Result<T> {
    raw.trim().parse().map_err(|_| DgcnError::Parse {
        path: source.to_string(),
        line,
        msg: format!("bad {what}: {raw:?}"),
    })
}

fn first_line(text: &str) -> &str {
    text.lines().next().unwrap_or("").trim_end_matches('\r')
}

pub fn load_graph(path: &Path) -> Result<DirectedGraph> {
    parse_graph(&read_text(path)?, &path.display().to_string())
}

/// Parses the edge-list format. Duplicate `(src, dst)` lines sum their
/// weights; a missing weight means 1.0.
pub fn parse_graph(text: &str, source: &str) -> Result<DirectedGraph> {
    let header = parse_header(first_line(text), source)?;
    let n: usize = header_value(&header, "nodes", source, 1)?;
    let mut edges = Vec::new();
    for (line, l) in body_lines(text) {
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(DgcnError::Parse {
                path: source.to_string(),
                line,
                msg: format!("expected src<TAB>dst[<TAB>weight], found {l:?}"),
            });
        }
        let src: usize = field(fields[0], "source node", source, line)?;
        let dst: usize = field(fields[1], "target node", source, line)?;
        let w: f64 = match fields.get(2) {
            Some(raw) => field(raw, "weight", source, line)?,
            None => 1.0,
        };
        if src >= n || dst >= n {
            return Err(DgcnError::Bounds(format!(
                "{source}:{line}: edge ({src}, {dst}) with nodes={n}"
            )));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(DgcnError::Domain(format!(
                "{source}:{line}: weight {w} must be a nonnegative finite number"
            )));
        }
        edges.push((src, dst, w));
    }
    DirectedGraph::from_edges(n, edges)
}

/// Canonical edge-list text: header, optional extra comment lines, then one
/// line per stored entry in row-major order with the shortest round-trip
/// weight literal.
pub fn format_graph(m: &SparseMatrix, comments: &[String]) -> String {
    let mut out = format!("# nodes={}\n", m.n_rows());
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for (i, j, w) in m.iter() {
        let _ = writeln!(out, "{i}\t{j}\t{w}");
    }
    out
}

pub fn save_graph(path: &Path, m: &SparseMatrix, comments: &[String]) -> Result<()> {
    write_text(path, &format_graph(m, comments))
}

pub fn load_features(path: &Path, n_nodes: usize) -> Result<DenseMatrix> {
    parse_features(&read_text(path)?, n_nodes, &path.display().to_string())
}

pub fn parse_features(text: &str, n_nodes: usize, source: &str) -> Result<DenseMatrix> {
    let header = parse_header(first_line(text), source)?;
    let n: usize = header_value(&header, "nodes", source, 1)?;
    let dims: usize = header_value(&header, "dims", source, 1)?;
    if n != n_nodes {
        return Err(DgcnError::Format(format!(
            "{source}: feature file declares {n} nodes, graph has {n_nodes}"
        )));
    }
    let mut x = DenseMatrix::zeros(n, dims);
    let mut seen = std::collections::HashSet::new();
    for (line, l) in body_lines(text) {
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() != 3 {
            return Err(DgcnError::Parse {
                path: source.to_string(),
                line,
                msg: format!("expected node<TAB>dim<TAB>value, found {l:?}"),
            });
        }
        let node: usize = field(fields[0], "node", source, line)?;
        let dim: usize = field(fields[1], "dimension", source, line)?;
        let v: f64 = field(fields[2], "value", source, line)?;
        if node >= n {
            return Err(DgcnError::Bounds(format!(
                "{source}:{line}: node {node} with nodes={n}"
            )));
        }
        if dim >= dims {
            return Err(DgcnError::Bounds(format!(
                "{source}:{line}: dimension {dim} with dims={dims}"
            )));
        }
        if !v.is_finite() {
            return Err(DgcnError::Domain(format!(
                "{source}:{line}: non-finite feature value"
            )));
        }
        if !seen.insert((node, dim)) {
            return Err(DgcnError::Format(format!(
                "{source}:{line}: duplicate entry for node {node} dim {dim}"
            )));
        }
        x.set(node, dim, v);
    }
    Ok(x)
}

/// Sparse-triplet text for a feature matrix; zero entries are omitted.
pub fn format_features(x: &DenseMatrix, comments: &[String]) -> String {
    let mut out = format!("# nodes={} dims={}\n", x.n_rows(), x.n_cols());
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for i in 0..x.n_rows() {
        for (j, &v) in x.row(i).iter().enumerate() {
            if v != 0.0 {
                let _ = writeln!(out, "{i}\t{j}\t{v}");
            }
        }
    }
    out
}

pub fn load_labels(path: &Path, n_nodes: usize) -> Result<LabelVector> {
    parse_labels(&read_text(path)?, n_nodes, &path.display().to_string())
}

/// Nodes absent from the file are unlabeled; a node listed twice is an error.
pub fn parse_labels(text: &str, n_nodes: usize, source: &str) -> Result<LabelVector> {
    let mut labels = vec![None; n_nodes];
    for (line, l) in body_lines(text) {
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() != 2 {
            return Err(DgcnError::Parse {
                path: source.to_string(),
                line,
                msg: format!("expected node<TAB>class_id, found {l:?}"),
            });
        }
        let node: usize = field(fields[0], "node", source, line)?;
        let class: usize = field(fields[1], "class id", source, line)?;
        if node >= n_nodes {
            return Err(DgcnError::Bounds(format!(
                "{source}:{line}: node {node} with {n_nodes} nodes"
            )));
        }
        if labels[node].replace(class).is_some() {
            return Err(DgcnError::Format(format!(
                "{source}:{line}: node {node} labeled twice"
            )));
        }
    }
    Ok(LabelVector::new(labels))
}

pub fn format_labels(y: &LabelVector, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for (i, c) in y.labeled_nodes() {
        let _ = writeln!(out, "{i}\t{c}");
    }
    out
}

/// Sidecar vocabulary: line `i` holds the external id of node `i`.
pub fn load_node_ids(path: &Path, n_nodes: usize) -> Result<Vec<String>> {
    let ids: Vec<String> = body_lines(&read_text(path)?)
        .map(|(_, l)| l.trim().to_string())
        .collect();
    if ids.len() != n_nodes {
        return Err(DgcnError::Format(format!(
            "{}: {} ids for {n_nodes} nodes",
            path.display(),
            ids.len()
        )));
    }
    Ok(ids)
}

/// One row per line, 17 significant digits per entry.
pub(crate) fn format_dense_rows(out: &mut String, m: &DenseMatrix) {
    for i in 0..m.n_rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
}

pub fn format_dense(m: &DenseMatrix, comments: &[String]) -> String {
    let mut out = format!("# rows={} cols={}\n", m.n_rows(), m.n_cols());
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    format_dense_rows(&mut out, m);
    out
}

pub fn save_dense(path: &Path, m: &DenseMatrix, comments: &[String]) -> Result<()> {
    write_text(path, &format_dense(m, comments))
}

pub(crate) fn parse_dense_rows<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    rows: usize,
    cols: usize,
    source: &str,
) -> Result<DenseMatrix> {
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (line, l) = lines.next().ok_or_else(|| DgcnError::Format(format!(
            "{source}: expected {rows} rows, found {r}"
        )))?;
        let before = data.len();
        for tok in l.split('\t') {
            data.push(field::<f64>(tok, "matrix entry", source, line)?);
        }
        if data.len() - before != cols {
            return Err(DgcnError::Parse {
                path: source.to_string(),
                line,
                msg: format!("expected {cols} columns, found {}", data.len() - before),
            });
        }
    }
    DenseMatrix::from_vec(rows, cols, data)
}

pub fn parse_dense(text: &str, source: &str) -> Result<DenseMatrix> {
    let header = parse_header(first_line(text), source)?;
    let rows: usize = header_value(&header, "rows", source, 1)?;
    let cols: usize = header_value(&header, "cols", source, 1)?;
    let mut lines = body_lines(text);
    let m = parse_dense_rows(&mut lines, rows, cols, source)?;
    if let Some((line, _)) = lines.next() {
        return Err(DgcnError::Parse {
            path: source.to_string(),
            line,
            msg: "trailing rows".into(),
        });
    }
    Ok(m)
}

pub fn load_dense(path: &Path) -> Result<DenseMatrix> {
    parse_dense(&read_text(path)?, &path.display().to_string())
}
