//! Text formats for datasets and graphs.
//!
//! Dataset: one observation per line, `0`/`1` tokens separated by a single space (or a
//! comma for CSV), no header. Graph: a `# d=<n>` header followed by one `j j'` pair per
//! line with `j < j'`, 0-based and sorted.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use super::dataset::{BinaryDataset, DatasetBuilder};
use super::graph::UndirectedGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataFormat {
    #[default]
    Space,
    Csv,
}

impl DataFormat {
    fn separator(self) -> char {
        match self {
            DataFormat::Space => ' ',
            DataFormat::Csv => ',',
        }
    }
}

impl FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "space" | "space-separated" | "txt" => Ok(DataFormat::Space),
            "csv" => Ok(DataFormat::Csv),
            other => Err(Error::InvalidConfig(format!("unknown data format {other:?}"))),
        }
    }
}

/// Parses dataset text. Parse errors carry 1-based line and token positions.
pub fn parse_dataset(text: &str, format: DataFormat) -> Result<BinaryDataset> {
    let sep = format.separator();
    let mut builder: Option<DatasetBuilder> = None;
    let mut row = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        row.clear();
        for (col_no, token) in line.split(sep).enumerate() {
            match token.trim() {
                "0" => row.push(0u8),
                "1" => row.push(1u8),
                other => return Err(Error::Parse { row: line_no + 1, col: col_no + 1, token: other.to_string() }),
            }
        }
        let b = match &mut builder {
            Some(b) => b,
            None => builder.insert(DatasetBuilder::new(row.len())?),
        };
        b.push_row(&row)?;
    }
    builder.ok_or(Error::EmptyInput)?.finish()
}

pub fn format_dataset(data: &BinaryDataset, format: DataFormat) -> String {
    let sep = format.separator();
    let mut out = String::with_capacity(data.n_rows() * data.n_cols() * 2);
    for i in 0..data.n_rows() {
        for j in 0..data.n_cols() {
            if j > 0 {
                out.push(sep);
            }
            out.push(if data.get(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn read_dataset(path: &Path, format: DataFormat) -> Result<BinaryDataset> {
    parse_dataset(&fs::read_to_string(path)?, format)
}

pub fn write_dataset(data: &BinaryDataset, path: &Path, format: DataFormat) -> Result<()> {
    write_atomic(path, format_dataset(data, format).as_bytes())
}

pub fn format_graph(graph: &UndirectedGraph) -> String {
    let mut out = format!("# d={}\n", graph.n_vertices());
    for (a, b) in graph.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<UndirectedGraph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
    let n: usize = header
        .trim()
        .strip_prefix("# d=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Format { what: "graph header", line: 1, msg: "expected `# d=<n>`".into() })?;
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        let bad = |msg: &str| Error::Format { what: "graph edge", line: line_no + 1, msg: msg.to_string() };
        let mut parts = line.split_whitespace();
        let a: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("expected `j j'`"))?;
        let b: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("expected `j j'`"))?;
        if parts.next().is_some() {
            return Err(bad("trailing tokens"));
        }
        edges.push((a, b));
    }
    UndirectedGraph::from_edges(n, edges)
}

pub fn read_graph(path: &Path) -> Result<UndirectedGraph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn write_graph(graph: &UndirectedGraph, path: &Path) -> Result<()> {
    write_atomic(path, format_graph(graph).as_bytes())
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name =
        path.file_name().ok_or_else(|| Error::InvalidConfig(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
