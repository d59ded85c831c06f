//! Text formats.
//!
//! Edge lists: one edge per line as two whitespace-separated node ids.
//! Lines starting with `#` and blank lines are skipped. Without an explicit
//! node count, `n` is one more than the largest id.
//!
//! Score files: CSV with header `id,value`, or JSON
//! `{"kind": "node" | "edge", "values": [...]}`.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse_edge_list<R: BufRead>(reader: R, n: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_id = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next = || -> Result<usize> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: "expected two node ids".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("invalid node id {tok:?}"),
            })
        };
        let (u, v) = (next()?, next()?);
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "trailing fields after edge".into(),
            });
        }
        max_id = max_id.max(Some(u.max(v)));
        edges.push((u, v));
    }
    let n = n.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
    Graph::from_edges(n, &edges)
}

pub fn read_edge_list(path: &Path, n: Option<usize>) -> Result<Graph> {
    let file = fs::File::open(path)?;
    parse_edge_list(std::io::BufReader::new(file), n)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# n={} m={}", g.node_count(), g.edge_count())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!(
                "format must be csv or json; got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    Node,
    Edge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreFile {
    pub kind: ScoreKind,
    pub values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ScoreRow {
    id: usize,
    value: f64,
}

pub fn write_scores<W: Write>(scores: &ScoreFile, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, scores)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for (id, &value) in scores.values.iter().enumerate() {
                w.serialize(ScoreRow { id, value })?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Reads a score file of either format. CSV carries no kind and is
/// reported as node scores.
pub fn parse_scores(text: &str) -> Result<ScoreFile> {
    if text.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut values = Vec::new();
    for (i, row) in rdr.deserialize::<ScoreRow>().enumerate() {
        let row = row?;
        if row.id != i {
            return Err(Error::Parse {
                line: i + 2,
                msg: format!("expected id {i}, found {}", row.id),
            });
        }
        values.push(row.value);
    }
    Ok(ScoreFile {
        kind: ScoreKind::Node,
        values,
    })
}

pub fn read_scores(path: &Path) -> Result<ScoreFile> {
    parse_scores(&fs::read_to_string(path)?)
}
