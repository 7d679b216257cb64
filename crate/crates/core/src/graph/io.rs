use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::str::FromStr;

use super::Graph;
use crate::error::{Error, Result};

/// Text formats understood by [`load_edge_list`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// One edge per line, two whitespace-separated non-negative ids.
    /// Lines starting with `%` or `#` are comments.
    EdgeList,
    /// DIMACS clique format: `p edge n m` followed by `e u v` lines (1-based).
    Dimacs,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edgelist" | "txt" => Ok(Self::EdgeList),
            "dimacs" | "clq" => Ok(Self::Dimacs),
            other => Err(Error::Argument(format!("unknown graph format '{other}'"))),
        }
    }
}

/// Reads a graph, dropping self-loops and merging parallel and reversed edges.
pub fn load_edge_list<R: BufRead>(reader: R, format: InputFormat) -> Result<Graph> {
    match format {
        InputFormat::EdgeList => read_edge_list(reader),
        InputFormat::Dimacs => read_dimacs(reader),
    }
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: "expected two vertex ids".into(),
    })?;
    tok.parse::<u64>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid vertex id '{tok}'"),
    })
}

fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut raw = Vec::new();
    let mut ids = BTreeMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let u = parse_id(it.next(), lineno)?;
        let v = parse_id(it.next(), lineno)?;
        // trailing columns (weights, timestamps) are ignored
        ids.insert(u, 0usize);
        ids.insert(v, 0usize);
        raw.push((u, v));
    }
    for (next, slot) in ids.values_mut().enumerate() {
        *slot = next;
    }
    let labels: Vec<u64> = ids.keys().copied().collect();
    let g = Graph::from_edges(labels.len(), raw.iter().map(|(u, v)| (ids[u], ids[v])))?;
    g.with_labels(labels)
}

fn read_dimacs<R: BufRead>(reader: R) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut labels: BTreeMap<usize, u64> = BTreeMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut it = line.split_whitespace();
        match it.next() {
            None => continue,
            Some("c") => {
                // `c label <vertex> <external id>` restores vertex labels
                if it.next() == Some("label") {
                    let v = parse_id(it.next(), lineno)? as usize;
                    let ext = parse_id(it.next(), lineno)?;
                    labels.insert(v, ext);
                }
            }
            Some("p") => {
                if header.is_some() {
                    return Err(Error::Format(format!("second problem line at line {lineno}")));
                }
                match it.next() {
                    Some("edge") | Some("col") => {}
                    _ => {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "expected 'p edge <n> <m>'".into(),
                        })
                    }
                }
                let n = parse_id(it.next(), lineno)? as usize;
                let m = parse_id(it.next(), lineno)? as usize;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| {
                    Error::Format(format!("edge before problem line at line {lineno}"))
                })?;
                let u = parse_id(it.next(), lineno)? as usize;
                let v = parse_id(it.next(), lineno)? as usize;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(Error::Format(format!(
                        "edge ({u}, {v}) on line {lineno} outside 1..={n}"
                    )));
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unexpected line type '{other}'"),
                })
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Format("missing 'p edge' line".into()))?;
    if edges.len() != m {
        return Err(Error::Format(format!(
            "header declares {m} edges but body has {}",
            edges.len()
        )));
    }
    let g = Graph::from_edges(n, edges)?;
    if labels.is_empty() {
        return Ok(g);
    }
    if labels.len() != n || labels.keys().copied().ne(1..=n) {
        return Err(Error::Format("label comments must cover every vertex".into()));
    }
    g.with_labels(labels.into_values().collect())
}

/// Writes `u v` lines using vertex labels.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v))?;
    }
    Ok(())
}

/// Writes DIMACS with 1-based internal ids. Labelled graphs additionally get
/// `c label` comments so the mapping back to input ids survives the trip.
pub fn write_dimacs<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "p edge {} {}", g.num_vertices(), g.num_edges())?;
    if let Some(labels) = g.labels() {
        for (v, ext) in labels.iter().enumerate() {
            writeln!(out, "c label {} {}", v + 1, ext)?;
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1)?;
    }
    Ok(())
}
