//! Text formats: the edge-list graph format consumed by every CLI
//! subcommand, and headerless CSV matrices for samples.
//!
//! Graph format: first non-comment line is the vertex count `m`, each
//! following line one edge `i j` (1-based, whitespace-separated). `#`
//! starts a comment anywhere on a line.

use crate::error::{Error, Result};
use crate::graph::Graph;
use nalgebra::DMatrix;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the edge-list graph format, reporting 1-based line numbers on
/// malformed input.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut m: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match m {
            None => {
                let count: usize = line
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("expected vertex count, got {line:?}")))?;
                if count == 0 {
                    return Err(parse_err(line_no, "vertex count must be positive"));
                }
                m = Some(count);
            }
            Some(count) => {
                let mut parts = line.split_whitespace();
                let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(a), Some(b), None) => (a, b),
                    _ => return Err(parse_err(line_no, format!("expected `i j`, got {line:?}"))),
                };
                let parse_vertex = |s: &str| -> Result<usize> {
                    let v: usize = s
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("invalid vertex {s:?}")))?;
                    if v == 0 || v > count {
                        return Err(parse_err(
                            line_no,
                            format!("vertex {v} out of range 1..={count}"),
                        ));
                    }
                    Ok(v - 1)
                };
                let (a, b) = (parse_vertex(a)?, parse_vertex(b)?);
                if a == b {
                    return Err(parse_err(line_no, format!("self-loop at vertex {}", a + 1)));
                }
                let key = (a.min(b), a.max(b));
                if edges.contains(&key) {
                    return Err(parse_err(
                        line_no,
                        format!("duplicate edge ({}, {})", key.0 + 1, key.1 + 1),
                    ));
                }
                edges.push(key);
            }
        }
    }
    let m = m.ok_or_else(|| parse_err(1, "empty input: expected vertex count"))?;
    Graph::new(m, &edges)
}

/// Serializes a graph back into the edge-list format.
pub fn graph_to_text(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n", g.vertex_count()));
    for &(i, j) in g.edges() {
        out.push_str(&format!("{} {}\n", i + 1, j + 1));
    }
    out
}

/// Parses a headerless CSV matrix: one row per line, comma-separated
/// decimal floats. Every row must have the same number of columns.
pub fn parse_matrix_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(line_no, format!("invalid number {:?}", field.trim())))
            })
            .collect::<Result<_>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_err(
                    line_no,
                    format!("expected {} columns, got {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(1, "empty input: expected a matrix"));
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}
