use std::fmt::Write;

use super::{content_lines, parse_number, InstanceDocument, InstanceMeta};
use crate::error::{Error, Result};
use crate::formula::CspFormula;

/// Header `p hyp n m q`, then `m` lines of 1-based vertex ids. Each edge
/// yields `q` constraints, one per monochromatic coloring. `#` starts a
/// comment line.
pub fn parse_hypergraph(text: &str) -> Result<InstanceDocument> {
    let mut lines = content_lines(text, &['#']);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing \"p hyp\" header".into(),
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "p" || tokens[1] != "hyp" {
        return Err(Error::Parse {
            line: hline,
            message: "expected header \"p hyp <n> <m> <q>\"".into(),
        });
    }
    let n: usize = parse_number(tokens[2], hline, "vertex count")?;
    let m: usize = parse_number(tokens[3], hline, "edge count")?;
    let q: u64 = parse_number(tokens[4], hline, "color count")?;
    if q < 2 {
        return Err(Error::Parse {
            line: hline,
            message: format!("need at least 2 colors, got {q}"),
        });
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = vec![usize::MAX; n];
    for (line, content) in lines {
        if edges.len() == m {
            return Err(Error::Parse {
                line,
                message: format!("more than the declared {m} edges"),
            });
        }
        let mut edge = Vec::new();
        for token in content.split_whitespace() {
            let vertex: i64 = parse_number(token, line, "vertex id")?;
            if vertex < 1 || vertex as u64 > n as u64 {
                return Err(Error::VertexOutOfRange { line, vertex, n });
            }
            let v = vertex as usize - 1;
            if seen[v] == edges.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("vertex {vertex} repeated in edge"),
                });
            }
            seen[v] = edges.len();
            edge.push(v);
        }
        edges.push(edge);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }

    let formula = CspFormula::hypergraph_coloring(n, &edges, q)?;
    let k = edges.iter().map(Vec::len).min().unwrap_or(0);
    let mut degree = vec![0usize; n];
    for &v in edges.iter().flatten() {
        degree[v] += 1;
    }
    let max_degree = degree.into_iter().max().unwrap_or(0);
    let mut warnings = Vec::new();
    if edges.iter().any(|e| e.len() != k) {
        warnings.push(format!(
            "edges are not uniform; using k = {k} (smallest edge)"
        ));
    }
    Ok(InstanceDocument {
        formula,
        meta: InstanceMeta::HypergraphColoring {
            k,
            max_degree,
            q,
            edges,
        },
        warnings,
    })
}

/// # Panics
/// If `doc` is not a coloring instance.
pub fn write_hypergraph(doc: &InstanceDocument) -> String {
    let InstanceMeta::HypergraphColoring { q, edges, .. } = &doc.meta else {
        panic!("not a hypergraph coloring document");
    };
    let mut out = format!("p hyp {} {} {}\n", doc.formula.num_vars(), edges.len(), q);
    for edge in edges {
        let row: Vec<String> = edge.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}
