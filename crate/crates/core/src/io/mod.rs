//! Text formats: DIMACS CNF, hypergraphs for coloring, atomic CSPs, and
//! sample output. Variables are 1-based on the wire and 0-based in memory.

mod acsp;
mod cnf;
mod hypergraph;
mod samples;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::CspFormula;
use crate::regimes::InstanceClass;

pub use acsp::{parse_atomic_csp, write_atomic_csp};
pub use cnf::{parse_dimacs_cnf, write_dimacs_cnf};
pub use hypergraph::{parse_hypergraph, write_hypergraph};
pub use samples::{
    emit_samples, parse_samples_json, parse_samples_lines, RunSummary, SampleFormat, SampleMetadata,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    Cnf,
    HypergraphColoring,
    AtomicCsp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceMeta {
    /// `k` is the widest clause, `d` the most clauses on one variable.
    Cnf {
        k: usize,
        d: usize,
    },
    /// `k` is the smallest edge (the regime assumes uniform edges), `Δ` the
    /// largest vertex degree. Edges are 0-based.
    HypergraphColoring {
        k: usize,
        max_degree: usize,
        q: u64,
        edges: Vec<Vec<usize>>,
    },
    AtomicCsp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub formula: CspFormula,
    pub meta: InstanceMeta,
    /// Non-fatal findings of the parser.
    pub warnings: Vec<String>,
}

impl InstanceDocument {
    pub fn kind(&self) -> InstanceKind {
        match self.meta {
            InstanceMeta::Cnf { .. } => InstanceKind::Cnf,
            InstanceMeta::HypergraphColoring { .. } => InstanceKind::HypergraphColoring,
            InstanceMeta::AtomicCsp => InstanceKind::AtomicCsp,
        }
    }

    /// The regime class implied by the input format.
    pub fn class(&self) -> InstanceClass {
        match self.meta {
            InstanceMeta::Cnf { k, d } => InstanceClass::Cnf { k, d },
            InstanceMeta::HypergraphColoring {
                k, max_degree, q, ..
            } => InstanceClass::Coloring { k, max_degree, q },
            InstanceMeta::AtomicCsp => InstanceClass::General,
        }
    }

    /// Serializes in the document's own format.
    pub fn to_text(&self) -> String {
        match self.kind() {
            InstanceKind::Cnf => write_dimacs_cnf(&self.formula),
            InstanceKind::HypergraphColoring => write_hypergraph(self),
            InstanceKind::AtomicCsp => write_atomic_csp(&self.formula),
        }
    }
}

/// Parses any of the three formats, chosen by the `p` header.
pub fn parse_instance(text: &str) -> Result<InstanceDocument> {
    for (line, content) in content_lines(text, &['c', '#']) {
        let mut tokens = content.split_whitespace();
        if tokens.next() != Some("p") {
            continue;
        }
        return match tokens.next() {
            Some("cnf") => parse_dimacs_cnf(text),
            Some("hyp") => parse_hypergraph(text),
            Some("acsp") => parse_atomic_csp(text),
            other => Err(Error::Parse {
                line,
                message: format!("unknown format {:?}", other.unwrap_or("")),
            }),
        };
    }
    Err(Error::Parse {
        line: 0,
        message: "no 'p' header line".into(),
    })
}

/// Non-blank lines with 1-based numbers, skipping lines whose first
/// character is in `comment`. A comment marker must be followed by
/// whitespace or end the line, so `c` constraint lines survive `#` filtering.
pub(crate) fn content_lines<'a>(
    text: &'a str,
    comment: &'a [char],
) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines().enumerate().filter_map(move |(i, raw)| {
        let line = raw.trim();
        if line.is_empty() {
            return None;
        }
        let mut chars = line.chars();
        let first = chars.next().unwrap();
        let is_comment = comment.contains(&first)
            && (first == '#' || chars.next().is_none_or(char::is_whitespace));
        (!is_comment).then_some((i + 1, line))
    })
}

pub(crate) fn parse_number<T: std::str::FromStr>(
    token: &str,
    line: usize,
    what: &str,
) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected {what}, found {token:?}"),
    })
}
