use std::fmt::Write;

use super::{content_lines, parse_number, InstanceDocument, InstanceMeta};
use crate::error::{Error, Result};
use crate::formula::{AtomicConstraint, CspFormula};

/// `p acsp n`, one `d q_1 ... q_n` line, then `c v:a ...` constraint lines
/// (1-based variables, 0-based values). `#` starts a comment line.
pub fn parse_atomic_csp(text: &str) -> Result<InstanceDocument> {
    let mut n: Option<usize> = None;
    let mut domains: Option<Vec<u64>> = None;
    let mut constraints = Vec::new();

    for (line, content) in content_lines(text, &['#']) {
        let mut tokens = content.split_whitespace();
        let head = tokens.next().unwrap_or("");
        let err = |message: String| Error::Parse { line, message };
        match (head, n, &domains) {
            ("p", None, _) => {
                if tokens.next() != Some("acsp") {
                    return Err(err("expected header \"p acsp <n>\"".into()));
                }
                let count = tokens
                    .next()
                    .ok_or_else(|| err("missing variable count".into()))?;
                n = Some(parse_number(count, line, "variable count")?);
                if tokens.next().is_some() {
                    return Err(err("trailing tokens after header".into()));
                }
            }
            ("p", Some(_), _) => return Err(err("second header line".into())),
            (_, None, _) => return Err(err("expected \"p acsp\" header first".into())),
            ("d", Some(n), None) => {
                let q = tokens
                    .map(|t| parse_number(t, line, "domain size"))
                    .collect::<Result<Vec<u64>>>()?;
                if q.len() != n {
                    return Err(err(format!("{} domain sizes for {n} variables", q.len())));
                }
                if let Some(v) = q.iter().position(|&qv| qv < 2) {
                    return Err(err(format!("variable {} has domain size {}", v + 1, q[v])));
                }
                domains = Some(q);
            }
            ("d", Some(_), Some(_)) => return Err(err("second domain line".into())),
            ("c", Some(_), None) => return Err(err("constraint before the domain line".into())),
            ("c", Some(n), Some(q)) => {
                let mut scope = Vec::new();
                let mut forbidden = Vec::new();
                for token in tokens {
                    let (var, value) = token
                        .split_once(':')
                        .ok_or_else(|| err(format!("expected var:value, found {token:?}")))?;
                    let var: usize = parse_number(var, line, "variable id")?;
                    let value: u64 = parse_number(value, line, "value")?;
                    if var == 0 || var > n {
                        return Err(err(format!("variable {var} outside 1..={n}")));
                    }
                    if value >= q[var - 1] {
                        return Err(Error::ValueOutOfDomain {
                            var: var - 1,
                            value,
                            size: q[var - 1],
                        });
                    }
                    if scope.contains(&(var - 1)) {
                        return Err(err(format!("variable {var} repeated in constraint")));
                    }
                    scope.push(var - 1);
                    forbidden.push(value);
                }
                constraints.push(AtomicConstraint::new(scope, forbidden));
            }
            (other, _, _) => return Err(err(format!("unexpected line type {other:?}"))),
        }
    }

    let domains = domains.ok_or(Error::Parse {
        line: 0,
        message: "missing \"d\" domain line".into(),
    })?;
    Ok(InstanceDocument {
        formula: CspFormula::new(domains, constraints)?,
        meta: InstanceMeta::AtomicCsp,
        warnings: Vec::new(),
    })
}

pub fn write_atomic_csp(formula: &CspFormula) -> String {
    let mut out = format!("p acsp {}\nd", formula.num_vars());
    for q in formula.domain_sizes() {
        write!(out, " {q}").unwrap();
    }
    out.push('\n');
    for c in formula.constraints() {
        out.push('c');
        for (&v, &x) in c.scope().iter().zip(c.forbidden()) {
            write!(out, " {}:{x}", v + 1).unwrap();
        }
        out.push('\n');
    }
    out
}
