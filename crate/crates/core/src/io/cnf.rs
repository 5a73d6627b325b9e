use std::fmt::Write;

use super::{content_lines, parse_number, InstanceDocument, InstanceMeta};
use crate::error::{Error, Result};
use crate::formula::{AtomicConstraint, CspFormula};

/// DIMACS CNF. Clause `l_1 ∨ ... ∨ l_w` becomes the atomic constraint
/// forbidding its unique falsifying assignment: 0 for a positive literal, 1
/// for a negative one. Repeated literals are merged; tautologies are dropped
/// with a warning.
pub fn parse_dimacs_cnf(text: &str) -> Result<InstanceDocument> {
    let mut header: Option<(usize, usize)> = None;
    let mut constraints = Vec::new();
    let mut warnings = Vec::new();
    let mut clauses_seen = 0usize;
    let mut current: Vec<i64> = Vec::new();
    let mut clause_line = 0;

    for (line, content) in content_lines(text, &['c']) {
        if content.starts_with('%') {
            break;
        }
        if content.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse {
                    line,
                    message: "second header line".into(),
                });
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != 4 || tokens[0] != "p" || tokens[1] != "cnf" {
                return Err(Error::Parse {
                    line,
                    message: "expected header \"p cnf <vars> <clauses>\"".into(),
                });
            }
            let n = parse_number(tokens[2], line, "variable count")?;
            let m = parse_number(tokens[3], line, "clause count")?;
            header = Some((n, m));
            continue;
        }
        let Some((n, m)) = header else {
            return Err(Error::Parse {
                line,
                message: "clause before header".into(),
            });
        };
        for token in content.split_whitespace() {
            let lit: i64 = parse_number(token, line, "literal")?;
            if current.is_empty() {
                clause_line = line;
            }
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::EmptyClause { line });
                }
                clauses_seen += 1;
                if clauses_seen > m {
                    return Err(Error::Parse {
                        line,
                        message: format!("more than the declared {m} clauses"),
                    });
                }
                match clause_to_constraint(&current) {
                    Some(c) => constraints.push(c),
                    None => {
                        warnings.push(format!("line {clause_line}: tautological clause dropped"))
                    }
                }
                current.clear();
                continue;
            }
            if lit.unsigned_abs() as usize > n {
                return Err(Error::Parse {
                    line,
                    message: format!("literal {lit} outside variables 1..={n}"),
                });
            }
            current.push(lit);
        }
    }

    let Some((n, m)) = header else {
        return Err(Error::Parse {
            line: 0,
            message: "missing \"p cnf\" header".into(),
        });
    };
    if !current.is_empty() {
        return Err(Error::Parse {
            line: clause_line,
            message: "clause not terminated by 0".into(),
        });
    }
    if clauses_seen != m {
        return Err(Error::Parse {
            line: 0,
            message: format!("header declares {m} clauses, found {clauses_seen}"),
        });
    }
    let formula = CspFormula::new(vec![2; n], constraints)?;
    let k = formula
        .constraints()
        .iter()
        .map(|c| c.width())
        .max()
        .unwrap_or(0);
    let d = formula.occurrences().into_iter().max().unwrap_or(0);
    Ok(InstanceDocument {
        formula,
        meta: InstanceMeta::Cnf { k, d },
        warnings,
    })
}

/// `None` for a tautology. Scope order follows first occurrence.
fn clause_to_constraint(literals: &[i64]) -> Option<AtomicConstraint> {
    let mut scope = Vec::with_capacity(literals.len());
    let mut forbidden = Vec::with_capacity(literals.len());
    for &lit in literals {
        let v = lit.unsigned_abs() as usize - 1;
        let value = u64::from(lit < 0);
        match scope.iter().position(|&u| u == v) {
            Some(i) if forbidden[i] != value => return None,
            Some(_) => {}
            None => {
                scope.push(v);
                forbidden.push(value);
            }
        }
    }
    Some(AtomicConstraint::new(scope, forbidden))
}

/// Writes a boolean atomic formula as DIMACS CNF.
///
/// # Panics
/// If some domain is not boolean.
pub fn write_dimacs_cnf(formula: &CspFormula) -> String {
    assert!(
        formula.domain_sizes().iter().all(|&q| q == 2),
        "CNF output needs boolean domains"
    );
    let mut out = format!(
        "p cnf {} {}\n",
        formula.num_vars(),
        formula.num_constraints()
    );
    for c in formula.constraints() {
        for (&v, &x) in c.scope().iter().zip(c.forbidden()) {
            let lit = v as i64 + 1;
            write!(out, "{} ", if x == 0 { lit } else { -lit }).unwrap();
        }
        out.push_str("0\n");
    }
    out
}
