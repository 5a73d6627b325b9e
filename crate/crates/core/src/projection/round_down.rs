//! Round-down formula and the two LLL conditions it induces. Diagnostics only;
//! the sampler never consults them.

use serde::{Deserialize, Serialize};

use super::{project_forbidden, ProjectionScheme};
use crate::error::{Error, Result};
use crate::formula::{atomize_general_constraint, compute_stats, AtomicConstraint, CspFormula};

/// Round-down formula over `Σ`. An atomic `c` is refuted by projected tuple
/// `y` iff `y = h(F^c)`, so the result is atomic with forbidden tuple `τ_c`.
/// Alphabets of size one are kept as single-value domains.
pub fn build_round_down(formula: &CspFormula, scheme: &ProjectionScheme) -> CspFormula {
    let tau = project_forbidden(formula, scheme);
    let constraints = formula
        .constraints()
        .iter()
        .enumerate()
        .map(|(ci, c)| AtomicConstraint::new(c.scope().to_vec(), tau.tuple(ci).to_vec()))
        .collect();
    CspFormula::with_min_domain(scheme.alphabet_sizes().to_vec(), constraints, 1)
        .expect("projected forbidden tuples lie in their alphabets")
}

/// Round-down by its definition: `c'(y)` is false iff some preimage of `y`
/// violates `c`. Costs `Σ_c Π_{v∈vbl(c)} q_v` constraint evaluations.
pub fn build_round_down_enumerated(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    budget: u64,
) -> Result<CspFormula> {
    let q = formula.domain_sizes();
    let mut work: u128 = 0;
    for c in formula.constraints() {
        let product = c
            .scope()
            .iter()
            .try_fold(1u128, |acc, &v| acc.checked_mul(q[v] as u128))
            .unwrap_or(u128::MAX);
        work = work.saturating_add(product);
    }
    if work > budget as u128 {
        return Err(Error::TooLargeToEnumerate {
            needed: work.to_string(),
            budget,
        });
    }

    let mut constraints = Vec::new();
    for c in formula.constraints() {
        let scope = c.scope();
        let alphabets: Vec<u64> = scope.iter().map(|&v| scheme.alphabet_size(v)).collect();
        let mut refuted = Vec::new();
        for_each_tuple(&alphabets, |y| {
            let lens: Vec<u64> = scope
                .iter()
                .zip(y)
                .map(|(&v, &yv)| scheme.preimage_len(v, yv))
                .collect();
            let starts: Vec<u64> = scope
                .iter()
                .zip(y)
                .map(|(&v, &yv)| scheme.preimage_start(v, yv))
                .collect();
            let mut violated = false;
            for_each_tuple(&lens, |offset| {
                let hits = offset
                    .iter()
                    .zip(&starts)
                    .zip(c.forbidden())
                    .all(|((&o, &s), &f)| s + o == f);
                violated |= hits;
            });
            if violated {
                refuted.push(y.to_vec());
            }
        });
        constraints.extend(atomize_general_constraint(scope, &refuted)?);
    }
    CspFormula::with_min_domain(scheme.alphabet_sizes().to_vec(), constraints, 1)
}

/// Calls `f` on every tuple of the mixed-radix space `radices`, last digit
/// slowest.
fn for_each_tuple(radices: &[u64], mut f: impl FnMut(&[u64])) {
    if radices.contains(&0) {
        return;
    }
    let mut tuple = vec![0u64; radices.len()];
    loop {
        f(&tuple);
        let mut i = 0;
        loop {
            if i == radices.len() {
                return;
            }
            tuple[i] += 1;
            if tuple[i] < radices[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedLllReport {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    /// `ln D`, with `ln 0` taken as 0.
    pub ln_d: f64,
    /// `ln(1/p)` of the round-down formula under `ρ`.
    pub round_down_ln_inv_p: f64,
    /// `(1-α)(A ln D + B)`.
    pub round_down_rhs: f64,
    pub round_down_pass: bool,
    /// `ln(1/p)` of the worst conditional instance, `Σ ln floor(q_v/s_v)`.
    pub conditional_ln_inv_p: f64,
    /// `β(A ln D + B)`.
    pub conditional_rhs: f64,
    pub conditional_pass: bool,
    /// `ln(1/p)` of the original formula.
    pub original_ln_inv_p: f64,
}

pub fn check_derived_lll_conditions(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    alpha: f64,
    beta: f64,
    a: f64,
    b: f64,
) -> DerivedLllReport {
    let stats = compute_stats(formula);
    let tau = project_forbidden(formula, scheme);
    let q = formula.domain_sizes();
    let mut round_down = f64::INFINITY;
    let mut conditional = f64::INFINITY;
    for (ci, c) in formula.constraints().iter().enumerate() {
        let mut rd = 0.0;
        let mut cond = 0.0;
        for (&v, &y) in c.scope().iter().zip(tau.tuple(ci)) {
            let qv = q[v] as f64;
            rd += qv.ln() - (scheme.preimage_len(v, y) as f64).ln();
            cond += ((q[v] / scheme.alphabet_size(v)) as f64).ln();
        }
        round_down = round_down.min(rd);
        conditional = conditional.min(cond);
    }
    let ln_d = if stats.max_degree == 0 {
        0.0
    } else {
        (stats.max_degree as f64).ln()
    };
    let base = a * ln_d + b;
    let round_down_rhs = (1.0 - alpha) * base;
    let conditional_rhs = beta * base;
    DerivedLllReport {
        alpha,
        beta,
        a,
        b,
        ln_d,
        round_down_ln_inv_p: round_down,
        round_down_rhs,
        round_down_pass: round_down > round_down_rhs,
        conditional_ln_inv_p: conditional,
        conditional_rhs,
        conditional_pass: conditional > conditional_rhs,
        original_ln_inv_p: stats.log2_inv_p * std::f64::consts::LN_2,
    }
}
