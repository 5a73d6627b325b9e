use serde::{Deserialize, Serialize};

use super::ProjectionScheme;
use crate::formula::{AtomicConstraint, CspFormula};

/// Additive slack on the log2 sums when comparing against `α`/`β` bounds.
pub const ENTROPY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintEntropy {
    /// `Σ log2 ceil(q_v/s_v)` over the scope.
    pub upper_sum: f64,
    /// `Σ log2 floor(q_v/s_v)` over the scope.
    pub lower_sum: f64,
    /// `Σ log2 q_v` over the scope.
    pub total: f64,
    pub upper_ok: bool,
    pub lower_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub alpha: f64,
    pub beta: f64,
    /// Every preimage has size `floor(q_v/s_v)` or `ceil(q_v/s_v)`.
    pub balanced: bool,
    pub constraints: Vec<ConstraintEntropy>,
}

impl EntropyReport {
    /// `Σ log2 ceil(q_v/s_v) <= α Σ log2 q_v` for every constraint.
    pub fn upper_pass(&self) -> bool {
        self.constraints.iter().all(|c| c.upper_ok)
    }

    /// `Σ log2 floor(q_v/s_v) >= β Σ log2 q_v` for every constraint.
    pub fn lower_pass(&self) -> bool {
        self.constraints.iter().all(|c| c.lower_ok)
    }

    pub fn pass(&self) -> bool {
        self.balanced && self.upper_pass() && self.lower_pass()
    }

    /// Index of the first constraint failing either bound.
    pub fn first_failure(&self) -> Option<usize> {
        self.constraints
            .iter()
            .position(|c| !(c.upper_ok && c.lower_ok))
    }
}

pub(crate) fn constraint_sums(
    c: &AtomicConstraint,
    domain_sizes: &[u64],
    alphabet_sizes: &[u64],
) -> (f64, f64, f64) {
    let mut upper = 0.0;
    let mut lower = 0.0;
    let mut total = 0.0;
    for &v in c.scope() {
        let q = domain_sizes[v];
        let s = alphabet_sizes[v];
        upper += (q.div_ceil(s) as f64).log2();
        lower += ((q / s) as f64).log2();
        total += (q as f64).log2();
    }
    (upper, lower, total)
}

pub(crate) fn judge(sums: (f64, f64, f64), alpha: f64, beta: f64) -> ConstraintEntropy {
    let (upper_sum, lower_sum, total) = sums;
    ConstraintEntropy {
        upper_sum,
        lower_sum,
        total,
        upper_ok: upper_sum <= alpha * total + ENTROPY_TOLERANCE,
        lower_ok: lower_sum >= beta * total - ENTROPY_TOLERANCE,
    }
}

/// Checks balancedness and both per-constraint entropy bounds.
pub fn verify_entropy_criterion(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    alpha: f64,
    beta: f64,
) -> EntropyReport {
    let q = scheme.domain_sizes();
    let s = scheme.alphabet_sizes();
    let balanced = q.len() == formula.num_vars()
        && q == formula.domain_sizes()
        && (0..scheme.num_vars()).all(|v| {
            let lo = q[v] / s[v];
            let hi = q[v].div_ceil(s[v]);
            let first = scheme.preimage_len(v, 0);
            let last = scheme.preimage_len(v, s[v] - 1);
            (lo..=hi).contains(&first) && (lo..=hi).contains(&last)
        });
    let constraints = formula
        .constraints()
        .iter()
        .map(|c| judge(constraint_sums(c, q, s), alpha, beta))
        .collect();
    EntropyReport {
        alpha,
        beta,
        balanced,
        constraints,
    }
}

/// `τ_c = h(F^c)` for every constraint, stored flat in constraint order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedForbidden {
    offsets: Vec<usize>,
    symbols: Vec<u64>,
}

impl ProjectedForbidden {
    pub fn new(formula: &CspFormula, scheme: &ProjectionScheme) -> Self {
        let mut offsets = Vec::with_capacity(formula.num_constraints() + 1);
        let mut symbols = Vec::new();
        offsets.push(0);
        for c in formula.constraints() {
            for (&v, &x) in c.scope().iter().zip(c.forbidden()) {
                symbols.push(scheme.project_unchecked(v, x));
            }
            offsets.push(symbols.len());
        }
        Self { offsets, symbols }
    }

    /// `τ_c`, aligned with the constraint's scope.
    #[inline]
    pub fn tuple(&self, c: usize) -> &[u64] {
        &self.symbols[self.offsets[c]..self.offsets[c + 1]]
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn project_forbidden(formula: &CspFormula, scheme: &ProjectionScheme) -> ProjectedForbidden {
    ProjectedForbidden::new(formula, scheme)
}
