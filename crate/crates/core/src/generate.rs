//! Random instance generators for tests, benchmarks and the verify battery.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{AtomicConstraint, CspFormula};
use crate::projection::ProjectionScheme;

/// `k` distinct variables out of `0..n`, in random order.
pub fn random_scope<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    rand::seq::index::sample(rng, n, k).into_vec()
}

/// `m` clauses of width `k` over `n` boolean variables with random signs.
pub fn random_k_cnf<R: Rng + ?Sized>(n: usize, m: usize, k: usize, rng: &mut R) -> CspFormula {
    let constraints = (0..m)
        .map(|_| {
            let scope = random_scope(n, k, rng);
            let forbidden = (0..k).map(|_| rng.gen_range(0..2)).collect();
            AtomicConstraint::new(scope, forbidden)
        })
        .collect();
    CspFormula::new(vec![2; n], constraints).expect("valid by construction")
}

/// `k`-CNF where every variable occurs in exactly `d` clauses: `d` rounds,
/// each splitting a fresh permutation of `blocks * k` variables into `blocks`
/// clauses.
pub fn random_regular_k_cnf<R: Rng + ?Sized>(
    blocks: usize,
    k: usize,
    d: usize,
    rng: &mut R,
) -> CspFormula {
    let n = blocks * k;
    let mut vars: Vec<usize> = (0..n).collect();
    let mut constraints = Vec::with_capacity(blocks * d);
    for _ in 0..d {
        vars.shuffle(rng);
        for chunk in vars.chunks(k) {
            let forbidden = (0..k).map(|_| rng.gen_range(0..2)).collect();
            constraints.push(AtomicConstraint::new(chunk.to_vec(), forbidden));
        }
    }
    CspFormula::new(vec![2; n], constraints).expect("valid by construction")
}

/// `m` random `k`-element edges over `n` vertices.
pub fn random_hypergraph<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    k: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    (0..m)
        .map(|_| {
            let mut e = random_scope(n, k, rng);
            e.sort_unstable();
            e
        })
        .collect()
}

/// Atomic constraints of random width in `widths` over the given domains.
pub fn random_atomic_csp<R: Rng + ?Sized>(
    domain_sizes: Vec<u64>,
    m: usize,
    widths: std::ops::RangeInclusive<usize>,
    rng: &mut R,
) -> CspFormula {
    let n = domain_sizes.len();
    let constraints = (0..m)
        .map(|_| {
            let w = rng.gen_range(widths.clone()).min(n);
            let scope = random_scope(n, w, rng);
            let forbidden = scope
                .iter()
                .map(|&v| rng.gen_range(0..domain_sizes[v]))
                .collect();
            AtomicConstraint::new(scope, forbidden)
        })
        .collect();
    CspFormula::new(domain_sizes, constraints).expect("valid by construction")
}

/// Independent `s_v` uniform in `1..=q_v`.
pub fn random_scheme<R: Rng + ?Sized>(formula: &CspFormula, rng: &mut R) -> ProjectionScheme {
    let s = formula
        .domain_sizes()
        .iter()
        .map(|&q| rng.gen_range(1..=q))
        .collect();
    ProjectionScheme::for_formula(formula, s).expect("valid by construction")
}
