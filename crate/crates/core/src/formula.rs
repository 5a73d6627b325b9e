//! CSP formulas whose constraints are atomic: each constraint is violated by
//! exactly one configuration of its scope.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A constraint violated by exactly one tuple on its scope.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AtomicConstraint {
    scope: Vec<usize>,
    forbidden: Vec<u64>,
}

impl AtomicConstraint {
    /// Unvalidated; [`CspFormula::new`] checks it against the domains.
    pub fn new(scope: Vec<usize>, forbidden: Vec<u64>) -> Self {
        Self { scope, forbidden }
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn forbidden(&self) -> &[u64] {
        &self.forbidden
    }

    pub fn width(&self) -> usize {
        self.scope.len()
    }

    /// True iff `assignment` (a full assignment indexed by variable) hits the
    /// forbidden tuple.
    #[inline]
    pub fn is_violated_by(&self, assignment: &[u64]) -> bool {
        self.scope
            .iter()
            .zip(&self.forbidden)
            .all(|(&v, &f)| assignment[v] == f)
    }
}

/// The formula `(V, Q, C)`: variables `0..n`, domains `0..q_v`, and a multiset
/// of atomic constraints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspFormula {
    domain_sizes: Vec<u64>,
    constraints: Vec<AtomicConstraint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value_labels: Option<Vec<Vec<String>>>,
}

impl CspFormula {
    /// Validates and builds a formula. Duplicate constraints are kept.
    pub fn new(domain_sizes: Vec<u64>, constraints: Vec<AtomicConstraint>) -> Result<Self> {
        if let Some((var, &size)) = domain_sizes.iter().enumerate().find(|(_, &q)| q < 2) {
            return Err(Error::DomainTooSmall { var, size });
        }
        Self::with_min_domain(domain_sizes, constraints, 1)
    }

    /// Like [`CspFormula::new`] but admits single-value domains. Projected
    /// formulas need this since an alphabet may have one symbol.
    pub(crate) fn with_min_domain(
        domain_sizes: Vec<u64>,
        constraints: Vec<AtomicConstraint>,
        min_domain: u64,
    ) -> Result<Self> {
        if let Some((var, &size)) = domain_sizes
            .iter()
            .enumerate()
            .find(|(_, &q)| q < min_domain)
        {
            return Err(Error::DomainTooSmall { var, size });
        }
        let n = domain_sizes.len();
        let mut seen = vec![usize::MAX; n];
        for (index, c) in constraints.iter().enumerate() {
            let malformed = |reason: String| Error::MalformedConstraint { index, reason };
            if c.scope.len() != c.forbidden.len() {
                return Err(malformed(format!(
                    "scope has {} variables but forbidden tuple has {} values",
                    c.scope.len(),
                    c.forbidden.len()
                )));
            }
            for (&v, &x) in c.scope.iter().zip(&c.forbidden) {
                if v >= n {
                    return Err(malformed(format!("variable {v} out of range 0..{n}")));
                }
                if seen[v] == index {
                    return Err(malformed(format!("variable {v} repeated in scope")));
                }
                seen[v] = index;
                if x >= domain_sizes[v] {
                    return Err(malformed(format!(
                        "value {x} out of domain 0..{} of variable {v}",
                        domain_sizes[v]
                    )));
                }
            }
        }
        Ok(Self {
            domain_sizes,
            constraints,
            value_labels: None,
        })
    }

    /// Proper `q`-colorings of a hypergraph: one constraint per (edge, color)
    /// forbidding the edge to be monochromatic in that color. Constraints are
    /// ordered edge-major, color-minor.
    pub fn hypergraph_coloring(n: usize, edges: &[Vec<usize>], q: u64) -> Result<Self> {
        let mut constraints = Vec::with_capacity(edges.len() * q as usize);
        for edge in edges {
            for color in 0..q {
                constraints.push(AtomicConstraint::new(edge.clone(), vec![color; edge.len()]));
            }
        }
        Self::new(vec![q; n], constraints)
    }

    /// Attach cosmetic per-value labels; `labels[v].len()` must equal `q_v`.
    pub fn with_value_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.num_vars() {
            return Err(Error::InvalidParameter(format!(
                "{} label rows for {} variables",
                labels.len(),
                self.num_vars()
            )));
        }
        for (v, row) in labels.iter().enumerate() {
            if row.len() as u64 != self.domain_sizes[v] {
                return Err(Error::InvalidParameter(format!(
                    "variable {v} has {} labels for {} values",
                    row.len(),
                    self.domain_sizes[v]
                )));
            }
        }
        self.value_labels = Some(labels);
        Ok(self)
    }

    pub fn value_labels(&self) -> Option<&[Vec<String>]> {
        self.value_labels.as_deref()
    }

    pub fn num_vars(&self) -> usize {
        self.domain_sizes.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn domain_sizes(&self) -> &[u64] {
        &self.domain_sizes
    }

    pub fn domain_size(&self, v: usize) -> u64 {
        self.domain_sizes[v]
    }

    pub fn constraints(&self) -> &[AtomicConstraint] {
        &self.constraints
    }

    pub fn constraint(&self, c: usize) -> &AtomicConstraint {
        &self.constraints[c]
    }

    /// `Φ(x)`: no constraint sees its forbidden tuple.
    pub fn evaluate(&self, assignment: &[u64]) -> Result<bool> {
        if assignment.len() != self.num_vars() {
            return Err(Error::IncompleteAssignment {
                expected: self.num_vars(),
                got: assignment.len(),
            });
        }
        Ok(!self
            .constraints
            .iter()
            .any(|c| c.is_violated_by(assignment)))
    }

    /// Number of constraints each variable appears in.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.num_vars()];
        for c in &self.constraints {
            for &v in c.scope() {
                occ[v] += 1;
            }
        }
        occ
    }

    /// Product of domain sizes, saturating at `u128::MAX`.
    pub fn state_space_size(&self) -> u128 {
        self.domain_sizes
            .iter()
            .try_fold(1u128, |acc, &q| acc.checked_mul(q as u128))
            .unwrap_or(u128::MAX)
    }
}

/// Evaluates `formula` on `assignment`. See [`CspFormula::evaluate`].
pub fn evaluate(formula: &CspFormula, assignment: &[u64]) -> Result<bool> {
    formula.evaluate(assignment)
}

/// Splits a general constraint into one atomic constraint per violating
/// tuple. The conjunction of the pieces has exactly the same satisfiers.
pub fn atomize_general_constraint(
    scope: &[usize],
    violating: &[Vec<u64>],
) -> Result<Vec<AtomicConstraint>> {
    let mut seen = std::collections::HashSet::with_capacity(violating.len());
    let mut out = Vec::with_capacity(violating.len());
    for (i, tuple) in violating.iter().enumerate() {
        if tuple.len() != scope.len() {
            return Err(Error::MalformedConstraint {
                index: i,
                reason: format!(
                    "violating tuple has {} values for a scope of {}",
                    tuple.len(),
                    scope.len()
                ),
            });
        }
        if !seen.insert(tuple.as_slice()) {
            return Err(Error::DuplicateViolatingTuple(tuple.clone()));
        }
        out.push(AtomicConstraint::new(scope.to_vec(), tuple.clone()));
    }
    Ok(out)
}

/// Constraint-intersection graph plus the per-variable incidence `C(v)`.
///
/// Constraints with the same scope set share one neighbourhood, so adjacency
/// is stored between scope classes. A `q`-colouring edge expands to `q`
/// constraints that are pairwise adjacent; per-constraint lists would be
/// quadratic in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    incidence: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    /// Classes whose scopes meet, the class itself included, ascending.
    class_adjacency: Vec<Vec<usize>>,
    max_degree: usize,
}

impl DependencyGraph {
    pub fn build(formula: &CspFormula) -> Self {
        let n = formula.num_vars();
        let mut incidence = vec![Vec::new(); n];
        let mut class_ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(formula.num_constraints());
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut class_scopes: Vec<Vec<usize>> = Vec::new();
        for (ci, c) in formula.constraints().iter().enumerate() {
            for &v in c.scope() {
                incidence[v].push(ci);
            }
            let mut key = c.scope().to_vec();
            key.sort_unstable();
            let id = *class_ids.entry(key.clone()).or_insert_with(|| {
                members.push(Vec::new());
                class_scopes.push(key);
                members.len() - 1
            });
            members[id].push(ci);
            class_of.push(id);
        }
        let mut classes_of_var = vec![Vec::new(); n];
        for (id, scope) in class_scopes.iter().enumerate() {
            for &v in scope {
                classes_of_var[v].push(id);
            }
        }
        let mut stamp = vec![usize::MAX; members.len()];
        let class_adjacency: Vec<Vec<usize>> = class_scopes
            .iter()
            .enumerate()
            .map(|(id, scope)| {
                stamp[id] = id;
                let mut adj = vec![id];
                for &v in scope {
                    for &other in &classes_of_var[v] {
                        if stamp[other] != id {
                            stamp[other] = id;
                            adj.push(other);
                        }
                    }
                }
                adj.sort_unstable();
                adj
            })
            .collect();
        let max_degree = class_adjacency
            .iter()
            .map(|adj| adj.iter().map(|&o| members[o].len()).sum::<usize>() - 1)
            .max()
            .unwrap_or(0);
        Self {
            incidence,
            class_of,
            members,
            class_adjacency,
            max_degree,
        }
    }

    /// Constraints sharing a variable with `c`, excluding `c`. Grouped by
    /// scope class, ascending within each class.
    pub fn neighbors(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.class_adjacency[self.class_of[c]]
            .iter()
            .flat_map(|&id| self.members[id].iter().copied())
            .filter(move |&o| o != c)
    }

    /// Number of neighbours of `c`.
    pub fn degree(&self, c: usize) -> usize {
        self.class_adjacency[self.class_of[c]]
            .iter()
            .map(|&id| self.members[id].len())
            .sum::<usize>()
            - 1
    }

    /// Constraints whose scope contains `v`, ascending.
    pub fn constraints_of(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn num_constraints(&self) -> usize {
        self.class_of.len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
}

/// Builds the dependency graph. See [`DependencyGraph::build`].
pub fn build_dependency_graph(formula: &CspFormula) -> DependencyGraph {
    DependencyGraph::build(formula)
}

/// Structural statistics driving every regime check and schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaStats {
    pub num_vars: usize,
    pub num_constraints: usize,
    /// `D`: maximum dependency-graph degree, duplicates counted separately.
    pub max_degree: usize,
    /// `k`: maximum scope size.
    pub max_width: usize,
    /// `q`: maximum domain size.
    pub max_domain: u64,
    /// `d`: maximum number of constraints any single variable occurs in.
    pub max_occurrence: usize,
    /// The common domain size when all domains agree.
    pub homogeneous_domain: Option<u64>,
    /// `1/p` exactly, i.e. the smallest scope-product `Π q_v`. `None` when
    /// there are no constraints (`p = 0`).
    #[serde(skip)]
    pub inv_p: Option<BigUint>,
    /// `log2(1/p)`; `+inf` without constraints.
    pub log2_inv_p: f64,
}

impl FormulaStats {
    pub fn p(&self) -> f64 {
        (-self.log2_inv_p).exp2()
    }
}

pub fn compute_stats(formula: &CspFormula) -> FormulaStats {
    let graph = DependencyGraph::build(formula);
    compute_stats_with_graph(formula, &graph)
}

pub fn compute_stats_with_graph(formula: &CspFormula, graph: &DependencyGraph) -> FormulaStats {
    let q = formula.domain_sizes();
    let mut inv_p: Option<BigUint> = None;
    let mut log2_inv_p = f64::INFINITY;
    for c in formula.constraints() {
        let log_sum: f64 = c.scope().iter().map(|&v| (q[v] as f64).log2()).sum();
        log2_inv_p = log2_inv_p.min(log_sum);
        let product = c
            .scope()
            .iter()
            .fold(BigUint::from(1u32), |acc, &v| acc * q[v]);
        if inv_p.as_ref().is_none_or(|best| product < *best) {
            inv_p = Some(product);
        }
    }
    let homogeneous_domain = match q.first() {
        Some(&first) if q.iter().all(|&x| x == first) => Some(first),
        _ => None,
    };
    FormulaStats {
        num_vars: formula.num_vars(),
        num_constraints: formula.num_constraints(),
        max_degree: graph.max_degree(),
        max_width: formula
            .constraints()
            .iter()
            .map(|c| c.width())
            .max()
            .unwrap_or(0),
        max_domain: q.iter().copied().max().unwrap_or(0),
        max_occurrence: formula.occurrences().into_iter().max().unwrap_or(0),
        homogeneous_domain,
        inv_p,
        log2_inv_p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn clause(scope: &[usize], forbidden: &[u64]) -> AtomicConstraint {
        AtomicConstraint::new(scope.to_vec(), forbidden.to_vec())
    }

    fn count_solutions(f: &CspFormula) -> usize {
        let q = f.domain_sizes();
        let mut x = vec![0u64; q.len()];
        let mut count = 0;
        loop {
            if f.evaluate(&x).unwrap() {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == q.len() {
                    return count;
                }
                x[i] += 1;
                if x[i] < q[i] {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }

    fn random_formula(rng: &mut impl Rng, n: usize, m: usize, width: usize, q: u64) -> CspFormula {
        let constraints = (0..m)
            .map(|_| {
                let mut scope: Vec<usize> = (0..n).collect();
                for i in 0..width {
                    let j = rng.gen_range(i..n);
                    scope.swap(i, j);
                }
                scope.truncate(width);
                let forbidden = (0..width).map(|_| rng.gen_range(0..q)).collect();
                AtomicConstraint::new(scope, forbidden)
            })
            .collect();
        CspFormula::new(vec![q; n], constraints).unwrap()
    }

    #[test]
    fn single_clause_has_three_solutions() {
        let f = CspFormula::new(vec![2, 2], vec![clause(&[0, 1], &[1, 1])]).unwrap();
        assert_eq!(count_solutions(&f), 3);
        assert!(!f.evaluate(&[1, 1]).unwrap());
        assert!(f.evaluate(&[0, 1]).unwrap());
    }

    #[test]
    fn rejects_malformed_input() {
        let dup = CspFormula::new(vec![2, 2], vec![clause(&[0, 0], &[1, 1])]);
        assert!(matches!(
            dup,
            Err(Error::MalformedConstraint { index: 0, .. })
        ));
        let range = CspFormula::new(vec![2, 2], vec![clause(&[0, 2], &[1, 1])]);
        assert!(matches!(range, Err(Error::MalformedConstraint { .. })));
        let value = CspFormula::new(vec![2, 3], vec![clause(&[0, 1], &[0, 3])]);
        assert!(matches!(value, Err(Error::MalformedConstraint { .. })));
        let arity = CspFormula::new(vec![2, 2], vec![clause(&[0, 1], &[0])]);
        assert!(matches!(arity, Err(Error::MalformedConstraint { .. })));
        assert_eq!(
            CspFormula::new(vec![2, 1], vec![]),
            Err(Error::DomainTooSmall { var: 1, size: 1 })
        );
    }

    #[test]
    fn evaluate_requires_full_assignment() {
        let f = CspFormula::new(vec![2, 2], vec![clause(&[0, 1], &[1, 1])]).unwrap();
        assert_eq!(
            f.evaluate(&[1]),
            Err(Error::IncompleteAssignment {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn coloring_edge_forbids_monochrome_tuples() {
        let f = CspFormula::hypergraph_coloring(3, &[vec![0, 1, 2]], 2).unwrap();
        assert_eq!(f.constraints()[0].forbidden(), &[0, 0, 0]);
        assert_eq!(f.constraints()[1].forbidden(), &[1, 1, 1]);
    }

    #[test]
    fn coloring_encoding_bijects_with_proper_colorings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(3..=7);
            let q = rng.gen_range(2..=4u64);
            let num_edges = rng.gen_range(1..=4);
            let edges: Vec<Vec<usize>> = (0..num_edges)
                .map(|_| {
                    let mut e: Vec<usize> = (0..n).collect();
                    for i in 0..3 {
                        let j = rng.gen_range(i..n);
                        e.swap(i, j);
                    }
                    e.truncate(3);
                    e
                })
                .collect();
            let f = CspFormula::hypergraph_coloring(n, &edges, q).unwrap();
            assert_eq!(f.num_constraints(), q as usize * edges.len());
            // direct count of colorings with no monochromatic edge
            let total = q.pow(n as u32);
            let mut proper = 0;
            for code in 0..total {
                let colors: Vec<u64> = (0..n).map(|i| (code / q.pow(i as u32)) % q).collect();
                let ok = edges
                    .iter()
                    .all(|e| !e.iter().all(|&v| colors[v] == colors[e[0]]));
                assert_eq!(ok, f.evaluate(&colors).unwrap());
                proper += ok as usize;
            }
            assert_eq!(proper, count_solutions(&f));
        }
    }

    #[test]
    fn stats_on_small_formulas() {
        let disjoint = CspFormula::new(
            vec![2; 6],
            vec![
                clause(&[0, 1, 2], &[0, 0, 0]),
                clause(&[3, 4, 5], &[1, 1, 1]),
            ],
        )
        .unwrap();
        let s = compute_stats(&disjoint);
        assert_eq!((s.max_degree, s.max_width), (0, 3));
        assert_eq!(s.log2_inv_p, 3.0);
        assert_eq!(s.inv_p, Some(BigUint::from(8u32)));

        let shared = CspFormula::new(
            vec![2; 5],
            vec![
                clause(&[0, 1, 2], &[0, 0, 0]),
                clause(&[2, 3, 4], &[1, 1, 1]),
            ],
        )
        .unwrap();
        assert_eq!(compute_stats(&shared).max_degree, 1);

        let mixed = CspFormula::new(vec![2, 3, 4], vec![clause(&[0, 1, 2], &[1, 2, 3])]).unwrap();
        let s = compute_stats(&mixed);
        assert!((s.log2_inv_p - 24f64.log2()).abs() < 1e-12);
        assert_eq!(s.inv_p, Some(BigUint::from(24u32)));
        assert_eq!(s.max_domain, 4);
        assert_eq!(s.homogeneous_domain, None);

        let empty = compute_stats(&CspFormula::new(vec![2; 3], vec![]).unwrap());
        assert_eq!(empty.max_degree, 0);
        assert!(empty.log2_inv_p.is_infinite());
        assert_eq!(empty.inv_p, None);
    }

    fn sorted_neighbors(g: &DependencyGraph, c: usize) -> Vec<usize> {
        let mut v: Vec<usize> = g.neighbors(c).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn coloring_degree_without_quadratic_lists() {
        // two edges sharing vertex 2, q = 5000: each constraint meets the
        // other 4999 of its edge and all 5000 of the other edge
        let f = CspFormula::hypergraph_coloring(5, &[vec![0, 1, 2], vec![2, 3, 4]], 5000).unwrap();
        let g = build_dependency_graph(&f);
        assert_eq!(g.max_degree(), 9999);
        assert_eq!(g.degree(0), 9999);
        assert_eq!(g.neighbors(0).count(), 9999);
    }

    #[test]
    fn dependency_graph_shapes() {
        let chain = CspFormula::new(
            vec![2; 7],
            vec![
                clause(&[0, 1, 2], &[0, 0, 0]),
                clause(&[2, 3, 4], &[0, 0, 0]),
                clause(&[4, 5, 6], &[0, 0, 0]),
            ],
        )
        .unwrap();
        let g = build_dependency_graph(&chain);
        assert_eq!(sorted_neighbors(&g, 0), [1]);
        assert_eq!(sorted_neighbors(&g, 1), [0, 2]);
        assert_eq!(sorted_neighbors(&g, 2), [1]);

        let dup = CspFormula::new(
            vec![2; 2],
            vec![clause(&[0, 1], &[0, 0]), clause(&[0, 1], &[0, 0])],
        )
        .unwrap();
        let g = build_dependency_graph(&dup);
        assert_eq!(sorted_neighbors(&g, 0), [1]);
        assert_eq!(sorted_neighbors(&g, 1), [0]);
        assert_eq!(compute_stats(&dup).max_degree, 1);
    }

    #[test]
    fn dependency_graph_matches_pairwise_intersection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let f = random_formula(&mut rng, 12, 5, 3, 2);
            let g = build_dependency_graph(&f);
            for a in 0..5 {
                let naive: Vec<usize> = (0..5)
                    .filter(|&b| {
                        b != a
                            && f.constraint(a)
                                .scope()
                                .iter()
                                .any(|v| f.constraint(b).scope().contains(v))
                    })
                    .collect();
                assert_eq!(sorted_neighbors(&g, a), naive);
                assert_eq!(g.degree(a), naive.len());
            }
        }
    }

    #[test]
    fn atomize_examples() {
        let eq = atomize_general_constraint(&[0, 1], &[vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(eq.len(), 2);
        assert!(atomize_general_constraint(&[0, 1], &[]).unwrap().is_empty());
        assert_eq!(
            atomize_general_constraint(&[0, 1], &[vec![0, 1], vec![0, 1]]),
            Err(Error::DuplicateViolatingTuple(vec![0, 1]))
        );

        let nae = atomize_general_constraint(&[0, 1, 2], &[vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        let f = CspFormula::new(vec![2; 3], nae).unwrap();
        assert_eq!(count_solutions(&f), 6);
    }

    #[test]
    fn evaluate_agrees_with_per_constraint_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_formula(&mut rng, 10, 8, 4, 3);
        for _ in 0..1000 {
            let x: Vec<u64> = (0..10).map(|_| rng.gen_range(0..3)).collect();
            let naive = f.constraints().iter().all(|c| {
                let restricted: Vec<u64> = c.scope().iter().map(|&v| x[v]).collect();
                restricted != c.forbidden()
            });
            assert_eq!(f.evaluate(&x).unwrap(), naive);
        }
    }

    proptest! {
        #[test]
        fn atomized_constraint_is_extensionally_equal(
            domains in proptest::collection::vec(2u64..5, 1..5),
            mask in proptest::collection::vec(any::<bool>(), 256),
        ) {
            let scope: Vec<usize> = (0..domains.len()).collect();
            let total: u64 = domains.iter().product();
            let decode = |mut code: u64| -> Vec<u64> {
                domains.iter().map(|&q| { let x = code % q; code /= q; x }).collect()
            };
            let violating: Vec<Vec<u64>> = (0..total)
                .filter(|&code| mask[code as usize % mask.len()])
                .map(decode)
                .collect();
            let atoms = atomize_general_constraint(&scope, &violating).unwrap();
            let f = CspFormula::new(domains.clone(), atoms).unwrap();
            for code in 0..total {
                let x = decode(code);
                prop_assert_eq!(f.evaluate(&x).unwrap(), !violating.contains(&x));
            }
        }

        #[test]
        fn degree_is_invariant_under_reordering(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_formula(&mut rng, 15, 10, 3, 2);
            let mut cs = f.constraints().to_vec();
            cs.reverse();
            cs.rotate_left(seed as usize % 10);
            let g = CspFormula::new(f.domain_sizes().to_vec(), cs).unwrap();
            prop_assert_eq!(compute_stats(&f), compute_stats(&g));
        }
    }
}
