use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::formula::CspFormula;
use crate::projection::ProjectionScheme;
use crate::sampler::PartialProjectedConfig;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A finite distribution stored as integer weights over tuples.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactDistribution {
    counts: BTreeMap<Vec<u64>, u64>,
    total: u64,
}

impl ExactDistribution {
    pub fn from_counts(counts: BTreeMap<Vec<u64>, u64>) -> Self {
        let counts: BTreeMap<_, _> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let total = counts.values().sum();
        Self { counts, total }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &BTreeMap<Vec<u64>, u64> {
        &self.counts
    }

    pub fn count(&self, key: &[u64]) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// Exact probability; `0/1` off the support.
    pub fn prob(&self, key: &[u64]) -> Ratio<u64> {
        if self.total == 0 {
            return Ratio::from_integer(0);
        }
        Ratio::new(self.count(key), self.total)
    }

    pub fn probabilities(&self) -> BTreeMap<Vec<u64>, f64> {
        self.counts
            .iter()
            .map(|(k, &c)| (k.clone(), c as f64 / self.total as f64))
            .collect()
    }

    /// Image under `f`, weights summed.
    pub fn pushforward(&self, mut f: impl FnMut(&[u64]) -> Vec<u64>) -> Self {
        let mut out = BTreeMap::new();
        for (k, &c) in &self.counts {
            *out.entry(f(k)).or_insert(0) += c;
        }
        Self::from_counts(out)
    }

    /// Restriction to keys satisfying `keep`, unnormalized.
    pub fn filter(&self, mut keep: impl FnMut(&[u64]) -> bool) -> Self {
        Self::from_counts(
            self.counts
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, &c)| (k.clone(), c))
                .collect(),
        )
    }
}

/// All solutions of a small formula in lexicographic order (variable 0 most
/// significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistributions {
    domain_sizes: Vec<u64>,
    solutions: Vec<Vec<u64>>,
}

impl ExactDistributions {
    pub fn num_solutions(&self) -> usize {
        self.solutions.len()
    }

    pub fn solutions(&self) -> &[Vec<u64>] {
        &self.solutions
    }

    pub fn domain_sizes(&self) -> &[u64] {
        &self.domain_sizes
    }

    /// `μ`, uniform over solutions.
    pub fn mu(&self) -> ExactDistribution {
        ExactDistribution::from_counts(self.solutions.iter().map(|x| (x.clone(), 1)).collect())
    }

    /// `ν = h(μ)`.
    pub fn nu(&self, scheme: &ProjectionScheme) -> Result<ExactDistribution> {
        if self.solutions.is_empty() {
            return Err(Error::NoSolutions);
        }
        Ok(self.mu().pushforward(|x| scheme.project_assignment(x)))
    }

    /// `μ_S^{y_Λ}`: the law of `X_S` for `X ~ μ` conditioned on `h(X)_Λ = y_Λ`.
    pub fn conditional(
        &self,
        scheme: &ProjectionScheme,
        y: &PartialProjectedConfig<'_>,
        s: &[usize],
    ) -> Result<ExactDistribution> {
        let consistent = self.mu().filter(|x| {
            x.iter().enumerate().all(|(v, &xv)| {
                y.get(v)
                    .is_none_or(|yv| scheme.project_unchecked(v, xv) == yv)
            })
        });
        if consistent.total() == 0 {
            return Err(Error::EmptySupport);
        }
        Ok(consistent.pushforward(|x| s.iter().map(|&v| x[v]).collect()))
    }
}

/// Backtracking over variables by index, values ascending. Each constraint
/// tracks how many assigned scope positions match its forbidden tuple; a
/// branch dies when some count reaches the width.
pub fn enumerate_solutions(formula: &CspFormula, budget: u64) -> Result<ExactDistributions> {
    let q = formula.domain_sizes();
    let states = q
        .iter()
        .try_fold(1u128, |acc, &qv| acc.checked_mul(qv as u128))
        .unwrap_or(u128::MAX);
    if states > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: states.to_string(),
            budget,
        });
    }
    let n = formula.num_vars();
    if formula.constraints().iter().any(|c| c.width() == 0) {
        return Ok(ExactDistributions {
            domain_sizes: q.to_vec(),
            solutions: Vec::new(),
        });
    }
    // (constraint, forbidden value) pairs per variable
    let mut watch: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for (ci, c) in formula.constraints().iter().enumerate() {
        for (&v, &f) in c.scope().iter().zip(c.forbidden()) {
            watch[v].push((ci, f));
        }
    }
    let widths: Vec<usize> = formula.constraints().iter().map(|c| c.width()).collect();
    let mut matched = vec![0usize; formula.num_constraints()];
    let mut x = vec![0u64; n];
    let mut solutions = Vec::new();

    fn assign(
        v: usize,
        value: u64,
        x: &mut [u64],
        watch: &[Vec<(usize, u64)>],
        matched: &mut [usize],
        widths: &[usize],
    ) -> bool {
        x[v] = value;
        let mut ok = true;
        for &(c, f) in &watch[v] {
            if f == value {
                matched[c] += 1;
                ok &= matched[c] < widths[c];
            }
        }
        ok
    }

    fn unassign(v: usize, value: u64, watch: &[Vec<(usize, u64)>], matched: &mut [usize]) {
        for &(c, f) in &watch[v] {
            if f == value {
                matched[c] -= 1;
            }
        }
    }

    fn recurse(
        v: usize,
        q: &[u64],
        x: &mut [u64],
        watch: &[Vec<(usize, u64)>],
        matched: &mut [usize],
        widths: &[usize],
        out: &mut Vec<Vec<u64>>,
    ) {
        if v == q.len() {
            out.push(x.to_vec());
            return;
        }
        for value in 0..q[v] {
            if assign(v, value, x, watch, matched, widths) {
                recurse(v + 1, q, x, watch, matched, widths, out);
            }
            unassign(v, value, watch, matched);
        }
    }

    recurse(0, q, &mut x, &watch, &mut matched, &widths, &mut solutions);
    Ok(ExactDistributions {
        domain_sizes: q.to_vec(),
        solutions,
    })
}

/// `ν` over `Σ` for a formula small enough to enumerate.
pub fn exact_projected(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    budget: u64,
) -> Result<ExactDistribution> {
    enumerate_solutions(formula, budget)?.nu(scheme)
}

/// `μ_S^{y_Λ}` for a formula small enough to enumerate.
pub fn exact_conditional(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    y: &PartialProjectedConfig<'_>,
    s: &[usize],
    budget: u64,
) -> Result<ExactDistribution> {
    enumerate_solutions(formula, budget)?.conditional(scheme, y, s)
}

/// `ν_v^{y_{V∖{v}}}` read off the `ν` table: weights of `y'_v` over the
/// projected configurations agreeing with `y` off `v`.
pub fn nu_single_site(nu: &ExactDistribution, y: &[u64], v: usize) -> Result<ExactDistribution> {
    let slice = nu
        .filter(|z| z.iter().enumerate().all(|(u, &zu)| u == v || zu == y[u]))
        .pushforward(|z| vec![z[v]]);
    if slice.total() == 0 {
        return Err(Error::EmptySupport);
    }
    Ok(slice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::AtomicConstraint;
    use crate::sampler::Support;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cnf(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize) -> CspFormula {
        let constraints = (0..m)
            .map(|_| {
                let mut vars: Vec<usize> = (0..n).collect();
                for i in 0..k {
                    let j = rng.gen_range(i..n);
                    vars.swap(i, j);
                }
                vars.truncate(k);
                AtomicConstraint::new(vars, (0..k).map(|_| rng.gen_range(0..2)).collect())
            })
            .collect();
        CspFormula::new(vec![2; n], constraints).unwrap()
    }

    fn naive(formula: &CspFormula) -> Vec<Vec<u64>> {
        let q = formula.domain_sizes();
        let total: u64 = q.iter().product();
        let mut out = Vec::new();
        for code in 0..total {
            let mut rest = code;
            let mut x = vec![0; q.len()];
            for v in (0..q.len()).rev() {
                x[v] = rest % q[v];
                rest /= q[v];
            }
            if formula.evaluate(&x).unwrap() {
                out.push(x);
            }
        }
        out
    }

    #[test]
    fn single_clause_has_three_solutions() {
        let f = CspFormula::new(
            vec![2, 2],
            vec![AtomicConstraint::new(vec![0, 1], vec![0, 0])],
        )
        .unwrap();
        let e = enumerate_solutions(&f, DEFAULT_BUDGET).unwrap();
        assert_eq!(e.solutions(), &[vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(e.mu().prob(&[1, 0]), Ratio::new(1, 3));
    }

    #[test]
    fn covering_constraints_leave_nothing() {
        let constraints = (0..4)
            .map(|t| AtomicConstraint::new(vec![0, 1], vec![t & 1, t >> 1]))
            .collect();
        let f = CspFormula::new(vec![2, 2], constraints).unwrap();
        let e = enumerate_solutions(&f, DEFAULT_BUDGET).unwrap();
        assert_eq!(e.num_solutions(), 0);
        assert_eq!(
            e.nu(&ProjectionScheme::identity(&f)),
            Err(Error::NoSolutions)
        );
    }

    #[test]
    fn matches_full_scan_and_is_order_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..20 {
            let f = random_cnf(&mut rng, 10, 25, 3);
            let e = enumerate_solutions(&f, DEFAULT_BUDGET).unwrap();
            assert_eq!(e.solutions(), naive(&f).as_slice());
            let mut shuffled = f.constraints().to_vec();
            shuffled.reverse();
            let g = CspFormula::new(vec![2; 10], shuffled).unwrap();
            assert_eq!(
                enumerate_solutions(&g, DEFAULT_BUDGET).unwrap().solutions(),
                e.solutions()
            );
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = CspFormula::new(vec![10; 8], vec![]).unwrap();
        assert!(matches!(
            enumerate_solutions(&f, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn projected_extremes_and_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let f = random_cnf(&mut rng, 8, 12, 3);
        let e = enumerate_solutions(&f, DEFAULT_BUDGET).unwrap();
        let id = e.nu(&ProjectionScheme::identity(&f)).unwrap();
        assert_eq!(id, e.mu());
        let triv = e.nu(&ProjectionScheme::trivial(&f)).unwrap();
        assert_eq!(triv.support_size(), 1);
        assert_eq!(triv.prob(&[0; 8]), Ratio::from_integer(1));

        let q = vec![5, 4, 3, 6];
        let g = CspFormula::new(
            q.clone(),
            vec![
                AtomicConstraint::new(vec![0, 1], vec![2, 3]),
                AtomicConstraint::new(vec![1, 2, 3], vec![0, 0, 5]),
                AtomicConstraint::new(vec![3], vec![1]),
            ],
        )
        .unwrap();
        let h = ProjectionScheme::for_formula(&g, vec![2, 3, 1, 4]).unwrap();
        let nu = exact_projected(&g, &h, DEFAULT_BUDGET).unwrap();
        let sols = naive(&g);
        for (y, &count) in nu.counts() {
            let recount = sols
                .iter()
                .filter(|x| &h.project_assignment(x) == y)
                .count() as u64;
            assert_eq!(count, recount);
        }
        assert_eq!(nu.total(), sols.len() as u64);
    }

    #[test]
    fn conditional_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let f = random_cnf(&mut rng, 7, 8, 3);
        let e = enumerate_solutions(&f, DEFAULT_BUDGET).unwrap();
        let h = ProjectionScheme::identity(&f);

        let none = [false; 7];
        let y = [0u64; 7];
        let marg = e
            .conditional(
                &h,
                &PartialProjectedConfig::new(&y, Support::Subset(&none)),
                &[2, 5],
            )
            .unwrap();
        assert_eq!(marg, e.mu().pushforward(|x| vec![x[2], x[5]]));

        let sol = e.solutions()[e.num_solutions() / 2].clone();
        let all: Vec<usize> = (0..7).collect();
        let point = e
            .conditional(&h, &PartialProjectedConfig::full(&sol), &all)
            .unwrap();
        assert_eq!(point.support_size(), 1);
        assert_eq!(point.count(&sol), 1);

        let g = CspFormula::new(vec![2, 2], vec![AtomicConstraint::new(vec![0], vec![0])]).unwrap();
        let eg = enumerate_solutions(&g, DEFAULT_BUDGET).unwrap();
        let hg = ProjectionScheme::identity(&g);
        let y = [0u64, 0];
        assert_eq!(
            eg.conditional(&hg, &PartialProjectedConfig::all_except(&y, 1), &[1]),
            Err(Error::EmptySupport)
        );
    }

    #[test]
    fn conditional_matches_filter_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..30 {
            let f = random_cnf(&mut rng, 8, 10, 3);
            let e = enumerate_solutions(&f, DEFAULT_BUDGET).unwrap();
            if e.num_solutions() == 0 {
                continue;
            }
            let marks: Vec<bool> = (0..8).map(|_| rng.gen_bool(0.5)).collect();
            let h = ProjectionScheme::from_marks(&f, &marks);
            let base = &e.solutions()[rng.gen_range(0..e.num_solutions())];
            let y = h.project_assignment(base);
            let mask: Vec<bool> = (0..8).map(|_| rng.gen_bool(0.6)).collect();
            let s = [1usize, 4, 6];
            let got = e
                .conditional(
                    &h,
                    &PartialProjectedConfig::new(&y, Support::Subset(&mask)),
                    &s,
                )
                .unwrap();
            let mut expect: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
            for x in e.solutions() {
                let hx = h.project_assignment(x);
                if (0..8).all(|v| !mask[v] || hx[v] == y[v]) {
                    *expect.entry(s.iter().map(|&v| x[v]).collect()).or_insert(0) += 1;
                }
            }
            assert_eq!(got, ExactDistribution::from_counts(expect));
        }
    }
}
