//! The three projection constructions: deterministic intervals for large
//! homogeneous domains, Moser–Tardos marking for `(k, d)`-CSPs, and the mixed
//! large/small scheme for general atomic formulas.

use std::collections::BTreeSet;

use rand::Rng;

use super::entropy::{constraint_sums, judge, ENTROPY_TOLERANCE};
use super::{verify_entropy_criterion, ProjectionScheme};
use crate::error::{Error, Result};
use crate::formula::{compute_stats_with_graph, CspFormula, DependencyGraph};

pub(crate) fn check_alpha_beta(alpha: f64, beta: f64) -> Result<()> {
    if 0.0 < beta && beta < alpha && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlphaBeta { alpha, beta })
    }
}

fn check_delta(delta_fail: f64) -> Result<()> {
    if delta_fail > 0.0 && delta_fail < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "construction failure probability {delta_fail} not in (0, 1)"
        )))
    }
}

/// `ceil(q^((2 - α - β)/2))`, clamped to `1..=q`.
pub fn interval_alphabet_size(q: u64, alpha: f64, beta: f64) -> u64 {
    let s = (q as f64).powf((2.0 - alpha - beta) / 2.0).ceil();
    (s as u64).clamp(1, q)
}

/// Number of independent Moser–Tardos attempts for failure probability `δ`.
pub fn marking_attempts(delta_fail: f64) -> u64 {
    ((1.0 / delta_fail).log2().ceil() as u64).max(1)
}

/// Resampling cap per attempt, `ceil(4n/k)`.
pub fn marking_resample_cap(n: usize, k: usize) -> u64 {
    if k == 0 {
        return 1;
    }
    ((4 * n) as u64).div_ceil(k as u64).max(1)
}

/// Feasible marked-count window `[ceil((1-α)k), floor((1-β)k)]`.
pub fn marking_window(k: usize, alpha: f64, beta: f64) -> (usize, usize) {
    let lo = ((1.0 - alpha) * k as f64 - ENTROPY_TOLERANCE)
        .ceil()
        .max(0.0) as usize;
    let hi = ((1.0 - beta) * k as f64 + ENTROPY_TOLERANCE)
        .floor()
        .max(0.0) as usize;
    (lo, hi)
}

/// Deterministic interval scheme for a homogeneous domain `[q]`.
pub fn construct_interval_scheme(
    formula: &CspFormula,
    alpha: f64,
    beta: f64,
) -> Result<ProjectionScheme> {
    check_alpha_beta(alpha, beta)?;
    let q = homogeneous_domain(formula)?;
    let qf = q as f64;
    let mid = qf.powf((alpha + beta) / 2.0);
    if mid < 7.0 {
        return Err(Error::PreconditionViolated(format!(
            "7 <= q^((alpha+beta)/2) fails: q^((alpha+beta)/2) = {mid:.4}"
        )));
    }
    if mid > qf / 6.0 {
        return Err(Error::PreconditionViolated(format!(
            "q^((alpha+beta)/2) <= q/6 fails: {mid:.4} > {:.4}",
            qf / 6.0
        )));
    }
    if qf.log2() < 1.0 / (alpha - beta) {
        return Err(Error::PreconditionViolated(format!(
            "log2 q >= 1/(alpha-beta) fails: {:.4} < {:.4}",
            qf.log2(),
            1.0 / (alpha - beta)
        )));
    }
    let s = interval_alphabet_size(q, alpha, beta);
    let scheme = ProjectionScheme::for_formula(formula, vec![s; formula.num_vars()])?;
    ensure_criterion(formula, &scheme, alpha, beta)?;
    Ok(scheme)
}

/// Moser–Tardos marking for a formula on a homogeneous domain: marked
/// variables keep their value, unmarked ones are projected to a single
/// symbol, and every constraint must end with between `ceil((1-α)k_c)` and
/// `floor((1-β)k_c)` marked variables.
pub fn construct_marking_scheme<R: Rng + ?Sized>(
    formula: &CspFormula,
    alpha: f64,
    beta: f64,
    delta_fail: f64,
    rng: &mut R,
) -> Result<ProjectionScheme> {
    check_alpha_beta(alpha, beta)?;
    check_delta(delta_fail)?;
    homogeneous_domain(formula)?;
    let windows: Vec<(usize, usize)> = formula
        .constraints()
        .iter()
        .map(|c| marking_window(c.width(), alpha, beta))
        .collect();
    if let Some(ci) = windows.iter().position(|&(lo, hi)| lo > hi) {
        return Err(Error::ConstructionFailed(format!(
            "constraint {ci} of width {} admits no marked count in [(1-alpha)k, (1-beta)k]",
            formula.constraint(ci).width()
        )));
    }
    let search = MarkSearch {
        formula,
        graph: DependencyGraph::build(formula),
        resamplable: vec![true; formula.num_vars()],
        mark_probability: (2.0 - alpha - beta) / 2.0,
        base_alphabet: vec![1; formula.num_vars()],
    };
    let marked_count = |ci: usize, alphabet: &[u64]| {
        let c = formula.constraint(ci);
        c.scope()
            .iter()
            .filter(|&&v| alphabet[v] == formula.domain_size(v))
            .count()
    };
    let alphabet = search.run(delta_fail, rng, |ci, alphabet| {
        let t = marked_count(ci, alphabet);
        let (lo, hi) = windows[ci];
        t < lo || t > hi
    })?;
    let scheme = ProjectionScheme::for_formula(formula, alphabet)?;
    ensure_criterion(formula, &scheme, alpha, beta)?;
    Ok(scheme)
}

/// General atomic formulas: variables with `log2 q_v >= 5/(α-β)` get the
/// interval scheme, the rest are marked by Moser–Tardos against the entropy
/// criterion itself.
pub fn construct_general_scheme<R: Rng + ?Sized>(
    formula: &CspFormula,
    alpha: f64,
    beta: f64,
    delta_fail: f64,
    rng: &mut R,
) -> Result<ProjectionScheme> {
    check_alpha_beta(alpha, beta)?;
    check_delta(delta_fail)?;
    let graph = DependencyGraph::build(formula);
    let stats = compute_stats_with_graph(formula, &graph);
    let log_d = if stats.max_degree == 0 {
        0.0
    } else {
        (stats.max_degree as f64).log2()
    };
    let required = 25.0 / (alpha - beta).powi(3) * (log_d + 3.0);
    if stats.log2_inv_p < required {
        return Err(Error::PreconditionViolated(format!(
            "log2(1/p) >= 25/(alpha-beta)^3 (log2 D + 3) fails: {:.4} < {:.4}",
            stats.log2_inv_p, required
        )));
    }
    let threshold = 5.0 / (alpha - beta);
    let q = formula.domain_sizes();
    let large: Vec<bool> = q
        .iter()
        .map(|&qv| (qv as f64).log2() >= threshold)
        .collect();
    let base_alphabet: Vec<u64> = q
        .iter()
        .zip(&large)
        .map(|(&qv, &is_large)| {
            if is_large {
                interval_alphabet_size(qv, alpha, beta)
            } else {
                1
            }
        })
        .collect();
    let search = MarkSearch {
        formula,
        graph,
        resamplable: large.iter().map(|&l| !l).collect(),
        mark_probability: (2.0 - alpha - beta) / 2.0,
        base_alphabet,
    };
    let alphabet = search.run(delta_fail, rng, |ci, alphabet| {
        let e = judge(
            constraint_sums(formula.constraint(ci), q, alphabet),
            alpha,
            beta,
        );
        !(e.upper_ok && e.lower_ok)
    })?;
    let scheme = ProjectionScheme::for_formula(formula, alphabet)?;
    ensure_criterion(formula, &scheme, alpha, beta)?;
    Ok(scheme)
}

fn homogeneous_domain(formula: &CspFormula) -> Result<u64> {
    let q = formula.domain_sizes();
    match q.first() {
        Some(&first) if q.iter().all(|&x| x == first) => Ok(first),
        _ => Err(Error::PreconditionViolated(
            "construction needs a homogeneous domain [q]".into(),
        )),
    }
}

fn ensure_criterion(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    alpha: f64,
    beta: f64,
) -> Result<()> {
    let report = verify_entropy_criterion(formula, scheme, alpha, beta);
    match report.first_failure() {
        None if report.balanced => Ok(()),
        None => Err(Error::ConstructionFailed("scheme is not balanced".into())),
        Some(ci) => Err(Error::ConstructionFailed(format!(
            "constraint {ci} violates the entropy criterion: {:?}",
            report.constraints[ci]
        ))),
    }
}

/// Moser–Tardos over variable marks. Resamplable variables are marked
/// (`s_v = q_v`) with `mark_probability`, otherwise `s_v = 1`; the rest keep
/// their entry of `base_alphabet`.
struct MarkSearch<'a> {
    formula: &'a CspFormula,
    graph: DependencyGraph,
    resamplable: Vec<bool>,
    mark_probability: f64,
    base_alphabet: Vec<u64>,
}

impl MarkSearch<'_> {
    fn run<R, F>(&self, delta_fail: f64, rng: &mut R, is_bad: F) -> Result<Vec<u64>>
    where
        R: Rng + ?Sized,
        F: Fn(usize, &[u64]) -> bool,
    {
        let n = self.formula.num_vars();
        let m = self.formula.num_constraints();
        let k = self
            .formula
            .constraints()
            .iter()
            .map(|c| c.width())
            .max()
            .unwrap_or(0);
        let attempts = marking_attempts(delta_fail);
        let cap = marking_resample_cap(n, k);
        let mut alphabet = self.base_alphabet.clone();
        let mut stamp = vec![usize::MAX; m];

        for _ in 0..attempts {
            for (v, s) in alphabet.iter_mut().enumerate() {
                if self.resamplable[v] {
                    *s = self.draw_mark(v, rng);
                }
            }
            let mut bad: BTreeSet<usize> = (0..m).filter(|&ci| is_bad(ci, &alphabet)).collect();
            let mut resamples = 0u64;
            loop {
                let Some(&ci) = bad.first() else {
                    return Ok(alphabet);
                };
                if resamples == cap {
                    break;
                }
                let scope = self.formula.constraint(ci).scope();
                if !scope.iter().any(|&v| self.resamplable[v]) {
                    return Err(Error::ConstructionFailed(format!(
                        "constraint {ci} violates the criterion and has no resamplable variable"
                    )));
                }
                resamples += 1;
                for &v in scope {
                    if self.resamplable[v] {
                        alphabet[v] = self.draw_mark(v, rng);
                    }
                }
                // re-evaluate c and every constraint sharing a variable with it
                let tick = resamples as usize;
                for other in std::iter::once(ci).chain(self.graph.neighbors(ci)) {
                    if stamp[other] == tick {
                        continue;
                    }
                    stamp[other] = tick;
                    if is_bad(other, &alphabet) {
                        bad.insert(other);
                    } else {
                        bad.remove(&other);
                    }
                }
            }
            stamp.iter_mut().for_each(|s| *s = usize::MAX);
        }
        Err(Error::ConstructionFailed(format!(
            "all {attempts} Moser-Tardos attempts exhausted the cap of {cap} resamples"
        )))
    }

    fn draw_mark<R: Rng + ?Sized>(&self, v: usize, rng: &mut R) -> u64 {
        if rng.gen_bool(self.mark_probability) {
            self.formula.domain_size(v)
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::AtomicConstraint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_kd_formula(rng: &mut impl Rng, n: usize, m: usize, k: usize, q: u64) -> CspFormula {
        let constraints = (0..m)
            .map(|_| {
                let mut vars: Vec<usize> = (0..n).collect();
                for i in 0..k {
                    let j = rng.gen_range(i..n);
                    vars.swap(i, j);
                }
                vars.truncate(k);
                let forbidden = (0..k).map(|_| rng.gen_range(0..q)).collect();
                AtomicConstraint::new(vars, forbidden)
            })
            .collect();
        CspFormula::new(vec![q; n], constraints).unwrap()
    }

    #[test]
    fn interval_alphabet_for_650_colors() {
        let f = CspFormula::hypergraph_coloring(13, &[(0..13).collect()], 650).unwrap();
        let h = construct_interval_scheme(&f, 7.0 / 9.0, 2.0 / 3.0).unwrap();
        let expected = 650f64.powf(5.0 / 18.0).ceil() as u64;
        assert_eq!(expected, 7);
        assert!(h.alphabet_sizes().iter().all(|&s| s == expected));
        assert!(verify_entropy_criterion(&f, &h, 7.0 / 9.0, 2.0 / 3.0).pass());
    }

    #[test]
    fn interval_rejects_small_domains() {
        let f = CspFormula::hypergraph_coloring(3, &[vec![0, 1, 2]], 6).unwrap();
        for (a, b) in [(7.0 / 9.0, 2.0 / 3.0), (0.9, 0.1), (0.5, 0.2)] {
            assert!(matches!(
                construct_interval_scheme(&f, a, b),
                Err(Error::PreconditionViolated(_))
            ));
        }
        assert!(matches!(
            construct_interval_scheme(&f, 0.5, 0.5),
            Err(Error::InvalidAlphaBeta { .. })
        ));
    }

    #[test]
    fn marking_without_constraints_returns_first_draw() {
        let f = CspFormula::new(vec![2; 10], vec![]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let h = construct_marking_scheme(&f, 0.84, 0.5, 0.01, &mut rng).unwrap();
        let mut replay = ChaCha8Rng::seed_from_u64(0);
        let p = (2.0 - 0.84 - 0.5) / 2.0;
        let expect: Vec<u64> = (0..10)
            .map(|_| if replay.gen_bool(p) { 2 } else { 1 })
            .collect();
        assert_eq!(h.alphabet_sizes(), expect.as_slice());
    }

    #[test]
    fn marking_respects_window_on_every_constraint() {
        let (alpha, beta) = (21.0 / 25.0, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let f = random_kd_formula(&mut rng, 300, 4, 150, 2);
            let h = construct_marking_scheme(&f, alpha, beta, 0.01, &mut rng).unwrap();
            let (lo, hi) = marking_window(150, alpha, beta);
            for c in f.constraints() {
                let t = c.scope().iter().filter(|&&v| h.is_marked(v)).count();
                assert!(lo <= t && t <= hi);
            }
        }
    }

    #[test]
    fn marking_fails_when_window_is_empty() {
        let f = CspFormula::new(vec![2; 2], vec![AtomicConstraint::new(vec![0], vec![1])]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            construct_marking_scheme(&f, 0.84, 0.5, 0.1, &mut rng),
            Err(Error::ConstructionFailed(_))
        ));
    }

    #[test]
    fn marking_window_rounding_is_conservative() {
        assert_eq!(marking_window(25, 0.84, 0.5), (4, 12));
        assert_eq!(marking_window(3, 0.84, 0.5), (1, 1));
        assert_eq!(marking_window(200, 0.84, 0.5), (32, 100));
    }

    #[test]
    fn marking_monte_carlo_failure_rate() {
        // k = 200, d = 2: the Moser-Tardos precondition holds with room to spare
        let (alpha, beta) = (21.0 / 25.0, 0.5);
        let delta_fail = 0.05;
        let mut failures = 0;
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_kd_formula(&mut rng, 200, 2, 200, 2);
            if construct_marking_scheme(&f, alpha, beta, delta_fail, &mut rng).is_err() {
                failures += 1;
            }
        }
        let sigma = (delta_fail * (1.0 - delta_fail) / 100.0).sqrt();
        assert!(failures as f64 / 100.0 <= delta_fail + 3.0 * sigma);
    }

    #[test]
    fn general_scheme_all_large_consumes_no_randomness() {
        let (alpha, beta) = (0.994, 0.577);
        let q = 1u64 << 40;
        let f = CspFormula::new(
            vec![q; 40],
            vec![AtomicConstraint::new((0..40).collect(), vec![0; 40])],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let before = rng.clone();
        let h = construct_general_scheme(&f, alpha, beta, 0.01, &mut rng).unwrap();
        assert_eq!(rng, before);
        assert!(h
            .alphabet_sizes()
            .iter()
            .all(|&s| s == interval_alphabet_size(q, alpha, beta)));
    }

    #[test]
    fn general_scheme_on_booleans_is_a_marking() {
        let (alpha, beta) = (0.994, 0.577);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_kd_formula(&mut rng, 3000, 2, 1500, 2);
        let h = construct_general_scheme(&f, alpha, beta, 0.01, &mut rng).unwrap();
        assert!((0..f.num_vars()).all(|v| matches!(h.alphabet_size(v), 1 | 2)));
        assert!(verify_entropy_criterion(&f, &h, alpha, beta).pass());
    }

    #[test]
    fn general_scheme_rejects_dense_formulas() {
        let f = CspFormula::new(
            vec![2; 3],
            vec![AtomicConstraint::new(vec![0, 1], vec![0, 0])],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(matches!(
            construct_general_scheme(&f, 0.994, 0.577, 0.01, &mut rng),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
