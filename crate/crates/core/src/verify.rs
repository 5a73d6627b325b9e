//! Oracle-backed checks of a sampler configuration on one small instance.

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formula::CspFormula;
use crate::oracle::{
    empirical_counts, enumerate_solutions, tv_distance, ExactDistribution, GlauberMatrix,
    MAX_GLAUBER_STATES,
};
use crate::projection::ProjectionScheme;
use crate::sampler::{
    Exception, PartialProjectedConfig, SamplerContext, SamplerRng, SamplerSchedule, Workspace,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Draws per distribution-level check.
    pub samples: usize,
    /// Projected configurations to condition on in the exactness check.
    pub conditionings: usize,
    pub workers: usize,
    pub budget: u64,
    pub schedule: SamplerSchedule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub num_solutions: usize,
    pub criteria: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }
}

/// TV threshold for `samples` draws over `support` outcomes: about 2.5 times
/// the expected sampling noise, plus 0.01.
pub fn tv_tolerance(support: usize, samples: usize) -> f64 {
    0.01 + (support as f64 / samples.max(1) as f64).sqrt()
}

fn result(name: &str, pass: bool, detail: String) -> CriterionResult {
    CriterionResult {
        name: name.into(),
        pass,
        detail,
    }
}

pub fn verify_instance(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    config: &VerifyConfig,
) -> Result<VerifyReport> {
    let exact = enumerate_solutions(formula, config.budget)?;
    let nu = exact.nu(scheme)?;
    let ctx = SamplerContext::new(formula, scheme)?;
    let schedule = &config.schedule;
    let mut rng = SamplerRng::seed_from_u64(schedule.seed);
    let mut criteria = Vec::new();

    let domains_ok = (0..scheme.num_vars()).all(|v| {
        let total: u64 = (0..scheme.alphabet_size(v))
            .map(|y| scheme.preimage_len(v, y))
            .sum();
        total == scheme.domain_size(v)
    });
    criteria.push(result(
        "scheme-balanced",
        domains_ok,
        format!("alphabet sizes {:?}", scheme.alphabet_sizes()),
    ));

    criteria.push(inverse_exactness(&ctx, &exact, &nu, config, &mut rng)?);
    criteria.push(end_to_end(&ctx, &exact.mu(), config)?);
    criteria.push(stationarity(&nu, formula.num_vars()));
    criteria.push(inversion_uniformity(scheme, config.samples, &mut rng)?);

    Ok(VerifyReport {
        num_solutions: exact.num_solutions(),
        criteria,
    })
}

fn inverse_exactness(
    ctx: &SamplerContext<'_>,
    exact: &crate::oracle::ExactDistributions,
    nu: &ExactDistribution,
    config: &VerifyConfig,
    rng: &mut SamplerRng,
) -> Result<CriterionResult> {
    let n = ctx.formula().num_vars();
    let states: Vec<&Vec<u64>> = nu.counts().keys().collect();
    let mut worst: f64 = 0.0;
    let mut worst_tol: f64 = 1.0;
    let mut pass = true;
    let mut ws = Workspace::new();
    let all: Vec<usize> = (0..n).collect();
    for _ in 0..config.conditionings {
        let y = states[rng.gen_range(0..states.len())];
        let v = rng.gen_range(0..n);
        for full in [false, true] {
            let (view, s) = if full {
                (PartialProjectedConfig::full(y), all.as_slice())
            } else {
                (
                    PartialProjectedConfig::all_except(y, v),
                    std::slice::from_ref(&v),
                )
            };
            let target = exact.conditional(ctx.scheme(), &view, s)?;
            let mut accepted = Vec::with_capacity(config.samples);
            for _ in 0..config.samples {
                let (exception, _) = ws.inverse_sample(ctx, &config.schedule, &view, s, rng);
                if exception == Exception::None {
                    accepted.push(s.iter().map(|&u| ws.value(u)).collect::<Vec<u64>>());
                }
            }
            if accepted.is_empty() {
                pass = false;
                continue;
            }
            let tol = tv_tolerance(target.support_size(), accepted.len());
            let report = tv_distance(&empirical_counts(accepted), &target.probabilities())?;
            if report.tv - tol > worst - worst_tol {
                worst = report.tv;
                worst_tol = tol;
            }
            pass &= report.tv <= tol;
        }
    }
    Ok(result(
        "inverse-sampler-exactness",
        pass,
        format!("worst TV {worst:.4} (tolerance {worst_tol:.4})"),
    ))
}

fn end_to_end(
    ctx: &SamplerContext<'_>,
    mu: &ExactDistribution,
    config: &VerifyConfig,
) -> Result<CriterionResult> {
    let runs = ctx.run_many(&config.schedule, config.samples, config.workers)?;
    let exceptions: u64 = runs.iter().map(|r| r.exceptions()).sum();
    let report = tv_distance(
        &empirical_counts(runs.into_iter().map(|r| r.assignment)),
        &mu.probabilities(),
    )?;
    let tol = tv_tolerance(mu.support_size(), config.samples);
    Ok(result(
        "end-to-end",
        report.tv <= tol,
        format!(
            "TV {:.4} (tolerance {tol:.4}), T = {}, {exceptions} exceptions",
            report.tv, config.schedule.steps
        ),
    ))
}

fn stationarity(nu: &ExactDistribution, n: usize) -> CriterionResult {
    if nu.support_size() > MAX_GLAUBER_STATES {
        return result(
            "stationarity",
            true,
            format!("skipped: {} projected states", nu.support_size()),
        );
    }
    let m = GlauberMatrix::from_nu(nu, n).expect("support checked");
    let balance = m.detailed_balance_error();
    let residual = m.stationary_residual(m.nu());
    result(
        "stationarity",
        balance <= 1e-12 && residual <= 1e-10,
        format!("detailed balance {balance:.2e}, residual {residual:.2e}"),
    )
}

fn inversion_uniformity(
    scheme: &ProjectionScheme,
    samples: usize,
    rng: &mut SamplerRng,
) -> Result<CriterionResult> {
    let mut pairs = 0;
    let mut failures = 0;
    let mut checked_all = true;
    'outer: for v in 0..scheme.num_vars() {
        for y in 0..scheme.alphabet_size(v) {
            if pairs >= 10_000 {
                checked_all = false;
                break 'outer;
            }
            let len = scheme.preimage_len(v, y);
            if len == 1 {
                continue;
            }
            pairs += 1;
            let draws = samples.max(20 * len as usize);
            let rejected = |rng: &mut SamplerRng| -> Result<bool> {
                let counts =
                    empirical_counts((0..draws).map(|_| vec![scheme.invert_unchecked(v, y, rng)]));
                let start = scheme.preimage_start(v, y);
                let exact = (start..start + len)
                    .map(|x| (vec![x], 1.0 / len as f64))
                    .collect();
                Ok(tv_distance(&counts, &exact)?.p_value < 0.001)
            };
            if rejected(rng)? && rejected(rng)? {
                failures += 1;
            }
        }
    }
    Ok(result(
        "inversion-uniformity",
        failures == 0,
        format!(
            "{failures} of {pairs} preimages rejected twice at p = 0.001{}",
            if checked_all { "" } else { " (truncated)" }
        ),
    ))
}
