use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::PartialProjectedConfig;
use super::inverse::{Exception, SamplerContext, Workspace};
use super::rng::{chain_rng, chain_seed};
use super::schedule::SamplerSchedule;
use crate::error::{Error, Result};
use crate::formula::CspFormula;
use crate::projection::ProjectionScheme;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub assignment: Vec<u64>,
    /// Exception of the final `S = V` call.
    pub final_exception: Exception,
    pub giant_components: u64,
    pub rejection_overflows: u64,
    /// Subroutine calls, `T + 1`.
    pub calls: u64,
    pub constraints_scanned: u64,
    pub trials: u64,
    pub chain_seed: Option<u64>,
    #[serde(with = "duration_secs")]
    pub wall_time: Duration,
    pub schedule: SamplerSchedule,
}

impl RunReport {
    pub fn exceptions(&self) -> u64 {
        self.giant_components + self.rejection_overflows
    }

    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.wall_time = other.wall_time;
        a == *other
    }
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

impl SamplerContext<'_> {
    /// Projected Glauber dynamics followed by one inversion of the final
    /// projected state.
    pub fn run<R: Rng + ?Sized>(
        &self,
        schedule: &SamplerSchedule,
        ws: &mut Workspace,
        rng: &mut R,
    ) -> RunReport {
        let start = Instant::now();
        let formula = self.formula();
        let scheme = self.scheme();
        let n = formula.num_vars();
        let mut report = RunReport {
            assignment: Vec::new(),
            final_exception: Exception::None,
            giant_components: 0,
            rejection_overflows: 0,
            calls: 0,
            constraints_scanned: 0,
            trials: 0,
            chain_seed: None,
            wall_time: Duration::ZERO,
            schedule: *schedule,
        };
        let mut tally = |exception: Exception, scanned: usize, trials: u64| {
            report.calls += 1;
            report.constraints_scanned += scanned as u64;
            report.trials += trials;
            match exception {
                Exception::None => {}
                Exception::GiantComponent => report.giant_components += 1,
                Exception::RejectionOverflow => report.rejection_overflows += 1,
            }
        };

        let mut y: Vec<u64> = (0..n)
            .map(|v| scheme.project_unchecked(v, rng.gen_range(0..formula.domain_size(v))))
            .collect();
        if n > 0 {
            for _ in 0..schedule.steps {
                let v = rng.gen_range(0..n);
                let view = PartialProjectedConfig::all_except(&y, v);
                let (exception, stats) =
                    ws.inverse_sample(self, schedule, &view, std::slice::from_ref(&v), rng);
                tally(exception, stats.scanned, stats.trials);
                y[v] = scheme.project_unchecked(v, ws.value(v));
            }
        }
        let final_exception = if n > 0 {
            let view = PartialProjectedConfig::full(&y);
            let (exception, stats) = ws.inverse_sample(self, schedule, &view, self.all_vars(), rng);
            tally(exception, stats.scanned, stats.trials);
            exception
        } else {
            tally(Exception::None, 0, 0);
            Exception::None
        };
        report.final_exception = final_exception;
        report.assignment = ws.values()[..n].to_vec();
        report.wall_time = start.elapsed();
        report
    }

    /// `n_runs` chains seeded by [`chain_seed`]`(schedule.seed, i)`, in chain
    /// order. The result does not depend on `workers`.
    pub fn run_many(
        &self,
        schedule: &SamplerSchedule,
        n_runs: usize,
        workers: usize,
    ) -> Result<Vec<RunReport>> {
        if n_runs == 0 {
            return Err(Error::InvalidParameter("at least one run required".into()));
        }
        let one = |ws: &mut Workspace, i: usize| {
            let mut rng = chain_rng(schedule.seed, i as u64);
            let mut report = self.run(schedule, ws, &mut rng);
            report.chain_seed = Some(chain_seed(schedule.seed, i as u64));
            report
        };
        if workers <= 1 {
            let mut ws = Workspace::new();
            return Ok((0..n_runs).map(|i| one(&mut ws, i)).collect());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
        Ok(pool.install(|| {
            (0..n_runs)
                .into_par_iter()
                .map_init(Workspace::new, one)
                .collect()
        }))
    }
}

pub fn run_glauber<R: Rng + ?Sized>(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    schedule: &SamplerSchedule,
    rng: &mut R,
) -> Result<RunReport> {
    let ctx = SamplerContext::new(formula, scheme)?;
    Ok(ctx.run(schedule, &mut Workspace::new(), rng))
}

pub fn run_many(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    schedule: &SamplerSchedule,
    n_runs: usize,
    workers: usize,
) -> Result<Vec<RunReport>> {
    SamplerContext::new(formula, scheme)?.run_many(schedule, n_runs, workers)
}
