//! Fixtures shared by the benchmarks.

use lllsample::generate::random_regular_k_cnf;
use lllsample::projection::construct_marking_scheme;
use lllsample::regimes::{CNF_ALPHA, CNF_BETA};
use lllsample::sampler::{derive_schedule, Mode, SamplerRng, SamplerSchedule, ScheduleRequest};
use lllsample::{compute_stats, CspFormula, InstanceClass, ProjectionScheme};
use rand::SeedableRng;

pub struct Fixture {
    pub formula: CspFormula,
    pub scheme: ProjectionScheme,
    pub schedule: SamplerSchedule,
}

/// Regular `k`-CNF with `n = blocks * k` variables, each in 2 clauses, with
/// a marking scheme and a forced-mode schedule of `steps` steps.
pub fn regular_cnf(blocks: usize, k: usize, steps: u64) -> Fixture {
    let mut rng = SamplerRng::seed_from_u64(blocks as u64 * 1000 + k as u64);
    let formula = random_regular_k_cnf(blocks, k, 2, &mut rng);
    let scheme = construct_marking_scheme(&formula, CNF_ALPHA, CNF_BETA, 0.01, &mut rng)
        .unwrap_or_else(|_| ProjectionScheme::identity(&formula));
    let request = ScheduleRequest {
        steps: Some(steps),
        mode: Mode::Forced,
        ..Default::default()
    };
    let class = InstanceClass::Cnf { k, d: 2 };
    let schedule = derive_schedule(&compute_stats(&formula), &class, &request)
        .expect("forced schedule")
        .schedule;
    Fixture {
        formula,
        scheme,
        schedule,
    }
}
