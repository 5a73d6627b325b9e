//! Near-uniform sampling of solutions to CSPs with atomic constraints.
//!
//! A [`ProjectionScheme`] compresses each domain `[q_v]` onto a smaller
//! alphabet; Glauber dynamics runs on the projected distribution, and each
//! update inverts the projection locally by rejection sampling on the
//! connected components of the constraints the projected state leaves
//! undecided.
//!
//! ```
//! use lllsample::{CspFormula, ProjectionScheme, SamplerSchedule, Mode, run_glauber};
//! use lllsample::sampler::{component_cap, per_call_delta, trial_cap};
//! use rand::SeedableRng;
//!
//! let f = CspFormula::hypergraph_coloring(4, &[vec![0, 1, 2], vec![1, 2, 3]], 3).unwrap();
//! let h = ProjectionScheme::for_formula(&f, vec![2; 4]).unwrap();
//! let delta = per_call_delta(0.05, 100);
//! let schedule = SamplerSchedule {
//!     eps: 0.05,
//!     steps: 100,
//!     steps_overridden: true,
//!     delta,
//!     eta: 0.25,
//!     eta_overridden: true,
//!     trial_cap: trial_cap(4, delta, 0.25),
//!     component_cap: component_cap(4, 5, delta),
//!     seed: 7,
//!     mode: Mode::Forced,
//! };
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let report = run_glauber(&f, &h, &schedule, &mut rng).unwrap();
//! assert_eq!(report.assignment.len(), 4);
//! ```

pub mod error;
pub mod formula;
pub mod generate;
pub mod io;
pub mod oracle;
pub mod projection;
pub mod regimes;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
pub use formula::{
    atomize_general_constraint, build_dependency_graph, compute_stats, evaluate, AtomicConstraint,
    CspFormula, DependencyGraph, FormulaStats,
};
pub use io::{InstanceDocument, InstanceKind, InstanceMeta, SampleFormat};
pub use projection::{auto_scheme, EntropyReport, ProjectionScheme};
pub use regimes::{Constructor, InstanceClass, RegimeCheck};
pub use sampler::{
    derive_schedule, inverse_sample, run_glauber, run_many, Exception, Mode,
    PartialProjectedConfig, RunReport, SampleOutcome, SamplerContext, SamplerSchedule,
    ScheduleRequest, Support,
};
