//! Projected Glauber dynamics and the inverse sampler it calls at every step.

mod config;
mod glauber;
mod inverse;
mod rng;
mod schedule;

pub use config::{is_satisfied_by_projection, PartialProjectedConfig, Support};
pub use glauber::{run_glauber, run_many, RunReport};
pub use inverse::{
    factorize, inverse_sample, rejection_sample_component, CallStats, Component, Exception,
    Factorization, SampleOutcome, SamplerContext, Workspace,
};
pub use rng::{chain_rng, chain_seed, splitmix64, SamplerRng};
pub use schedule::{
    component_cap, default_steps, derive_schedule, per_call_delta, trial_cap, DerivedSchedule,
    Mode, SamplerSchedule, ScheduleRequest,
};
