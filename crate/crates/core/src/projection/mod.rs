//! Projection schemes `h = (h_v)`: balanced interval maps from each domain
//! `[q_v]` onto a smaller alphabet `[s_v]`.

mod auto;
mod construct;
mod entropy;
mod round_down;
mod scheme;

pub use auto::{auto_scheme, AutoScheme};
pub use construct::{
    construct_general_scheme, construct_interval_scheme, construct_marking_scheme,
    interval_alphabet_size, marking_attempts, marking_resample_cap, marking_window,
};
pub use entropy::{
    project_forbidden, verify_entropy_criterion, ConstraintEntropy, EntropyReport,
    ProjectedForbidden, ENTROPY_TOLERANCE,
};
pub use round_down::{
    build_round_down, build_round_down_enumerated, check_derived_lll_conditions, DerivedLllReport,
};
pub use scheme::{evaluate_projection, invert_projection, ProjectionScheme};

pub(crate) use construct::check_alpha_beta;
