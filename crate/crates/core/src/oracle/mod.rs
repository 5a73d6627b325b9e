//! Brute-force ground truth for instances small enough to enumerate.

mod distance;
mod enumerate;
mod glauber_matrix;

pub use distance::{empirical_counts, tv_distance, DistanceReport};
pub use enumerate::{
    enumerate_solutions, exact_conditional, exact_projected, nu_single_site, ExactDistribution,
    ExactDistributions, DEFAULT_BUDGET,
};
pub use glauber_matrix::{exact_glauber_matrix, GlauberMatrix, MAX_GLAUBER_STATES};
