use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    construct_general_scheme, construct_interval_scheme, construct_marking_scheme, ProjectionScheme,
};
use crate::error::{Error, Result};
use crate::formula::compute_stats;
use crate::formula::CspFormula;
use crate::regimes::{
    check_projection_precondition, constructor_preference, Constructor, InstanceClass,
};
use crate::sampler::Mode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoScheme {
    pub scheme: ProjectionScheme,
    /// `None` when forced mode fell back to the identity scheme.
    pub constructor: Option<Constructor>,
    pub warnings: Vec<String>,
}

fn build<R: Rng + ?Sized>(
    constructor: Constructor,
    formula: &CspFormula,
    alpha: f64,
    beta: f64,
    delta_fail: f64,
    rng: &mut R,
) -> Result<ProjectionScheme> {
    match constructor {
        Constructor::Interval => construct_interval_scheme(formula, alpha, beta),
        Constructor::Marking => construct_marking_scheme(formula, alpha, beta, delta_fail, rng),
        Constructor::General => construct_general_scheme(formula, alpha, beta, delta_fail, rng),
    }
}

/// Picks the first constructor, in the class's preference order, whose
/// precondition holds and runs it. In forced mode every constructor is tried
/// regardless of preconditions, and if all fail the identity scheme is used
/// (the chain is then plain Glauber dynamics on `μ`).
pub fn auto_scheme<R: Rng + ?Sized>(
    formula: &CspFormula,
    class: &InstanceClass,
    alpha: f64,
    beta: f64,
    delta_fail: f64,
    mode: Mode,
    rng: &mut R,
) -> Result<AutoScheme> {
    let stats = compute_stats(formula);
    let pre = check_projection_precondition(class, &stats, alpha, beta)?;
    match mode {
        Mode::Strict => {
            let constructor = pre.applicable.ok_or_else(|| {
                Error::PreconditionViolated(format!(
                    "no projection constructor applies at alpha = {alpha}, beta = {beta}"
                ))
            })?;
            Ok(AutoScheme {
                scheme: build(constructor, formula, alpha, beta, delta_fail, rng)?,
                constructor: Some(constructor),
                warnings: Vec::new(),
            })
        }
        Mode::Forced => {
            let mut warnings = Vec::new();
            for constructor in constructor_preference(class) {
                match build(constructor, formula, alpha, beta, delta_fail, rng) {
                    Ok(scheme) => {
                        if !pre.passes(constructor) {
                            warnings.push(format!(
                                "{constructor:?} scheme built although its precondition fails"
                            ));
                        }
                        return Ok(AutoScheme {
                            scheme,
                            constructor: Some(constructor),
                            warnings,
                        });
                    }
                    Err(e) => warnings.push(format!("{constructor:?}: {e}")),
                }
            }
            warnings.push("no constructor succeeded; using the identity scheme".into());
            Ok(AutoScheme {
                scheme: ProjectionScheme::identity(formula),
                constructor: None,
                warnings,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::AtomicConstraint;
    use crate::regimes::{CNF_ALPHA, CNF_BETA, COLORING_ALPHA, COLORING_BETA};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coloring_gets_intervals() {
        let f = CspFormula::hypergraph_coloring(13, &[(0..13).collect()], 650).unwrap();
        let class = InstanceClass::Coloring {
            k: 13,
            max_degree: 1,
            q: 650,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = auto_scheme(
            &f,
            &class,
            COLORING_ALPHA,
            COLORING_BETA,
            0.01,
            Mode::Strict,
            &mut rng,
        )
        .unwrap();
        assert_eq!(a.constructor, Some(Constructor::Interval));
        assert_eq!(a.scheme.alphabet_sizes(), &[7; 13]);
    }

    #[test]
    fn small_cnf_strict_fails_forced_falls_back() {
        let f = CspFormula::new(
            vec![2; 3],
            vec![
                AtomicConstraint::new(vec![0, 1], vec![0, 0]),
                AtomicConstraint::new(vec![1, 2], vec![1, 0]),
            ],
        )
        .unwrap();
        let class = InstanceClass::Cnf { k: 2, d: 2 };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(auto_scheme(
            &f,
            &class,
            CNF_ALPHA,
            CNF_BETA,
            0.01,
            Mode::Strict,
            &mut rng
        )
        .is_err());
        let a = auto_scheme(
            &f,
            &class,
            CNF_ALPHA,
            CNF_BETA,
            0.01,
            Mode::Forced,
            &mut rng,
        )
        .unwrap();
        assert!(!a.warnings.is_empty());
        // width 2: window [ceil(0.32), floor(1)] = [1, 1]; a marking exists
        assert_eq!(a.constructor, Some(Constructor::Marking));
    }
}
