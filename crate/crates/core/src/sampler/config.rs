use crate::formula::AtomicConstraint;

/// The support `Λ` of a partial projected configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support<'a> {
    All,
    AllExcept(usize),
    /// `mask[v]` is true iff `v ∈ Λ`.
    Subset(&'a [bool]),
}

/// `y_Λ`: a full-length symbol vector of which only the positions in `Λ` are
/// read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialProjectedConfig<'a> {
    values: &'a [u64],
    support: Support<'a>,
}

impl<'a> PartialProjectedConfig<'a> {
    pub fn new(values: &'a [u64], support: Support<'a>) -> Self {
        if let Support::Subset(mask) = support {
            assert_eq!(mask.len(), values.len(), "support mask length");
        }
        Self { values, support }
    }

    pub fn full(values: &'a [u64]) -> Self {
        Self::new(values, Support::All)
    }

    pub fn all_except(values: &'a [u64], v: usize) -> Self {
        Self::new(values, Support::AllExcept(v))
    }

    pub fn values(&self) -> &'a [u64] {
        self.values
    }

    pub fn support(&self) -> Support<'a> {
        self.support
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        match self.support {
            Support::All => true,
            Support::AllExcept(u) => u != v,
            Support::Subset(mask) => mask[v],
        }
    }

    /// `y_v` if `v ∈ Λ`.
    #[inline]
    pub fn get(&self, v: usize) -> Option<u64> {
        self.contains(v).then(|| self.values[v])
    }
}

/// True iff some `v ∈ Λ ∩ vbl(c)` has `y_v ≠ τ_c[v]`; then every completion
/// of every preimage of `y_Λ` satisfies `c`. An empty intersection is
/// unsatisfied.
#[inline]
pub fn is_satisfied_by_projection(
    constraint: &AtomicConstraint,
    tau: &[u64],
    y: &PartialProjectedConfig<'_>,
) -> bool {
    constraint
        .scope()
        .iter()
        .zip(tau)
        .any(|(&v, &t)| y.contains(v) && y.values[v] != t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::CspFormula;
    use crate::projection::{project_forbidden, ProjectionScheme};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_intersection_is_unsatisfied() {
        let c = AtomicConstraint::new(vec![0, 1], vec![0, 0]);
        let mask = [false, false, true];
        let y = PartialProjectedConfig::new(&[1, 1, 1], Support::Subset(&mask));
        assert!(!is_satisfied_by_projection(&c, &[0, 0], &y));
    }

    #[test]
    fn agreement_and_disagreement() {
        let c = AtomicConstraint::new(vec![0, 1], vec![0, 0]);
        let values = [0, 0];
        assert!(!is_satisfied_by_projection(
            &c,
            &[0, 0],
            &PartialProjectedConfig::full(&values)
        ));
        let values = [0, 1];
        assert!(is_satisfied_by_projection(
            &c,
            &[0, 0],
            &PartialProjectedConfig::full(&values)
        ));
        assert!(!is_satisfied_by_projection(
            &c,
            &[0, 0],
            &PartialProjectedConfig::all_except(&values, 1)
        ));
    }

    /// Brute force: `c` is satisfied by `y_Λ` iff every `x` with `h(x_Λ) =
    /// y_Λ` satisfies `c`.
    #[test]
    fn matches_preimage_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let width = rng.gen_range(1..=4);
            let q: Vec<u64> = (0..width).map(|_| rng.gen_range(2..=5)).collect();
            let forbidden: Vec<u64> = q.iter().map(|&qv| rng.gen_range(0..qv)).collect();
            let c = AtomicConstraint::new((0..width).collect(), forbidden);
            let f = CspFormula::new(q.clone(), vec![c.clone()]).unwrap();
            let s: Vec<u64> = q.iter().map(|&qv| rng.gen_range(1..=qv)).collect();
            let h = ProjectionScheme::for_formula(&f, s.clone()).unwrap();
            let tau = project_forbidden(&f, &h);
            let y: Vec<u64> = s.iter().map(|&sv| rng.gen_range(0..sv)).collect();
            let mask: Vec<bool> = (0..width).map(|_| rng.gen_bool(0.5)).collect();
            let py = PartialProjectedConfig::new(&y, Support::Subset(&mask));

            let total: u64 = q.iter().product();
            let mut all_satisfy = true;
            for code in 0..total {
                let mut rest = code;
                let x: Vec<u64> = q
                    .iter()
                    .map(|&qv| {
                        let d = rest % qv;
                        rest /= qv;
                        d
                    })
                    .collect();
                let consistent =
                    (0..width).all(|v| !mask[v] || h.project_unchecked(v, x[v]) == y[v]);
                if consistent && c.is_violated_by(&x) {
                    all_satisfy = false;
                }
            }
            assert_eq!(
                is_satisfied_by_projection(&c, tau.tuple(0), &py),
                all_satisfy
            );
        }
    }
}
