use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub samples: u64,
    /// `1/2 Σ |p̂(x) − p(x)|` over the union of supports.
    pub tv: f64,
    /// Pearson statistic over the reference support; infinite if an outcome
    /// of reference probability 0 was observed.
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Observations outside the reference support.
    pub outside_support: u64,
}

/// Empirical counts against an exact reference distribution.
pub fn tv_distance<K: Ord>(
    empirical: &BTreeMap<K, u64>,
    exact: &BTreeMap<K, f64>,
) -> Result<DistanceReport> {
    let samples: u64 = empirical.values().sum();
    if samples == 0 {
        return Err(Error::SampleSizeZero);
    }
    let n = samples as f64;
    let mut l1 = 0.0;
    let mut chi_square = 0.0;
    let mut outside_support = 0;
    for (k, &p) in exact {
        let observed = empirical.get(k).copied().unwrap_or(0) as f64;
        l1 += (observed / n - p).abs();
        if p > 0.0 {
            let expected = n * p;
            chi_square += (observed - expected).powi(2) / expected;
        }
    }
    for (k, &c) in empirical {
        if exact.get(k).is_none_or(|&p| p == 0.0) {
            if !exact.contains_key(k) {
                l1 += c as f64 / n;
            }
            outside_support += c;
        }
    }
    if outside_support > 0 {
        chi_square = f64::INFINITY;
    }
    let cells = exact.values().filter(|&&p| p > 0.0).count();
    let degrees_of_freedom = cells.saturating_sub(1);
    let p_value = if chi_square.is_infinite() {
        0.0
    } else if degrees_of_freedom == 0 {
        1.0
    } else {
        ChiSquared::new(degrees_of_freedom as f64)
            .expect("positive degrees of freedom")
            .sf(chi_square)
    };
    Ok(DistanceReport {
        samples,
        tv: (l1 / 2.0).min(1.0),
        chi_square,
        degrees_of_freedom,
        p_value,
        outside_support,
    })
}

/// Tallies observations.
pub fn empirical_counts<K: Ord, I: IntoIterator<Item = K>>(items: I) -> BTreeMap<K, u64> {
    let mut out = BTreeMap::new();
    for k in items {
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_proportions_have_zero_distance() {
        let exact: BTreeMap<u32, f64> = [(0, 0.25), (1, 0.75)].into();
        let emp: BTreeMap<u32, u64> = [(0, 250), (1, 750)].into();
        let r = tv_distance(&emp, &exact).unwrap();
        assert_eq!(r.tv, 0.0);
        assert_eq!(r.chi_square, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn disjoint_supports_have_distance_one() {
        let exact: BTreeMap<u32, f64> = [(0, 0.5), (1, 0.5)].into();
        let emp: BTreeMap<u32, u64> = [(2, 10)].into();
        let r = tv_distance(&emp, &exact).unwrap();
        assert_eq!(r.tv, 1.0);
        assert_eq!(r.outside_support, 10);
        assert_eq!(r.p_value, 0.0);
    }

    #[test]
    fn empty_sample_is_an_error() {
        let exact: BTreeMap<u32, f64> = [(0, 1.0)].into();
        assert_eq!(
            tv_distance(&BTreeMap::new(), &exact),
            Err(Error::SampleSizeZero)
        );
    }

    #[test]
    fn six_outcome_concentration() {
        let p = [0.05, 0.1, 0.15, 0.2, 0.2, 0.3];
        let exact: BTreeMap<usize, f64> = p.iter().copied().enumerate().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let n = 100_000;
        let draws = (0..n).map(|_| {
            let mut u: f64 = rng.gen();
            p.iter()
                .position(|&pi| {
                    u -= pi;
                    u < 0.0
                })
                .unwrap_or(5)
        });
        let r = tv_distance(&empirical_counts(draws), &exact).unwrap();
        assert!(r.tv <= 3.0 * (6.0 / n as f64).sqrt(), "tv = {}", r.tv);
        assert_eq!(r.degrees_of_freedom, 5);
        assert!(r.p_value > 0.001);
    }
}
