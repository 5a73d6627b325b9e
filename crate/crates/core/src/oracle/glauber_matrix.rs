use std::collections::{BTreeMap, HashMap};

use super::enumerate::ExactDistribution;
use crate::error::{Error, Result};
use crate::formula::CspFormula;
use crate::projection::ProjectionScheme;

pub const MAX_GLAUBER_STATES: usize = 10_000;

/// Single-site transition matrix of the projected Glauber chain over
/// `support(ν)`, stored by sparse rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GlauberMatrix {
    states: Vec<Vec<u64>>,
    nu: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl GlauberMatrix {
    /// `P(y, y') = (1/n) Σ_v ν(y') / ν({z : z_{V∖v} = y_{V∖v}})` over the
    /// `v` on which `y` and `y'` may differ.
    pub fn from_nu(nu: &ExactDistribution, num_vars: usize) -> Result<Self> {
        if nu.support_size() > MAX_GLAUBER_STATES {
            return Err(Error::BudgetExceeded {
                needed: nu.support_size().to_string(),
                budget: MAX_GLAUBER_STATES as u64,
            });
        }
        if nu.total() == 0 {
            return Err(Error::NoSolutions);
        }
        let states: Vec<Vec<u64>> = nu.counts().keys().cloned().collect();
        let weight: Vec<f64> = states.iter().map(|s| nu.count(s) as f64).collect();
        let total = nu.total() as f64;
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); states.len()];
        let inv_n = 1.0 / num_vars.max(1) as f64;
        for v in 0..num_vars {
            // states grouped by their configuration off v
            let mut groups: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
            for (i, s) in states.iter().enumerate() {
                let mut key = s.clone();
                key[v] = u64::MAX;
                groups.entry(key).or_default().push(i);
            }
            for members in groups.values() {
                let mass: f64 = members.iter().map(|&j| weight[j]).sum();
                for &i in members {
                    for &j in members {
                        *rows[i].entry(j).or_insert(0.0) += inv_n * weight[j] / mass;
                    }
                }
            }
        }
        Ok(Self {
            nu: weight.iter().map(|w| w / total).collect(),
            rows: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
            states,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u64>] {
        &self.states
    }

    /// `ν` in state order.
    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map_or(0.0, |pos| self.rows[i][pos].1)
    }

    pub fn max_row_sum_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.iter().map(|&(_, p)| p).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max |ν(y)P(y,y') − ν(y')P(y',y)|`.
    pub fn detailed_balance_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                worst = worst.max((self.nu[i] * p - self.nu[j] * self.entry(j, i)).abs());
            }
        }
        worst
    }

    /// `πP`.
    pub fn apply_left(&self, pi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; pi.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                out[j] += pi[i] * p;
            }
        }
        out
    }

    /// `||πP − π||_1`.
    pub fn stationary_residual(&self, pi: &[f64]) -> f64 {
        self.apply_left(pi)
            .iter()
            .zip(pi)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// Iterates `π ← πP` from uniform until successive iterates differ by at
    /// most `tol` in `L1`, or `max_iters` steps.
    pub fn power_iteration(&self, tol: f64, max_iters: usize) -> Vec<f64> {
        let n = self.states.len();
        let mut pi = vec![1.0 / n as f64; n];
        for _ in 0..max_iters {
            let next = self.apply_left(&pi);
            let diff: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
            pi = next;
            if diff <= tol {
                break;
            }
        }
        pi
    }
}

pub fn exact_glauber_matrix(
    formula: &CspFormula,
    scheme: &ProjectionScheme,
    budget: u64,
) -> Result<GlauberMatrix> {
    let nu = super::exact_projected(formula, scheme, budget)?;
    GlauberMatrix::from_nu(&nu, formula.num_vars())
}
