use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{is_satisfied_by_projection, PartialProjectedConfig};
use super::schedule::SamplerSchedule;
use crate::error::{Error, Result};
use crate::formula::{CspFormula, DependencyGraph};
use crate::projection::{ProjectedForbidden, ProjectionScheme};

/// Formula, scheme and the derived read-only tables shared by all chains.
#[derive(Debug, Clone)]
pub struct SamplerContext<'a> {
    formula: &'a CspFormula,
    scheme: &'a ProjectionScheme,
    graph: DependencyGraph,
    tau: ProjectedForbidden,
    all_vars: Vec<usize>,
}

impl<'a> SamplerContext<'a> {
    pub fn new(formula: &'a CspFormula, scheme: &'a ProjectionScheme) -> Result<Self> {
        if scheme.domain_sizes() != formula.domain_sizes() {
            return Err(Error::InvalidScheme(
                "scheme domains differ from the formula's".into(),
            ));
        }
        Ok(Self {
            formula,
            scheme,
            graph: DependencyGraph::build(formula),
            tau: ProjectedForbidden::new(formula, scheme),
            all_vars: (0..formula.num_vars()).collect(),
        })
    }

    pub fn formula(&self) -> &'a CspFormula {
        self.formula
    }

    pub fn scheme(&self) -> &'a ProjectionScheme {
        self.scheme
    }

    pub fn graph(&self) -> &DependencyGraph {
        &self.graph
    }

    pub fn tau(&self) -> &ProjectedForbidden {
        &self.tau
    }

    pub fn all_vars(&self) -> &[usize] {
        &self.all_vars
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exception {
    #[default]
    None,
    GiantComponent,
    RejectionOverflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CallStats {
    pub components: usize,
    pub trials: u64,
    /// Distinct constraints whose satisfaction by `y_Λ` was tested.
    pub scanned: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOutcome {
    /// Values on `S`, in the order `S` was given.
    pub values: Vec<u64>,
    pub exception: Exception,
    pub stats: CallStats,
}

/// A connected component of unsatisfied constraints: variables `V_i` and
/// constraints `C'_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub vars: Vec<usize>,
    pub constraints: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Factorization {
    Components(Vec<Component>),
    GiantComponent,
}

/// Per-chain scratch. Marks are epoch-stamped so no call clears an array.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    epoch: u32,
    var_mark: Vec<u32>,
    con_mark: Vec<u32>,
    stack: Vec<usize>,
    comp_vars: Vec<usize>,
    comp_var_end: Vec<usize>,
    comp_cons: Vec<usize>,
    comp_con_end: Vec<usize>,
    x: Vec<u64>,
}

enum Factored {
    Done,
    Giant,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    fn begin(&mut self, n: usize, m: usize) {
        if self.var_mark.len() != n || self.con_mark.len() != m {
            self.var_mark = vec![0; n];
            self.con_mark = vec![0; m];
            self.x = vec![0; n];
            self.epoch = 0;
        }
        if self.epoch == u32::MAX {
            self.var_mark.fill(0);
            self.con_mark.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.comp_vars.clear();
        self.comp_var_end.clear();
        self.comp_cons.clear();
        self.comp_con_end.clear();
    }

    /// The last sampled value of `v`.
    #[inline]
    pub fn value(&self, v: usize) -> u64 {
        self.x[v]
    }

    /// The last sampled values, indexed by variable.
    pub fn values(&self) -> &[u64] {
        &self.x
    }

    /// DFS from each seed over variables and the constraints not satisfied by
    /// `y`. Components are stored flat; returns `Giant` as soon as one holds
    /// more than `cap` constraints.
    fn factorize(
        &mut self,
        ctx: &SamplerContext<'_>,
        y: &PartialProjectedConfig<'_>,
        seeds: &[usize],
        cap: u64,
        scanned: &mut usize,
    ) -> Factored {
        let formula = ctx.formula;
        self.begin(formula.num_vars(), formula.num_constraints());
        let epoch = self.epoch;
        for &seed in seeds {
            if self.var_mark[seed] == epoch {
                continue;
            }
            self.var_mark[seed] = epoch;
            self.stack.clear();
            self.stack.push(seed);
            let con_start = self.comp_cons.len();
            while let Some(u) = self.stack.pop() {
                self.comp_vars.push(u);
                for &c in ctx.graph.constraints_of(u) {
                    if self.con_mark[c] == epoch {
                        continue;
                    }
                    self.con_mark[c] = epoch;
                    *scanned += 1;
                    let constraint = formula.constraint(c);
                    if is_satisfied_by_projection(constraint, ctx.tau.tuple(c), y) {
                        continue;
                    }
                    self.comp_cons.push(c);
                    if (self.comp_cons.len() - con_start) as u64 > cap {
                        return Factored::Giant;
                    }
                    for &w in constraint.scope() {
                        if self.var_mark[w] != epoch {
                            self.var_mark[w] = epoch;
                            self.stack.push(w);
                        }
                    }
                }
            }
            self.comp_var_end.push(self.comp_vars.len());
            self.comp_con_end.push(self.comp_cons.len());
        }
        Factored::Done
    }

    fn component_bounds(&self, i: usize) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        let v0 = if i == 0 { 0 } else { self.comp_var_end[i - 1] };
        let c0 = if i == 0 { 0 } else { self.comp_con_end[i - 1] };
        (v0..self.comp_var_end[i], c0..self.comp_con_end[i])
    }

    #[inline]
    fn draw<R: Rng + ?Sized>(
        x: &mut [u64],
        scheme: &ProjectionScheme,
        y: &PartialProjectedConfig<'_>,
        u: usize,
        rng: &mut R,
    ) {
        x[u] = match y.get(u) {
            Some(yu) => scheme.invert_unchecked(u, yu, rng),
            None => rng.gen_range(0..scheme.domain_size(u)),
        };
    }

    /// Rejection-samples component `i` into `x`; returns trials used, or
    /// `None` on overflow.
    fn sample_component<R: Rng + ?Sized>(
        &mut self,
        ctx: &SamplerContext<'_>,
        y: &PartialProjectedConfig<'_>,
        i: usize,
        cap: u64,
        rng: &mut R,
    ) -> Option<u64> {
        let (vars, cons) = self.component_bounds(i);
        let scheme = ctx.scheme;
        if cons.is_empty() {
            for &u in &self.comp_vars[vars] {
                Self::draw(&mut self.x, scheme, y, u, rng);
            }
            return Some(1);
        }
        for trial in 1..=cap {
            for &u in &self.comp_vars[vars.clone()] {
                Self::draw(&mut self.x, scheme, y, u, rng);
            }
            let x = &self.x;
            let ok = self.comp_cons[cons.clone()]
                .iter()
                .all(|&c| !ctx.formula.constraint(c).is_violated_by(x));
            if ok {
                return Some(trial);
            }
        }
        None
    }

    /// The `Sample(Φ, h, δ, y_Λ, S)` subroutine. Values land in
    /// [`Workspace::values`] at the positions in `s`.
    pub fn inverse_sample<R: Rng + ?Sized>(
        &mut self,
        ctx: &SamplerContext<'_>,
        schedule: &SamplerSchedule,
        y: &PartialProjectedConfig<'_>,
        s: &[usize],
        rng: &mut R,
    ) -> (Exception, CallStats) {
        let mut stats = CallStats::default();
        let exception = match self.factorize(ctx, y, s, schedule.component_cap, &mut stats.scanned)
        {
            Factored::Giant => Exception::GiantComponent,
            Factored::Done => {
                stats.components = self.comp_var_end.len();
                let mut exception = Exception::None;
                for i in 0..stats.components {
                    match self.sample_component(ctx, y, i, schedule.trial_cap, rng) {
                        Some(trials) => stats.trials += trials,
                        None => {
                            stats.trials += schedule.trial_cap;
                            exception = Exception::RejectionOverflow;
                            break;
                        }
                    }
                }
                exception
            }
        };
        if exception != Exception::None {
            for &u in s {
                self.x[u] = rng.gen_range(0..ctx.scheme.domain_size(u));
            }
        }
        (exception, stats)
    }

    fn components(&self) -> Vec<Component> {
        (0..self.comp_var_end.len())
            .map(|i| {
                let (vars, cons) = self.component_bounds(i);
                let mut vars = self.comp_vars[vars].to_vec();
                let mut constraints = self.comp_cons[cons].to_vec();
                vars.sort_unstable();
                constraints.sort_unstable();
                Component { vars, constraints }
            })
            .collect()
    }
}

/// Components of the unsatisfied-constraint graph that meet `s`, each with
/// sorted variables and constraints, in seed order. The second value counts
/// the constraints tested.
pub fn factorize(
    ctx: &SamplerContext<'_>,
    y: &PartialProjectedConfig<'_>,
    s: &[usize],
    component_cap: u64,
) -> (Factorization, usize) {
    let mut ws = Workspace::new();
    let mut scanned = 0;
    let result = match ws.factorize(ctx, y, s, component_cap, &mut scanned) {
        Factored::Giant => Factorization::GiantComponent,
        Factored::Done => Factorization::Components(ws.components()),
    };
    (result, scanned)
}

/// Draws `X_i ~ π_{V_i}^{y}` up to `trial_cap` times and returns the first
/// draw satisfying every constraint of the component, as values aligned with
/// `component.vars`; `None` on overflow.
pub fn rejection_sample_component<R: Rng + ?Sized>(
    ctx: &SamplerContext<'_>,
    component: &Component,
    y: &PartialProjectedConfig<'_>,
    trial_cap: u64,
    rng: &mut R,
) -> Option<Vec<u64>> {
    let mut ws = Workspace::new();
    ws.begin(ctx.formula.num_vars(), ctx.formula.num_constraints());
    ws.comp_vars.extend_from_slice(&component.vars);
    ws.comp_cons.extend_from_slice(&component.constraints);
    ws.comp_var_end.push(ws.comp_vars.len());
    ws.comp_con_end.push(ws.comp_cons.len());
    ws.sample_component(ctx, y, 0, trial_cap, rng)?;
    Some(component.vars.iter().map(|&u| ws.x[u]).collect())
}

/// One call of the inverse sampler with fresh scratch.
pub fn inverse_sample<R: Rng + ?Sized>(
    ctx: &SamplerContext<'_>,
    schedule: &SamplerSchedule,
    y: &PartialProjectedConfig<'_>,
    s: &[usize],
    rng: &mut R,
) -> SampleOutcome {
    assert!(!s.is_empty(), "S must be nonempty");
    let mut ws = Workspace::new();
    let (exception, stats) = ws.inverse_sample(ctx, schedule, y, s, rng);
    SampleOutcome {
        values: s.iter().map(|&u| ws.x[u]).collect(),
        exception,
        stats,
    }
}
