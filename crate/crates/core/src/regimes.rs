//! Regime inequalities and per-class parameter constants. All margins are
//! `lhs - rhs`, in bits where the sides are logarithms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::FormulaStats;
use crate::projection::check_alpha_beta;

pub const GENERAL_ALPHA: f64 = 0.994;
pub const GENERAL_BETA: f64 = 0.577;
pub const COLORING_ALPHA: f64 = 7.0 / 9.0;
pub const COLORING_BETA: f64 = 2.0 / 3.0;
pub const CNF_ALPHA: f64 = 21.0 / 25.0;
pub const CNF_BETA: f64 = 0.5;

/// Largest admissible `ζ` for general formulas, `2^-400`.
pub const GENERAL_ZETA_MAX: f64 = f64::from_bits((1023 - 400) << 52);
/// Largest admissible `ζ` for CNF, `2^-20`.
pub const CNF_ZETA_MAX: f64 = 1.0 / 1_048_576.0;

/// Instance class, carrying the class-specific shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum InstanceClass {
    General,
    /// `k`-uniform hypergraph, max vertex degree `Δ`, `q` colors.
    Coloring {
        k: usize,
        max_degree: usize,
        q: u64,
    },
    /// `k`-CNF where each variable is in at most `d` clauses.
    Cnf {
        k: usize,
        d: usize,
    },
}

impl InstanceClass {
    pub fn name(&self) -> &'static str {
        match self {
            InstanceClass::General => "general",
            InstanceClass::Coloring { .. } => "coloring",
            InstanceClass::Cnf { .. } => "cnf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub alpha: f64,
    pub beta: f64,
    /// `None` for coloring, whose `η` has no `ζ`.
    pub zeta: Option<f64>,
    pub eta: f64,
}

impl RegimeParams {
    /// Class defaults; `zeta` overrides the class's default `ζ` where one exists.
    pub fn for_class(class: &InstanceClass, zeta: Option<f64>) -> Self {
        match *class {
            InstanceClass::General => {
                let zeta = zeta.unwrap_or(GENERAL_ZETA_MAX);
                Self {
                    alpha: GENERAL_ALPHA,
                    beta: GENERAL_BETA,
                    zeta: Some(zeta),
                    eta: zeta / 3.0,
                }
            }
            InstanceClass::Coloring { k, max_degree, q } => {
                let qkd = q as f64 * k.max(1) as f64 * max_degree.max(1) as f64;
                Self {
                    alpha: COLORING_ALPHA,
                    beta: COLORING_BETA,
                    zeta: None,
                    eta: 1.0 / (512.0 * qkd.powi(4)),
                }
            }
            InstanceClass::Cnf { k, d } => {
                let zeta = zeta.unwrap_or(CNF_ZETA_MAX);
                let dk = d.max(1) as f64 * k.max(1) as f64;
                Self {
                    alpha: CNF_ALPHA,
                    beta: CNF_BETA,
                    zeta: Some(zeta),
                    eta: zeta / (3.0 * dk.powi(4)),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub text: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl Inequality {
    /// `lhs >= rhs`.
    pub fn at_least(text: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            text: text.into(),
            lhs,
            rhs,
            margin: lhs - rhs,
            pass: lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeCheck {
    pub class: String,
    pub pass: bool,
    pub inequalities: Vec<Inequality>,
    /// Coloring only, `k >= 30`: the closed form `q >= 15 Δ^(9/(k-12)) + 650`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplified: Option<Inequality>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RegimeCheck {
    fn from_inequalities(class: &str, inequalities: Vec<Inequality>) -> Self {
        Self {
            class: class.to_string(),
            pass: inequalities.iter().all(|i| i.pass),
            inequalities,
            simplified: None,
            notes: Vec::new(),
        }
    }

    /// Text of the first failing inequality.
    pub fn failure(&self) -> Option<String> {
        self.inequalities
            .iter()
            .find(|i| !i.pass)
            .map(|i| format!("{} (lhs {:.4}, rhs {:.4})", i.text, i.lhs, i.rhs))
    }
}

fn log2_or_zero(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.log2()
    }
}

fn check_zeta(zeta: f64, max: f64, label: &str) -> Result<()> {
    if zeta > 0.0 && zeta <= max {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "zeta = {zeta:e} not in (0, {label}]"
        )))
    }
}

/// `ln(1/p) >= 350 ln D + 3 ln(1/ζ)`, evaluated in log2 (the two forms differ
/// by the factor `ln 2` on both sides). `log D` is taken as 0 when `D = 0`.
pub fn check_general(stats: &FormulaStats, zeta: f64) -> Result<RegimeCheck> {
    check_zeta(zeta, GENERAL_ZETA_MAX, "2^-400")?;
    let rhs = 350.0 * log2_or_zero(stats.max_degree as f64) + 3.0 * (-zeta.log2());
    Ok(RegimeCheck::from_inequalities(
        "general",
        vec![Inequality::at_least(
            "ln(1/p) >= 350 ln D + 3 ln(1/zeta)",
            stats.log2_inv_p,
            rhs,
        )],
    ))
}

/// `(7k)^(9/(k-12))`; infinite for `k <= 12`.
pub fn seven_k_power(k: usize) -> f64 {
    if k <= 12 {
        return f64::INFINITY;
    }
    (7.0 * k as f64).powf(9.0 / (k as f64 - 12.0))
}

/// `k >= 13` and `q >= max((7kΔ)^(9/(k-12)), 650)`.
pub fn check_coloring(k: usize, max_degree: usize, q: u64) -> RegimeCheck {
    let log_q = (q as f64).log2();
    let exponent_rhs = if k <= 12 {
        f64::INFINITY
    } else if max_degree == 0 {
        f64::NEG_INFINITY
    } else {
        9.0 / (k as f64 - 12.0) * (7.0 * k as f64 * max_degree as f64).log2()
    };
    let mut check = RegimeCheck::from_inequalities(
        "coloring",
        vec![
            Inequality::at_least("k >= 13", k as f64, 13.0),
            Inequality::at_least("q >= 650", log_q, 650f64.log2()),
            Inequality::at_least("q >= (7 k Delta)^(9/(k-12))", log_q, exponent_rhs),
        ],
    );
    if k >= 30 {
        let bound = 15.0 * (max_degree as f64).powf(9.0 / (k as f64 - 12.0)) + 650.0;
        check.simplified = Some(Inequality::at_least(
            "q >= 15 Delta^(9/(k-12)) + 650",
            log_q,
            bound.log2(),
        ));
    }
    check
}

/// `k >= 13 log d + 13 log k + 3 log(1/ζ)`, logs base 2, `log 0` taken as 0.
pub fn check_cnf(k: usize, d: usize, zeta: f64) -> Result<RegimeCheck> {
    check_zeta(zeta, CNF_ZETA_MAX, "2^-20")?;
    let rhs = 13.0 * log2_or_zero(d as f64) + 13.0 * log2_or_zero(k as f64) - 3.0 * zeta.log2();
    Ok(RegimeCheck::from_inequalities(
        "cnf",
        vec![Inequality::at_least(
            "k >= 13 log d + 13 log k + 3 log(1/zeta)",
            k as f64,
            rhs,
        )],
    ))
}

/// Dispatches to the class's regime check. A formula without constraints is
/// always in regime: `μ` is the product distribution.
pub fn check_instance(
    class: &InstanceClass,
    stats: &FormulaStats,
    zeta: Option<f64>,
) -> Result<RegimeCheck> {
    let params = RegimeParams::for_class(class, zeta);
    let mut check = match *class {
        InstanceClass::General => check_general(stats, params.zeta.unwrap_or(GENERAL_ZETA_MAX))?,
        InstanceClass::Coloring { k, max_degree, q } => check_coloring(k, max_degree, q),
        InstanceClass::Cnf { k, d } => check_cnf(k, d, params.zeta.unwrap_or(CNF_ZETA_MAX))?,
    };
    if stats.num_constraints == 0 {
        check.pass = true;
        check
            .notes
            .push("no constraints: the solution distribution is a product".into());
    }
    Ok(check)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constructor {
    Interval,
    Marking,
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionPrecondition {
    pub alpha: f64,
    pub beta: f64,
    pub general: Inequality,
    /// `None` unless the domain is homogeneous.
    pub interval: Option<Vec<Inequality>>,
    /// `None` unless the domain is homogeneous.
    pub marking: Option<Inequality>,
    /// First constructor whose precondition holds, in the class's preference
    /// order.
    pub applicable: Option<Constructor>,
}

impl ProjectionPrecondition {
    pub fn passes(&self, constructor: Constructor) -> bool {
        match constructor {
            Constructor::General => self.general.pass,
            Constructor::Interval => self
                .interval
                .as_ref()
                .is_some_and(|v| v.iter().all(|i| i.pass)),
            Constructor::Marking => self.marking.as_ref().is_some_and(|i| i.pass),
        }
    }
}

/// Preference order of constructors per class.
pub fn constructor_preference(class: &InstanceClass) -> [Constructor; 3] {
    match class {
        InstanceClass::Coloring { .. } => [
            Constructor::Interval,
            Constructor::Marking,
            Constructor::General,
        ],
        InstanceClass::Cnf { .. } => [
            Constructor::Marking,
            Constructor::Interval,
            Constructor::General,
        ],
        InstanceClass::General => [
            Constructor::General,
            Constructor::Interval,
            Constructor::Marking,
        ],
    }
}

pub fn check_projection_precondition(
    class: &InstanceClass,
    stats: &FormulaStats,
    alpha: f64,
    beta: f64,
) -> Result<ProjectionPrecondition> {
    check_alpha_beta(alpha, beta)?;
    let gap = alpha - beta;
    let general = Inequality::at_least(
        "log(1/p) >= 25/(alpha-beta)^3 (log D + 3)",
        stats.log2_inv_p,
        25.0 / gap.powi(3) * (log2_or_zero(stats.max_degree as f64) + 3.0),
    );
    let interval = stats.homogeneous_domain.map(|q| {
        let qf = q as f64;
        let mid = qf.powf((alpha + beta) / 2.0);
        vec![
            Inequality::at_least("7 <= q^((alpha+beta)/2)", mid, 7.0),
            Inequality::at_least("q^((alpha+beta)/2) <= q/6", qf / 6.0, mid),
            Inequality::at_least("log q >= 1/(alpha-beta)", qf.log2(), 1.0 / gap),
        ]
    });
    let marking = stats.homogeneous_domain.map(|_| {
        let k = stats.max_width as f64;
        let kd = (k * stats.max_occurrence as f64).max(1.0);
        Inequality::at_least(
            "k >= (2 ln 2)/(alpha-beta)^2 log(2e k d)",
            k,
            2.0 * std::f64::consts::LN_2 / gap.powi(2) * (2.0 * std::f64::consts::E * kd).log2(),
        )
    });
    let mut out = ProjectionPrecondition {
        alpha,
        beta,
        general,
        interval,
        marking,
        applicable: None,
    };
    out.applicable = constructor_preference(class)
        .into_iter()
        .find(|&c| out.passes(c));
    Ok(out)
}
