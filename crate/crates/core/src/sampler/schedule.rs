use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::FormulaStats;
use crate::regimes::{check_instance, InstanceClass, RegimeCheck, RegimeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Refuse instances outside the class regime.
    #[default]
    Strict,
    /// Run regardless of the regime; `η` may be overridden.
    Forced,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Mode::Strict),
            "forced" => Ok(Mode::Forced),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

/// All run parameters. `T`, `R` and `L` use the names from the algorithm
/// statement on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerSchedule {
    pub eps: f64,
    #[serde(rename = "T")]
    pub steps: u64,
    pub steps_overridden: bool,
    pub delta: f64,
    pub eta: f64,
    pub eta_overridden: bool,
    #[serde(rename = "R")]
    pub trial_cap: u64,
    #[serde(rename = "L")]
    pub component_cap: u64,
    pub seed: u64,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRequest {
    pub eps: f64,
    pub zeta: Option<f64>,
    pub eta: Option<f64>,
    pub steps: Option<u64>,
    pub seed: u64,
    pub mode: Mode,
}

impl Default for ScheduleRequest {
    fn default() -> Self {
        Self {
            eps: 0.01,
            zeta: None,
            eta: None,
            steps: None,
            seed: 0,
            mode: Mode::Strict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedSchedule {
    pub schedule: SamplerSchedule,
    /// The regime check, run in strict mode only.
    pub regime: Option<RegimeCheck>,
    pub warnings: Vec<String>,
}

/// `ceil(2n log2(n/ε))`, and 0 for `n = 0`.
pub fn default_steps(n: usize, eps: f64) -> u64 {
    if n == 0 {
        return 0;
    }
    let n = n as f64;
    (2.0 * n * (n / eps).log2()).ceil() as u64
}

/// `δ = ε/(4(T+1))`.
pub fn per_call_delta(eps: f64, steps: u64) -> f64 {
    eps / (4.0 * (steps as f64 + 1.0))
}

/// `R = ceil(10 (n/δ)^η log2(n/δ))`, at least 1.
pub fn trial_cap(n: usize, delta: f64, eta: f64) -> u64 {
    let ratio = n.max(1) as f64 / delta;
    let r = (10.0 * ratio.powf(eta) * ratio.log2()).ceil();
    clamp_cap(r)
}

/// `L = ceil(2D log2(nD/δ))`, at least 1; `L = 1` when `D = 0`.
pub fn component_cap(n: usize, max_degree: usize, delta: f64) -> u64 {
    if max_degree == 0 {
        return 1;
    }
    let d = max_degree as f64;
    let l = (2.0 * d * (n.max(1) as f64 * d / delta).log2()).ceil();
    clamp_cap(l)
}

fn clamp_cap(x: f64) -> u64 {
    if x.is_nan() || x < 1.0 {
        1
    } else if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x as u64
    }
}

/// Fills `T, δ, η, R, L` for `class`. Strict mode runs the regime check and
/// rejects instances that fail it; forced mode skips it and accepts an `η`
/// override.
pub fn derive_schedule(
    stats: &FormulaStats,
    class: &InstanceClass,
    request: &ScheduleRequest,
) -> Result<DerivedSchedule> {
    if !(request.eps > 0.0 && request.eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps = {} not in (0, 1)",
            request.eps
        )));
    }
    let mut warnings = Vec::new();
    let params = RegimeParams::for_class(class, request.zeta);
    let regime = match request.mode {
        Mode::Strict => {
            if request.eta.is_some() {
                return Err(Error::InvalidParameter(
                    "an eta override requires forced mode".into(),
                ));
            }
            let check = check_instance(class, stats, request.zeta)?;
            if !check.pass {
                return Err(Error::RegimeViolated(
                    check.failure().unwrap_or_else(|| check.class.clone()),
                ));
            }
            Some(check)
        }
        Mode::Forced => {
            warnings.push(format!(
                "forced mode: {} regime not checked, exception bounds do not apply",
                class.name()
            ));
            None
        }
    };
    let eta = match request.eta {
        Some(eta) => {
            if !(eta.is_finite() && eta >= 0.0) {
                return Err(Error::InvalidParameter(format!("eta = {eta} must be >= 0")));
            }
            warnings.push(format!(
                "eta overridden to {eta} (class value {:e})",
                params.eta
            ));
            eta
        }
        None => params.eta,
    };

    let n = stats.num_vars;
    let steps = request
        .steps
        .unwrap_or_else(|| default_steps(n, request.eps));
    let delta = per_call_delta(request.eps, steps);
    let schedule = SamplerSchedule {
        eps: request.eps,
        steps,
        steps_overridden: request.steps.is_some(),
        delta,
        eta,
        eta_overridden: request.eta.is_some(),
        trial_cap: trial_cap(n, delta, eta),
        component_cap: component_cap(n, stats.max_degree, delta),
        seed: request.seed,
        mode: request.mode,
    };
    Ok(DerivedSchedule {
        schedule,
        regime,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(n: usize, max_degree: usize, log2_inv_p: f64) -> FormulaStats {
        FormulaStats {
            num_vars: n,
            num_constraints: 1,
            max_degree,
            max_width: 3,
            max_domain: 2,
            max_occurrence: 1,
            homogeneous_domain: Some(2),
            inv_p: None,
            log2_inv_p,
        }
    }

    fn forced() -> ScheduleRequest {
        ScheduleRequest {
            eps: 0.05,
            mode: Mode::Forced,
            ..Default::default()
        }
    }

    #[test]
    fn default_step_count() {
        let d = derive_schedule(&stats(10, 2, 3.0), &InstanceClass::General, &forced()).unwrap();
        assert_eq!(d.schedule.steps, (20.0 * 200f64.log2()).ceil() as u64);
        assert_eq!(d.schedule.steps, 153);
        assert!(!d.schedule.steps_overridden);
        assert_eq!(d.schedule.delta, 0.05 / (4.0 * 154.0));
    }

    #[test]
    fn step_override_sets_delta() {
        let req = ScheduleRequest {
            steps: Some(5),
            ..forced()
        };
        let d = derive_schedule(&stats(10, 2, 3.0), &InstanceClass::General, &req).unwrap();
        assert_eq!(d.schedule.delta, 0.05 / 24.0);
        assert!(d.schedule.steps_overridden);
    }

    #[test]
    fn general_eta_is_zeta_over_three() {
        let zeta = 2f64.powi(-400);
        let req = ScheduleRequest {
            zeta: Some(zeta),
            ..forced()
        };
        let d = derive_schedule(&stats(10, 2, 3.0), &InstanceClass::General, &req).unwrap();
        assert_eq!(d.schedule.eta, zeta / 3.0);
    }

    #[test]
    fn strict_mode_enforces_regime() {
        let req = ScheduleRequest {
            mode: Mode::Strict,
            ..forced()
        };
        let err = derive_schedule(&stats(10, 2, 3.0), &InstanceClass::General, &req).unwrap_err();
        assert!(matches!(err, Error::RegimeViolated(_)));
        let ok = derive_schedule(&stats(10, 1, 1300.0), &InstanceClass::General, &req).unwrap();
        assert!(ok.regime.unwrap().pass);
        let eta = ScheduleRequest {
            eta: Some(0.1),
            ..req
        };
        assert!(derive_schedule(&stats(10, 1, 1300.0), &InstanceClass::General, &eta).is_err());
    }

    #[test]
    fn caps_follow_their_formulas() {
        let (n, d, delta, eta) = (12usize, 5usize, 1e-4, 0.3);
        let ratio: f64 = n as f64 / delta;
        assert_eq!(
            trial_cap(n, delta, eta),
            (10.0 * ratio.powf(eta) * ratio.log2()).ceil() as u64
        );
        assert_eq!(
            component_cap(n, d, delta),
            (10.0 * (60.0 / delta).log2()).ceil() as u64
        );
        assert_eq!(component_cap(n, 0, delta), 1);
        assert!(trial_cap(1, 0.9, 0.0) >= 1);
    }

    #[test]
    fn eps_out_of_range() {
        for eps in [0.0, 1.0, -0.5, f64::NAN] {
            let req = ScheduleRequest { eps, ..forced() };
            assert!(derive_schedule(&stats(3, 1, 3.0), &InstanceClass::General, &req).is_err());
        }
    }
}
