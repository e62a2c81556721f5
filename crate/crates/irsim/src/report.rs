//! One-call analysis of a system: optimized phases plus a summary.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::baseline::{classify_case_dnc, optimal_phases_dnc, SingleModel};
use crate::channel::PhaseShifts;
use crate::design::{analytic_gamma, Phases, SystemDesign};
use crate::optimize::{run_optimizer, OptimizerConfig, OptimizerPath};
use crate::power::{classify_case, PowerModel};
use crate::scalar::{log2_1p, Real};
use crate::scenario::{Regime, Scenario, SystemKind};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub system: SystemKind,
    pub regime: Regime,
    /// Influence case of the double-IRS systems.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub gamma: f64,
    pub rate_bound: f64,
    /// Set when the phases came from the optimizer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<OptimizerPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    /// Objective after each outer pass of an iterative method.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objective: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Optimized<R> {
    pub design: SystemDesign<R>,
    pub report: PowerReport,
}

/// `log₂(1 + snr·γ)`.
pub fn rate_of<R: Real>(s: &Scenario<R>, gamma: R) -> f64 {
    log2_1p(s.snr() * gamma).as_f64()
}

/// Regime of the links a system actually uses.
pub fn system_regime<R: Real>(s: &Scenario<R>, kind: SystemKind) -> Result<Regime> {
    let l = &s.links;
    Ok(match kind {
        SystemKind::DirsC => s.regime(),
        SystemKind::DirsNc => classify_case_dnc(s).regime,
        SystemKind::NoIrs => Regime::of([&l.su]),
        k => s.single_regime(k.placement().expect("single-IRS kind"))?,
    })
}

/// Best known phases of `kind` and the resulting average power.
pub fn optimize_system<R: Real>(
    s: &Scenario<R>,
    kind: SystemKind,
    opt: &OptimizerConfig<R>,
) -> Result<Optimized<R>> {
    let regime = system_regime(s, kind)?;
    let (design, case, path, trace) = match kind {
        SystemKind::DirsC => {
            let m = PowerModel::new(s)?;
            let t = run_optimizer(&m, opt)?;
            let case = Some(classify_case(s).case.to_string());
            let objective: Vec<f64> = t.objective.iter().map(|x| x.as_f64()).collect();
            let info = (t.converged, t.iterations, objective);
            (SystemDesign::dirs_c(t.phases), case, t.path, Some(info))
        }
        SystemKind::DirsNc => {
            let case = Some(classify_case_dnc(s).case.to_string());
            match optimal_phases_dnc(s)? {
                Some(ph) => (
                    SystemDesign::dirs_nc(ph),
                    case,
                    OptimizerPath::ClosedForm,
                    None,
                ),
                None => (
                    SystemDesign::dirs_nc(PhaseShifts::zeros(s.t1(), s.t2())),
                    case,
                    OptimizerPath::NoOp,
                    None,
                ),
            }
        }
        SystemKind::NoIrs => (SystemDesign::no_irs(), None, OptimizerPath::NoOp, None),
        k => {
            let sm = SingleModel::new(s, k.placement().expect("single-IRS kind"))?;
            let (phi0, path) = match sm.optimal_phases() {
                Some(p) => (p, OptimizerPath::ClosedForm),
                None => (Array1::zeros(sm.t0), OptimizerPath::NoOp),
            };
            (
                SystemDesign::new(k, Phases::Single(phi0))?,
                None,
                path,
                None,
            )
        }
    };
    let gamma = analytic_gamma(s, &design)?;
    let (converged, iterations, objective) = trace.unwrap_or((true, 0, Vec::new()));
    let report = PowerReport {
        system: kind,
        regime,
        case,
        gamma: gamma.as_f64(),
        rate_bound: rate_of(s, gamma),
        path: Some(path),
        converged: Some(converged),
        iterations: Some(iterations),
        objective,
    };
    Ok(Optimized { design, report })
}

/// Report for a fixed design, without optimizing.
pub fn analyze_design<R: Real>(s: &Scenario<R>, d: &SystemDesign<R>) -> Result<PowerReport> {
    let case = match d.kind {
        SystemKind::DirsC => Some(classify_case(s).case.to_string()),
        SystemKind::DirsNc => Some(classify_case_dnc(s).case.to_string()),
        _ => None,
    };
    let gamma = analytic_gamma(s, d)?;
    Ok(PowerReport {
        system: d.kind,
        regime: system_regime(s, d.kind)?,
        case,
        gamma: gamma.as_f64(),
        rate_bound: rate_of(s, gamma),
        path: None,
        converged: None,
        iterations: None,
        objective: Vec::new(),
    })
}
