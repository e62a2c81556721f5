//! Parameter sweeps producing long-format result rows.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ArrayFile, ArraysFile, ScenarioFile};
use crate::design::{Phases, SystemDesign};
use crate::montecarlo::{estimate_gamma_mc, estimate_rate_mc, random_phase_baseline, McConfig};
use crate::optimize::OptimizerConfig;
use crate::report::{optimize_system, rate_of};
use crate::scenario::{Rician, Scenario, SystemKind};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    /// Transmit power in dBm.
    #[serde(rename = "P_S")]
    PS,
    /// BS antenna count.
    #[serde(rename = "T_S")]
    TS,
    /// Elements on IRS 1; IRS 2 gets the rest of `t_total`.
    #[serde(rename = "T1_split")]
    T1Split,
    /// Total IRS elements, split evenly.
    #[serde(rename = "T_total")]
    TTotal,
    /// Rician factor of every link, in dB.
    #[serde(rename = "K")]
    K,
    #[serde(rename = "irs_x")]
    IrsX,
    #[serde(rename = "irs_y")]
    IrsY,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::PS => "P_S",
            SweepVariable::TS => "T_S",
            SweepVariable::T1Split => "T1_split",
            SweepVariable::TTotal => "T_total",
            SweepVariable::K => "K",
            SweepVariable::IrsX => "irs_x",
            SweepVariable::IrsY => "irs_y",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    Optimized,
    /// Uniformly random phases.
    Random,
    /// Optimized and evaluated with every link forced to pure LoS.
    PureLosDesign,
    /// Same with pure NLoS.
    PureNlosDesign,
}

impl DesignKind {
    pub fn name(&self) -> &'static str {
        match self {
            DesignKind::Optimized => "optimized",
            DesignKind::Random => "random",
            DesignKind::PureLosDesign => "pure_los_design",
            DesignKind::PureNlosDesign => "pure_nlos_design",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    GammaAnalytic,
    RateBound,
    RateMc,
    GammaMc,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::GammaAnalytic => "gamma_analytic",
            Metric::RateBound => "rate_bound",
            Metric::RateMc => "rate_mc",
            Metric::GammaMc => "gamma_mc",
        }
    }
}

fn all_systems() -> Vec<SystemKind> {
    SystemKind::ALL.to_vec()
}

fn default_designs() -> Vec<DesignKind> {
    vec![DesignKind::Optimized]
}

fn default_metrics() -> Vec<Metric> {
    vec![Metric::GammaAnalytic, Metric::RateBound]
}

fn default_draws() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    #[serde(default = "all_systems")]
    pub systems: Vec<SystemKind>,
    #[serde(default = "default_designs")]
    pub designs: Vec<DesignKind>,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
    /// Total IRS elements for `T1_split`; defaults to the scenario's `T₁ + T₂`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_total: Option<usize>,
    /// Fixed random designs averaged for the analytic metrics of `random`.
    #[serde(default = "default_draws")]
    pub random_draws: usize,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, values: Vec<f64>) -> Self {
        Self {
            variable,
            values,
            systems: all_systems(),
            designs: default_designs(),
            metrics: default_metrics(),
            t_total: None,
            random_draws: default_draws(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("sweep.values", "must not be empty"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("sweep.values", "must be finite"));
        }
        for (empty, f) in [
            (self.systems.is_empty(), "sweep.systems"),
            (self.designs.is_empty(), "sweep.designs"),
            (self.metrics.is_empty(), "sweep.metrics"),
        ] {
            if empty {
                return Err(Error::config(f, "must not be empty"));
            }
        }
        if self.random_draws == 0 {
            return Err(Error::config("sweep.random_draws", "must be at least 1"));
        }
        Ok(())
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "sweep_variable",
    "sweep_value",
    "system",
    "design",
    "metric",
    "value",
    "std_error",
    "iterations",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub sweep_variable: String,
    pub sweep_value: f64,
    pub system: String,
    pub design: String,
    pub metric: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub iterations: Option<usize>,
}

fn count(v: f64, field: &str) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 && v <= usize::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::config(
            field,
            format!("needs a positive integer, got {v}"),
        ))
    }
}

fn arrays(f: &mut ScenarioFile) -> &mut ArraysFile {
    f.arrays.get_or_insert_with(ArraysFile::default)
}

/// Copy of `file` with the sweep variable set to `value`.
pub fn apply_sweep_value(
    file: &ScenarioFile,
    var: SweepVariable,
    value: f64,
    t_total: Option<usize>,
) -> Result<ScenarioFile> {
    let mut f = file.clone();
    match var {
        SweepVariable::PS => {
            f.p_s_dbm = Some(value);
            f.p_s_w = None;
        }
        SweepVariable::TS => {
            arrays(&mut f).bs = Some(ArrayFile::total(count(value, "sweep.values")?))
        }
        SweepVariable::T1Split => {
            let total = match t_total {
                Some(t) => t,
                None => {
                    let s = file.resolve()?;
                    s.t1() + s.t2()
                }
            };
            let t1 = count(value, "sweep.values")?;
            if t1 >= total {
                return Err(Error::config(
                    "sweep.values",
                    format!("split {t1} leaves no elements of {total}"),
                ));
            }
            let a = arrays(&mut f);
            a.irs1 = Some(ArrayFile::total(t1));
            a.irs2 = Some(ArrayFile::total(total - t1));
            a.irs0 = None;
        }
        SweepVariable::TTotal => {
            let t = count(value, "sweep.values")?;
            if t < 2 {
                return Err(Error::config("sweep.values", "T_total must be at least 2"));
            }
            let a = arrays(&mut f);
            a.irs1 = Some(ArrayFile::total(t / 2));
            a.irs2 = Some(ArrayFile::total(t - t / 2));
            a.irs0 = None;
        }
        SweepVariable::K => {
            f.k_db = Some(value);
            f.k = None;
            f.regime = None;
        }
        SweepVariable::IrsX => f.irs_x = Some(value),
        SweepVariable::IrsY => f.irs_y = Some(value),
    }
    Ok(f)
}

struct Task {
    point: usize,
    system: SystemKind,
    design: DesignKind,
}

fn design_scenario(s: &Scenario<f64>, d: DesignKind) -> Scenario<f64> {
    match d {
        DesignKind::PureLosDesign => s.with_rician(Rician::PureLos),
        DesignKind::PureNlosDesign => s.with_rician(Rician::PureNlos),
        _ => s.clone(),
    }
}

fn evaluate(
    spec: &SweepSpec,
    base: &Scenario<f64>,
    value: f64,
    system: SystemKind,
    design: DesignKind,
    mc: &McConfig,
    opt: &OptimizerConfig<f64>,
) -> Result<Vec<ResultRow>> {
    let s = design_scenario(base, design);
    let row = |metric: Metric,
               value_out: f64,
               std_error: Option<f64>,
               iterations: Option<usize>| ResultRow {
        sweep_variable: spec.variable.name().to_string(),
        sweep_value: value,
        system: system.name().to_string(),
        design: design.name().to_string(),
        metric: metric.name().to_string(),
        value: value_out,
        std_error,
        iterations,
    };
    let mut rows = Vec::with_capacity(spec.metrics.len());
    if design == DesignKind::Random {
        let needs_analytic = spec
            .metrics
            .iter()
            .any(|m| matches!(m, Metric::GammaAnalytic | Metric::RateBound));
        let draws = if needs_analytic {
            Some(random_phase_baseline(
                &s,
                system,
                spec.random_draws,
                mc.seed,
            )?)
        } else {
            None
        };
        let uniform = SystemDesign::new(system, Phases::Uniform)?;
        for &m in &spec.metrics {
            rows.push(match m {
                Metric::GammaAnalytic => row(m, draws.as_ref().expect("drawn").mean, None, None),
                Metric::RateBound => {
                    let v = &draws.as_ref().expect("drawn").values;
                    row(
                        m,
                        v.iter().map(|&g| rate_of(&s, g)).sum::<f64>() / v.len() as f64,
                        None,
                        None,
                    )
                }
                Metric::GammaMc => {
                    let e = estimate_gamma_mc(&s, &uniform, mc)?;
                    row(m, e.mean, Some(e.std_error), None)
                }
                Metric::RateMc => {
                    let e = estimate_rate_mc(&s, &uniform, mc)?;
                    row(m, e.mean, Some(e.std_error), None)
                }
            });
        }
        return Ok(rows);
    }
    let o = optimize_system(&s, system, opt)?;
    let iters = (system == SystemKind::DirsC)
        .then_some(o.report.iterations)
        .flatten();
    for &m in &spec.metrics {
        rows.push(match m {
            Metric::GammaAnalytic => row(m, o.report.gamma, None, iters),
            Metric::RateBound => row(m, o.report.rate_bound, None, iters),
            Metric::GammaMc => {
                let e = estimate_gamma_mc(&s, &o.design, mc)?;
                row(m, e.mean, Some(e.std_error), iters)
            }
            Metric::RateMc => {
                let e = estimate_rate_mc(&s, &o.design, mc)?;
                row(m, e.mean, Some(e.std_error), iters)
            }
        });
    }
    Ok(rows)
}

/// Runs every (value, system, design) combination. Points are evaluated in
/// parallel; rows come back in value, system, design, metric order.
pub fn run_sweep(
    file: &ScenarioFile,
    spec: &SweepSpec,
    mc: &McConfig,
    opt: &OptimizerConfig<f64>,
) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let scenarios = spec
        .values
        .iter()
        .map(|&v| apply_sweep_value(file, spec.variable, v, spec.t_total)?.resolve())
        .collect::<Result<Vec<_>>>()?;
    let mut tasks = Vec::new();
    for point in 0..spec.values.len() {
        for &system in &spec.systems {
            for &design in &spec.designs {
                tasks.push(Task {
                    point,
                    system,
                    design,
                });
            }
        }
    }
    let chunks = tasks
        .par_iter()
        .map(|t| {
            evaluate(
                spec,
                &scenarios[t.point],
                spec.values[t.point],
                t.system,
                t.design,
                mc,
                opt,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}
