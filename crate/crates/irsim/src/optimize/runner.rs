use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    bcd_block_phi1, build_cd_coefficients, cd_sweep, closed_form_case1, closed_form_case2,
    closed_form_case3, CdMode,
};
use crate::channel::PhaseShifts;
use crate::power::{Case, PowerModel};
use crate::scalar::Real;
use crate::scenario::Regime;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum InitMode<R> {
    Zeros,
    Random(u64),
    Given(PhaseShifts<R>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig<R> {
    pub max_iterations: usize,
    /// Stop once one outer pass improves the objective by less than this fraction.
    pub rel_tolerance: R,
    pub init: InitMode<R>,
    /// Free common phase of the Case 3 closed-form family.
    pub psi: R,
}

impl<R: Real> Default for OptimizerConfig<R> {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            rel_tolerance: R::of(1e-8),
            init: InitMode::Zeros,
            psi: R::zero(),
        }
    }
}

impl<R: Real> OptimizerConfig<R> {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::config("max_iterations", "must be at least 1"));
        }
        if !(self.rel_tolerance > R::zero()) {
            return Err(Error::config("rel_tolerance", "must be positive"));
        }
        Ok(())
    }
}

/// How the reported phases were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerPath {
    /// The average power does not depend on the phases.
    NoOp,
    ClosedForm,
    CoordinateDescent,
    BlockCoordinateDescent,
}

impl fmt::Display for OptimizerPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptimizerPath::NoOp => "no optimization needed",
            OptimizerPath::ClosedForm => "closed-form",
            OptimizerPath::CoordinateDescent => "coordinate descent",
            OptimizerPath::BlockCoordinateDescent => "block coordinate descent",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerTrace<R> {
    /// Objective at the start and after every outer pass.
    pub objective: Vec<R>,
    pub phases: PhaseShifts<R>,
    pub converged: bool,
    pub iterations: usize,
    pub path: OptimizerPath,
}

impl<R: Real> OptimizerTrace<R> {
    pub fn final_objective(&self) -> R {
        *self.objective.last().expect("trace is never empty")
    }
}

fn initial<R: Real>(m: &PowerModel<R>, init: &InitMode<R>) -> Result<PhaseShifts<R>> {
    match init {
        InitMode::Zeros => Ok(PhaseShifts::zeros(m.t1, m.t2)),
        InitMode::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok(PhaseShifts::random(m.t1, m.t2, &mut rng))
        }
        InitMode::Given(p) => {
            if p.phi1.len() != m.t1 || p.phi2.len() != m.t2 {
                return Err(Error::Dimension(
                    "initial phases do not match the arrays".into(),
                ));
            }
            PhaseShifts::new(p.phi1.clone(), p.phi2.clone())
        }
    }
}

fn single<R: Real>(
    m: &PowerModel<R>,
    phases: PhaseShifts<R>,
    path: OptimizerPath,
) -> Result<OptimizerTrace<R>> {
    Ok(OptimizerTrace {
        objective: vec![m.evaluate(&phases)?],
        phases,
        converged: true,
        iterations: 0,
        path,
    })
}

/// Picks a closed form where one is known, an iterative method otherwise.
pub fn run_optimizer<R: Real>(
    m: &PowerModel<R>,
    opt: &OptimizerConfig<R>,
) -> Result<OptimizerTrace<R>> {
    opt.validate()?;
    if m.label.regime == Regime::General {
        let closed = match m.label.case {
            Case::Case0 => None,
            Case::Case1 => closed_form_case1(m).ok(),
            Case::Case2 => closed_form_case2(m).ok(),
            Case::Case3 => closed_form_case3(m, opt.psi).ok(),
        };
        if let Some(p) = closed {
            return single(m, p, OptimizerPath::ClosedForm);
        }
    }
    coordinate_descent(m, opt)
}

/// Iterative optimization only: element-wise coordinate descent in the
/// general regime, block coordinate descent in pure LoS.
pub fn coordinate_descent<R: Real>(
    m: &PowerModel<R>,
    opt: &OptimizerConfig<R>,
) -> Result<OptimizerTrace<R>> {
    opt.validate()?;
    let mut ph = initial(m, &opt.init)?;
    let regime = m.label.regime;
    if regime == Regime::PureNlos || (regime == Regime::General && m.label.case == Case::Case0) {
        return single(m, ph, OptimizerPath::NoOp);
    }
    let path = if regime == Regime::PureLos {
        OptimizerPath::BlockCoordinateDescent
    } else {
        OptimizerPath::CoordinateDescent
    };

    // fixed coefficients when only one IRS matters
    let fixed = match (regime, m.label.case) {
        (Regime::General, Case::Case1) => Some(build_cd_coefficients(m, &ph, CdMode::Case1)?),
        (Regime::General, Case::Case2) => Some(build_cd_coefficients(m, &ph, CdMode::Case2)?),
        _ => None,
    };

    let mut objective = vec![m.evaluate(&ph)?];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opt.max_iterations {
        iterations += 1;
        match (&fixed, regime) {
            (Some(c), _) if c.mode == CdMode::Case1 => cd_sweep(c, &mut ph.phi1),
            (Some(c), _) => cd_sweep(c, &mut ph.phi2),
            (None, Regime::PureLos) => {
                ph.phi1 = bcd_block_phi1(m, &ph.phi2, &ph.phi1)?;
                let c2 = build_cd_coefficients(m, &ph, CdMode::PureLosIrs2)?;
                cd_sweep(&c2, &mut ph.phi2);
            }
            (None, _) => {
                let c1 = build_cd_coefficients(m, &ph, CdMode::Case3Irs1)?;
                cd_sweep(&c1, &mut ph.phi1);
                let c2 = build_cd_coefficients(m, &ph, CdMode::Case3Irs2)?;
                cd_sweep(&c2, &mut ph.phi2);
            }
        }
        let prev = *objective.last().expect("nonempty");
        let next = m.evaluate(&ph)?;
        objective.push(next);
        if next - prev <= opt.rel_tolerance * prev.abs().max(R::min_positive_value()) {
            converged = true;
            break;
        }
    }
    Ok(OptimizerTrace {
        objective,
        phases: ph,
        converged,
        iterations,
        path,
    })
}
