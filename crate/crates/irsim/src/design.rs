//! A system together with its phase configuration, and its analytic average power.

use ndarray::Array1;
use rand::Rng;

use crate::baseline::{gamma_no_irs, DncModel, SingleModel};
use crate::channel::{random_phases, PhaseShifts};
use crate::power::PowerModel;
use crate::scalar::Real;
use crate::scenario::{Scenario, SystemKind};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Phases<R> {
    /// Fixed phases of IRS 1 and IRS 2.
    Dual(PhaseShifts<R>),
    /// Fixed phases of IRS 0.
    Single(Array1<R>),
    /// No IRS to configure.
    Direct,
    /// Fresh uniform phases in every slot.
    Uniform,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemDesign<R> {
    pub kind: SystemKind,
    pub phases: Phases<R>,
}

impl<R: Real> SystemDesign<R> {
    pub fn new(kind: SystemKind, phases: Phases<R>) -> Result<Self> {
        let ok = matches!(
            (kind, &phases),
            (_, Phases::Uniform)
                | (SystemKind::DirsC | SystemKind::DirsNc, Phases::Dual(_))
                | (
                    SystemKind::SirsPos1 | SystemKind::SirsPos2 | SystemKind::SirsPosMid,
                    Phases::Single(_)
                )
                | (SystemKind::NoIrs, Phases::Direct)
        );
        if ok {
            Ok(Self { kind, phases })
        } else {
            Err(Error::Dimension(format!(
                "phase layout does not fit {kind}"
            )))
        }
    }

    pub fn dirs_c(ph: PhaseShifts<R>) -> Self {
        Self {
            kind: SystemKind::DirsC,
            phases: Phases::Dual(ph),
        }
    }

    pub fn dirs_nc(ph: PhaseShifts<R>) -> Self {
        Self {
            kind: SystemKind::DirsNc,
            phases: Phases::Dual(ph),
        }
    }

    pub fn no_irs() -> Self {
        Self {
            kind: SystemKind::NoIrs,
            phases: Phases::Direct,
        }
    }

    /// Zero phases of the right shape for `kind`.
    pub fn zeros(s: &Scenario<R>, kind: SystemKind) -> Result<Self> {
        let phases = match kind {
            SystemKind::DirsC | SystemKind::DirsNc => {
                Phases::Dual(PhaseShifts::zeros(s.t1(), s.t2()))
            }
            SystemKind::NoIrs => Phases::Direct,
            k => {
                let p = k.placement().expect("single-IRS kind");
                Phases::Single(Array1::zeros(s.single_irs(p)?.array.total()))
            }
        };
        Ok(Self { kind, phases })
    }

    /// Uniformly random fixed phases of the right shape for `kind`.
    pub fn random<G: Rng + ?Sized>(s: &Scenario<R>, kind: SystemKind, rng: &mut G) -> Result<Self> {
        let phases = match kind {
            SystemKind::DirsC | SystemKind::DirsNc => {
                Phases::Dual(PhaseShifts::random(s.t1(), s.t2(), rng))
            }
            SystemKind::NoIrs => Phases::Direct,
            k => {
                let p = k.placement().expect("single-IRS kind");
                Phases::Single(random_phases(s.single_irs(p)?.array.total(), rng))
            }
        };
        Ok(Self { kind, phases })
    }
}

/// Closed-form average power of a fixed design in the scenario's regime.
pub fn analytic_gamma<R: Real>(s: &Scenario<R>, d: &SystemDesign<R>) -> Result<R> {
    match (&d.kind, &d.phases) {
        (_, Phases::Uniform) => Err(Error::NotApplicable(
            "the analytic value of per-slot random phases",
        )),
        (SystemKind::DirsC, Phases::Dual(ph)) => PowerModel::new(s)?.evaluate(ph),
        (SystemKind::DirsNc, Phases::Dual(ph)) => DncModel::new(s)?.gamma(ph),
        (SystemKind::NoIrs, Phases::Direct) => Ok(gamma_no_irs(s)),
        (k, Phases::Single(phi0)) if k.placement().is_some() => {
            SingleModel::new(s, k.placement().expect("checked"))?.gamma(phi0)
        }
        (k, _) => Err(Error::Dimension(format!("phase layout does not fit {k}"))),
    }
}
