//! Counterpart systems: double IRS without the inter-IRS link, a single IRS
//! with the same total element count, and no IRS at all.

mod dnc;
mod single;

pub use dnc::{aligned_phases_dnc, classify_case_dnc, optimal_phases_dnc, DncModel};
pub use single::{single_irs_matters, SingleModel};

use ndarray::Array1;

use crate::channel::{
    equivalent_channel_dnc, equivalent_channel_single, ChannelRealization, PhaseShifts,
    SingleRealization,
};
use crate::design::Phases;
use crate::scalar::{CVec, Real};
use crate::scenario::{Placement, Regime, Scenario, SystemKind};
use crate::{Error, Result};

/// Average power of the double-IRS system without the inter-IRS link.
pub fn gamma_dnc<R: Real>(s: &Scenario<R>, ph: &PhaseShifts<R>) -> Result<R> {
    DncModel::new(s)?.gamma(ph)
}

/// Average power of the single-IRS counterpart at placement `p`.
pub fn gamma_sgl<R: Real>(s: &Scenario<R>, p: Placement, phi0: &Array1<R>) -> Result<R> {
    SingleModel::new(s, p)?.gamma(phi0)
}

/// `None` when IRS 0 has no influence on the average power.
pub fn optimal_phases_sgl<R: Real>(s: &Scenario<R>, p: Placement) -> Result<Option<Array1<R>>> {
    Ok(SingleModel::new(s, p)?.optimal_phases())
}

/// A channel draw for either deployment.
#[derive(Clone, Copy, Debug)]
pub enum Realization<'a, R> {
    Dual(&'a ChannelRealization<R>),
    Single(&'a SingleRealization<R>),
}

/// Conjugated equivalent channel `h_eᴴ` of a counterpart system.
pub fn equivalent_channel_baseline<R: Real>(
    kind: SystemKind,
    real: Realization<'_, R>,
    phases: &Phases<R>,
) -> Result<CVec<R>> {
    let mismatch = || Error::Dimension(format!("realization or phases do not fit {kind}"));
    match (kind, real, phases) {
        (SystemKind::DirsNc, Realization::Dual(r), Phases::Dual(ph)) => {
            equivalent_channel_dnc(r, ph)
        }
        (SystemKind::NoIrs, Realization::Dual(r), _) => Ok(r.h_su.mapv(|h| h.conj())),
        (SystemKind::NoIrs, Realization::Single(r), _) => Ok(r.h_su.mapv(|h| h.conj())),
        (k, Realization::Single(r), Phases::Single(phi0)) if k.placement().is_some() => {
            equivalent_channel_single(r, phi0)
        }
        _ => Err(mismatch()),
    }
}

/// Leading term of the optimal average power of a counterpart system.
pub fn asymptotic_gamma_baseline<R: Real>(kind: SystemKind, s: &Scenario<R>) -> Result<R> {
    let ts = R::of(s.t_s() as f64);
    match kind {
        SystemKind::DirsC => Err(Error::NotApplicable("a baseline leading term for dirs_c")),
        SystemKind::NoIrs => Ok(s.links.su.fading.alpha * ts),
        SystemKind::DirsNc => Ok(DncModel::new(s)?.leading_term()),
        k => {
            let p = k.placement().expect("single-IRS kind");
            Ok(SingleModel::new(s, p)?.leading_term())
        }
    }
}

/// `α_SU·T_S`, the average power of the direct link alone.
pub fn gamma_no_irs<R: Real>(s: &Scenario<R>) -> R {
    s.links.su.fading.alpha * R::of(s.t_s() as f64)
}

pub(crate) fn regime_error(expected: &'static str, found: Regime) -> Error {
    Error::Regime {
        expected,
        found: found.name(),
    }
}
