use ndarray::Array1;

use crate::channel::PhaseShifts;
use crate::power::{Case, PowerModel};
use crate::scalar::{wrap, Real};
use crate::scenario::Regime;
use crate::{Error, Result};

/// `Λ(−Δ + c·1)`.
fn aligned<R: Real>(delta: &Array1<R>, c: R) -> Array1<R> {
    delta.mapv(|d| wrap(c - d))
}

fn require<R: Real>(m: &PowerModel<R>, case: Case, what: &'static str) -> Result<()> {
    if m.label.regime == Regime::General && m.label.case == case {
        Ok(())
    } else {
        Err(Error::NotApplicable(what))
    }
}

/// Global optimum of IRS 1 in Case 1 when `K_1U = 0` or `K_12 = 0`.
pub fn closed_form_case1<R: Real>(m: &PowerModel<R>) -> Result<PhaseShifts<R>> {
    const WHAT: &str = "the Case 1 closed form";
    require(m, Case::Case1, WHAT)?;
    let (f, g) = (&m.fading, &m.geometry);
    let phi1 = if f.l1u.los == R::zero() {
        aligned(&g.delta_s1_12, -(g.r_s1_s2 * g.r_s2_12).arg())
    } else if f.l12.los == R::zero() {
        aligned(&g.delta_s1_1u, -g.r_s1_su.arg())
    } else {
        return Err(Error::NotApplicable(WHAT));
    };
    Ok(PhaseShifts {
        phi1,
        phi2: Array1::zeros(m.t2),
    })
}

/// Global optimum of IRS 2 in Case 2 when `K_S2 = 0` or `K_12 = 0`.
pub fn closed_form_case2<R: Real>(m: &PowerModel<R>) -> Result<PhaseShifts<R>> {
    const WHAT: &str = "the Case 2 closed form";
    require(m, Case::Case2, WHAT)?;
    let (f, g) = (&m.fading, &m.geometry);
    let phi2 = if f.s2.los == R::zero() {
        aligned(&g.delta_12_2u, -g.r_12_1u.arg())
    } else if f.l12.los == R::zero() {
        aligned(&g.delta_s2_2u, -g.r_s2_su.arg())
    } else {
        return Err(Error::NotApplicable(WHAT));
    };
    Ok(PhaseShifts {
        phi1: Array1::zeros(m.t1),
        phi2,
    })
}

/// One member of the optimal family in Case 3 when `K_S2 = K_1U = 0` or
/// `K_12 = K_SU = 0`; every `psi` gives the same objective.
pub fn closed_form_case3<R: Real>(m: &PowerModel<R>, psi: R) -> Result<PhaseShifts<R>> {
    const WHAT: &str = "the Case 3 closed form";
    require(m, Case::Case3, WHAT)?;
    let (f, g) = (&m.fading, &m.geometry);
    let half = R::of(0.5);
    if f.s2.los == R::zero() && f.l1u.los == R::zero() {
        let c = half * g.r_s1_su.arg();
        Ok(PhaseShifts {
            phi1: aligned(&g.delta_s1_12, psi - c),
            phi2: aligned(&g.delta_12_2u, -psi - c),
        })
    } else if f.l12.los == R::zero() && f.su.los == R::zero() {
        Ok(PhaseShifts {
            phi1: aligned(&g.delta_s1_1u, psi),
            phi2: aligned(&g.delta_s2_2u, psi + g.r_s1_s2.arg()),
        })
    } else {
        Err(Error::NotApplicable(WHAT))
    }
}
