use super::{fading_powers, Case, CaseLabel, FadingPowers};
use crate::scalar::Real;
use crate::scenario::{Regime, Scenario};

/// `T_S·T₁·T₂` coefficient of the phase-independent part.
pub fn case0_cascade_coefficient<R: Real>(f: &FadingPowers<R>) -> R {
    let (s1, i12, u2) = (f.s1, f.l12, f.l2u);
    s1.nlos * i12.los * u2.nlos
        + s1.los * i12.nlos * u2.los
        + s1.los * i12.nlos * u2.nlos
        + s1.nlos * i12.nlos * u2.los
        + s1.nlos * i12.nlos * u2.nlos
}

/// Leading term of the optimal average power as the IRS sizes grow.
///
/// Some sub-cases make the stated coefficient vanish (e.g. Case 1 with no LoS on
/// the inter-IRS link); the term is returned as is.
pub fn asymptotic_gamma_dirc<R: Real>(s: &Scenario<R>, label: CaseLabel) -> R {
    let f = fading_powers(s);
    let ts = R::of(s.t_s() as f64);
    let t1 = R::of(s.t1() as f64);
    let t2 = R::of(s.t2() as f64);
    let alpha3 = f.s1.total() * f.l12.total() * f.l2u.total();
    match (label.regime, label.case) {
        (Regime::PureLos, _) => alpha3 * ts * t1 * t1 * t2 * t2,
        (Regime::PureNlos, _) => alpha3 * ts * t1 * t2,
        (Regime::General, Case::Case3) => f.inter_los() * ts * t1 * t1 * t2 * t2,
        (Regime::General, Case::Case1) => f.s1.los * f.l12.los * f.l2u.nlos * ts * t1 * t1 * t2,
        (Regime::General, Case::Case2) => f.s1.nlos * f.l12.los * f.l2u.los * ts * t1 * t2 * t2,
        (Regime::General, Case::Case0) => case0_cascade_coefficient(&f) * ts * t1 * t2,
    }
}
