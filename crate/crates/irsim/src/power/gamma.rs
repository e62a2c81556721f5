use num_complex::Complex;

use super::{
    classify_case, coupling_matrices, fading_powers, los_geometry, Case, CaseLabel,
    CouplingMatrices, FadingPowers, LosGeometry,
};
use crate::channel::{los_components, LosComponents, PhaseShifts};
use crate::linalg::{conj, inner, quad};
use crate::scalar::{log2_1p, CVec, Cx, Real};
use crate::scenario::{Regime, Scenario};
use crate::{Error, Result};

/// Everything the average-power formulas need, computed once per scenario.
#[derive(Clone, Debug)]
pub struct PowerModel<R> {
    pub label: CaseLabel,
    pub fading: FadingPowers<R>,
    pub los: LosComponents<R>,
    pub geometry: LosGeometry<R>,
    pub coupling: CouplingMatrices<R>,
    pub t_s: usize,
    pub t1: usize,
    pub t2: usize,
    pub snr: R,
}

fn re<R: Real>(x: Cx<R>) -> R {
    x.re
}

impl<R: Real> PowerModel<R> {
    pub fn new(s: &Scenario<R>) -> Result<Self> {
        s.validate()?;
        let los = los_components(s);
        Ok(Self {
            label: classify_case(s),
            fading: fading_powers(s),
            geometry: los_geometry(&los),
            coupling: coupling_matrices(&los),
            los,
            t_s: s.t_s(),
            t1: s.t1(),
            t2: s.t2(),
            snr: s.snr(),
        })
    }

    fn dims(&self) -> (R, R, R) {
        (
            R::of(self.t_s as f64),
            R::of(self.t1 as f64),
            R::of(self.t2 as f64),
        )
    }

    fn check(&self, ph: &PhaseShifts<R>) -> Result<()> {
        if ph.phi1.len() != self.t1 || ph.phi2.len() != self.t2 {
            return Err(Error::Dimension(format!(
                "phases have lengths ({}, {}), arrays ({}, {})",
                ph.phi1.len(),
                ph.phi2.len(),
                self.t1,
                self.t2
            )));
        }
        Ok(())
    }

    /// Phase-independent part.
    pub fn gamma0(&self) -> R {
        let f = &self.fading;
        let (ts, t1, t2) = self.dims();
        let (s1, s2, u1, u2) = (f.s1, f.s2, f.l1u, f.l2u);
        let c1 = s1.nlos * u1.los + s1.los * u1.nlos + s1.nlos * u1.nlos;
        let c2 = s2.nlos * u2.los + s2.los * u2.nlos + s2.nlos * u2.nlos;
        f.su.total() * ts
            + c1 * ts * t1
            + c2 * ts * t2
            + super::case0_cascade_coefficient(f) * ts * t1 * t2
    }

    /// Quadratic term of IRS 1 alone.
    pub fn a1_weights(&self) -> (R, R) {
        let f = &self.fading;
        let (_, _, t2) = self.dims();
        (f.s1.los * f.l1u.los, f.s1.los * f.l12.los * f.l2u.nlos * t2)
    }

    /// Linear term coefficient of IRS 1 alone.
    pub fn b1(&self) -> CVec<R> {
        let f = &self.fading;
        let c = &self.coupling;
        let w11 = (f.su.los * f.s1.los * f.l1u.los).sqrt();
        let w12 = (f.s2.los * f.l2u.nlos * f.s1.los * f.l12.los * f.l2u.nlos).sqrt();
        &c.b11 * w11 + &(&c.b12 * w12)
    }

    pub fn a2_weights(&self) -> (R, R) {
        let f = &self.fading;
        let (ts, _, _) = self.dims();
        (f.s2.los * f.l2u.los, f.s1.nlos * f.l12.los * f.l2u.los * ts)
    }

    pub fn b2(&self) -> CVec<R> {
        let f = &self.fading;
        let c = &self.coupling;
        let (ts, _, _) = self.dims();
        let w21 = (f.su.los * f.s2.los * f.l2u.los).sqrt();
        let w22 = (f.s1.nlos * f.l1u.los * f.s1.nlos * f.l12.los * f.l2u.los).sqrt() * ts;
        &c.b21 * w21 + &(&c.b22 * w22)
    }

    fn irs1_part(&self, v1: &CVec<R>) -> R {
        let c = &self.coupling;
        let (w11, w12) = self.a1_weights();
        w11 * quad(v1, &c.a11) + w12 * quad(v1, &c.a12) + R::of(2.0) * re(inner(v1, &self.b1()))
    }

    fn irs2_part(&self, v2: &CVec<R>) -> R {
        let c = &self.coupling;
        let (w21, w22) = self.a2_weights();
        w21 * quad(v2, &c.a21) + w22 * quad(v2, &c.a22) + R::of(2.0) * re(inner(v2, &self.b2()))
    }

    pub fn gamma1(&self, v1: &CVec<R>) -> R {
        self.irs1_part(v1) + self.gamma0()
    }

    pub fn gamma2(&self, v2: &CVec<R>) -> R {
        self.irs2_part(v2) + self.gamma0()
    }

    /// Full expression; valid for every finite Rician factor.
    pub fn gamma3(&self, v1: &CVec<R>, v2: &CVec<R>) -> R {
        let f = &self.fading;
        let c = &self.coupling;
        let (ts, _, _) = self.dims();
        let l3 = f.inter_los();
        let l1 = f.s1.los * f.l1u.los;
        let l2 = f.s2.los * f.l2u.los;
        let v1c = conj(v1);

        let quartic = l3 * ts * inner(v2, &c.a3.dot(&v1c)).norm_sqr();
        // diag(v₂ᴴB₁) applied to a T₁ vector
        let row = c.big_b1.t().dot(&conj(v2));
        let inner_vec =
            &c.big_b2.dot(v1) * (l1 * l3).sqrt() + &(&c.big_b3.dot(v2) * (l2 * l3).sqrt());
        let mut cross: Cx<R> = Complex::new(R::zero(), R::zero());
        for t in 0..self.t1 {
            cross += v1[t].conj() * row[t] * inner_vec[t];
        }
        let tail =
            &c.big_b4.dot(&v1c) * (f.su.los * l3).sqrt() + &(&c.big_b5.dot(v1) * (l1 * l2).sqrt());
        cross += inner(v2, &tail);
        self.irs1_part(v1) + self.irs2_part(v2) + self.gamma0() + quartic + R::of(2.0) * cross.re
    }

    /// Case-dispatched average power in the general regime.
    pub fn gamma(&self, ph: &PhaseShifts<R>) -> Result<R> {
        if self.label.regime != Regime::General {
            return Err(Error::Regime {
                expected: "general",
                found: self.label.regime.name(),
            });
        }
        self.check(ph)?;
        Ok(self.dispatch(ph))
    }

    fn dispatch(&self, ph: &PhaseShifts<R>) -> R {
        match self.label.case {
            Case::Case0 => self.gamma0(),
            Case::Case1 => self.gamma1(&ph.v1()),
            Case::Case2 => self.gamma2(&ph.v2()),
            Case::Case3 => self.gamma3(&ph.v1(), &ph.v2()),
        }
    }

    /// Pure-LoS average power, which is the deterministic `‖h̄_e‖²`.
    pub fn gamma_pure_los(&self, ph: &PhaseShifts<R>) -> Result<R> {
        if self.label.regime != Regime::PureLos {
            return Err(Error::Regime {
                expected: "pure_los",
                found: self.label.regime.name(),
            });
        }
        self.check(ph)?;
        let f = &self.fading;
        let c = &self.coupling;
        let (ts, _, _) = self.dims();
        let (v1, v2) = (ph.v1(), ph.v2());
        let v1c = conj(&v1);
        let (a_s1, a_s2, a_12) = (f.s1.total(), f.s2.total(), f.l12.total());
        let (a_su, a_1u, a_2u) = (f.su.total(), f.l1u.total(), f.l2u.total());
        let g1 = a_s1 * a_1u;
        let g2 = a_s2 * a_2u;
        let g3 = a_s1 * a_12 * a_2u;
        let two = R::of(2.0);

        let mut out = a_su * ts;
        out += g1 * quad(&v1, &c.a11) + two * (a_su * g1).sqrt() * inner(&v1, &c.b11).re;
        out += g2 * quad(&v2, &c.a21) + two * (a_su * g2).sqrt() * inner(&v2, &c.b21).re;
        out += g3 * ts * inner(&v2, &c.a3.dot(&v1c)).norm_sqr();
        let row = c.big_b1.t().dot(&conj(&v2));
        let mix = &c.big_b2.dot(&v1) * (g1 * g3).sqrt() + &(&c.big_b3.dot(&v2) * (g2 * g3).sqrt());
        let mut cross: Cx<R> = Complex::new(R::zero(), R::zero());
        for t in 0..self.t1 {
            cross += v1[t].conj() * row[t] * mix[t];
        }
        let tail =
            &c.big_b4.dot(&v1c) * (a_su * g3).sqrt() + &(&c.big_b5.dot(&v1) * (g1 * g2).sqrt());
        cross += inner(&v2, &tail);
        Ok(out + two * cross.re)
    }

    /// Pure-NLoS average power; phase independent.
    pub fn gamma_pure_nlos(&self) -> Result<R> {
        if self.label.regime != Regime::PureNlos {
            return Err(Error::Regime {
                expected: "pure_nlos",
                found: self.label.regime.name(),
            });
        }
        let f = &self.fading;
        let (ts, t1, t2) = self.dims();
        Ok(f.su.total() * ts
            + f.s1.total() * f.l1u.total() * ts * t1
            + f.s2.total() * f.l2u.total() * ts * t2
            + f.s1.total() * f.l12.total() * f.l2u.total() * ts * t1 * t2)
    }

    /// Average power in whichever regime the scenario is in.
    pub fn evaluate(&self, ph: &PhaseShifts<R>) -> Result<R> {
        match self.label.regime {
            Regime::General => self.gamma(ph),
            Regime::PureLos => self.gamma_pure_los(ph),
            Regime::PureNlos => self.gamma_pure_nlos(),
        }
    }

    pub fn rate_bound(&self, gamma: R) -> R {
        log2_1p(self.snr * gamma)
    }
}

pub fn gamma<R: Real>(s: &Scenario<R>, ph: &PhaseShifts<R>) -> Result<(R, CaseLabel)> {
    let m = PowerModel::new(s)?;
    Ok((m.gamma(ph)?, m.label))
}

pub fn gamma_pure_los<R: Real>(s: &Scenario<R>, ph: &PhaseShifts<R>) -> Result<R> {
    PowerModel::new(s)?.gamma_pure_los(ph)
}

pub fn gamma_pure_nlos<R: Real>(s: &Scenario<R>) -> Result<R> {
    PowerModel::new(s)?.gamma_pure_nlos()
}

/// `log₂(1 + (P_S/σ²)·γ)`.
pub fn rate_bound<R: Real>(s: &Scenario<R>, gamma: R) -> Result<R> {
    if !(gamma >= R::zero()) {
        return Err(Error::Domain(format!(
            "average power must be nonnegative, got {gamma}"
        )));
    }
    Ok(log2_1p(s.snr() * gamma))
}
