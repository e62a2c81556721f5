use ndarray::Array1;

use super::regime_error;
use crate::channel::{check_phases, reflection, single_los_components, SingleLos};
use crate::linalg::{conj, diag_left, diag_right, herm, inner, quad};
use crate::power::{single_los_geometry, SingleGeometry, Split};
use crate::scalar::{wrap, CMat, CVec, Real};
use crate::scenario::{Placement, Regime, Scenario};
use crate::{Error, Result};

/// IRS 0 influences the average power iff both of its links carry LoS.
pub fn single_irs_matters<R: Real>(s: &Scenario<R>, p: Placement) -> Result<bool> {
    let irs = s.single_irs(p)?;
    Ok(irs.s0.fading.has_los() && irs.l0u.fading.has_los())
}

/// Average-power model of the single-IRS counterpart.
#[derive(Clone, Debug)]
pub struct SingleModel<R> {
    pub placement: Placement,
    pub regime: Regime,
    pub matters: bool,
    pub s0: Split<R>,
    pub l0u: Split<R>,
    pub su: Split<R>,
    pub los: SingleLos<R>,
    pub geometry: SingleGeometry<R>,
    pub a0: CMat<R>,
    pub b0: CVec<R>,
    pub t_s: usize,
    pub t0: usize,
}

impl<R: Real> SingleModel<R> {
    pub fn new(s: &Scenario<R>, p: Placement) -> Result<Self> {
        s.validate()?;
        let irs = s.single_irs(p)?;
        let los = single_los_components(s, p)?;
        let h0u_c = conj(&los.h_0u);
        let a0 = diag_right(
            &diag_left(&h0u_c, &los.h_s0.dot(&herm(&los.h_s0))),
            &los.h_0u,
        );
        let b0 = diag_left(&h0u_c, &los.h_s0).dot(&los.h_su);
        Ok(Self {
            placement: p,
            regime: s.single_regime(p)?,
            matters: single_irs_matters(s, p)?,
            s0: Split::of(&irs.s0.fading),
            l0u: Split::of(&irs.l0u.fading),
            su: Split::of(&s.links.su.fading),
            geometry: single_los_geometry(&los),
            los,
            a0,
            b0,
            t_s: s.t_s(),
            t0: irs.array.total(),
        })
    }

    fn dims(&self) -> (R, R) {
        (R::of(self.t_s as f64), R::of(self.t0 as f64))
    }

    pub fn gamma(&self, phi0: &Array1<R>) -> Result<R> {
        if phi0.len() != self.t0 {
            return Err(Error::Dimension(format!(
                "{} phases for an IRS with {} elements",
                phi0.len(),
                self.t0
            )));
        }
        check_phases(phi0)?;
        Ok(match self.regime {
            Regime::General => self.gamma_general(phi0),
            Regime::PureLos => self.gamma_pure_los(phi0)?,
            Regime::PureNlos => self.gamma_pure_nlos()?,
        })
    }

    fn gamma_general(&self, phi0: &Array1<R>) -> R {
        let (ts, t) = self.dims();
        let v0 = reflection(phi0);
        let l0 = self.s0.los * self.l0u.los;
        let scatter = self.s0.nlos * self.l0u.los
            + self.s0.los * self.l0u.nlos
            + self.s0.nlos * self.l0u.nlos;
        l0 * quad(&v0, &self.a0)
            + R::of(2.0) * (self.su.los * l0).sqrt() * inner(&v0, &self.b0).re
            + self.su.total() * ts
            + scatter * ts * t
    }

    pub fn gamma_pure_los(&self, phi0: &Array1<R>) -> Result<R> {
        if self.regime != Regime::PureLos {
            return Err(regime_error("pure_los", self.regime));
        }
        let (ts, _) = self.dims();
        let v0 = reflection(phi0);
        let g0 = self.s0.total() * self.l0u.total();
        let a_su = self.su.total();
        Ok(a_su * ts
            + g0 * quad(&v0, &self.a0)
            + R::of(2.0) * (a_su * g0).sqrt() * inner(&v0, &self.b0).re)
    }

    pub fn gamma_pure_nlos(&self) -> Result<R> {
        if self.regime != Regime::PureNlos {
            return Err(regime_error("pure_nlos", self.regime));
        }
        let (ts, t) = self.dims();
        Ok(self.su.total() * ts + self.s0.total() * self.l0u.total() * ts * t)
    }

    /// `Λ(−Δ_{S0,0U} − ∠r_{S0,SU})`, or `None` when IRS 0 has no influence.
    pub fn optimal_phases(&self) -> Option<Array1<R>> {
        if !self.matters {
            return None;
        }
        let c = -self.geometry.r_s0_su.arg();
        Some(self.geometry.delta_s0_0u.mapv(|d| wrap(c - d)))
    }

    pub fn leading_term(&self) -> R {
        let (ts, t) = self.dims();
        match self.regime {
            Regime::PureLos => self.s0.total() * self.l0u.total() * ts * t * t,
            Regime::PureNlos => self.s0.total() * self.l0u.total() * ts * t,
            Regime::General if self.matters => self.s0.los * self.l0u.los * ts * t * t,
            Regime::General => {
                (self.s0.nlos * self.l0u.los
                    + self.s0.los * self.l0u.nlos
                    + self.s0.nlos * self.l0u.nlos)
                    * ts
                    * t
            }
        }
    }
}
