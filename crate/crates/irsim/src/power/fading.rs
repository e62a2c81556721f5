use crate::scalar::Real;
use crate::scenario::{LinkFading, Scenario};

/// LoS and NLoS shares `L̄ = Kα/(K+1)`, `L̃ = α/(K+1)` of one link.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Split<R> {
    pub los: R,
    pub nlos: R,
}

impl<R: Real> Split<R> {
    pub fn of(f: &LinkFading<R>) -> Self {
        Self {
            los: f.los_power(),
            nlos: f.nlos_power(),
        }
    }

    /// `L̄ + L̃ = α`.
    pub fn total(&self) -> R {
        self.los + self.nlos
    }
}

/// Per-link fading power splits. Cascaded powers are products of these.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FadingPowers<R> {
    pub s1: Split<R>,
    pub s2: Split<R>,
    pub l12: Split<R>,
    pub su: Split<R>,
    pub l1u: Split<R>,
    pub l2u: Split<R>,
}

pub fn fading_powers<R: Real>(s: &Scenario<R>) -> FadingPowers<R> {
    let l = &s.links;
    FadingPowers {
        s1: Split::of(&l.s1.fading),
        s2: Split::of(&l.s2.fading),
        l12: Split::of(&l.l12.fading),
        su: Split::of(&l.su.fading),
        l1u: Split::of(&l.l1u.fading),
        l2u: Split::of(&l.l2u.fading),
    }
}

impl<R: Real> FadingPowers<R> {
    /// LoS power of the full inter-IRS cascade `L_{S̄1,1̄2,2̄U}`.
    pub fn inter_los(&self) -> R {
        self.s1.los * self.l12.los * self.l2u.los
    }
}
