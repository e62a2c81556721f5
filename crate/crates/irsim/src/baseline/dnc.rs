use ndarray::Array1;

use crate::channel::PhaseShifts;
use crate::linalg::{inner, quad};
use crate::power::{Case, CaseLabel, PowerModel};
use crate::scalar::{cis, wrap, Cx, Real};
use crate::scenario::{Regime, Scenario};
use crate::Result;

/// Case taxonomy without the inter-IRS link: IRS `l` matters iff `K_Sl, K_lU > 0`.
pub fn classify_case_dnc<R: Real>(s: &Scenario<R>) -> CaseLabel {
    let l = &s.links;
    let irs1 = l.s1.fading.has_los() && l.l1u.fading.has_los();
    let irs2 = l.s2.fading.has_los() && l.l2u.fading.has_los();
    CaseLabel {
        case: Case::from_influence(irs1, irs2),
        regime: Regime::of([&l.s1, &l.s2, &l.su, &l.l1u, &l.l2u]),
    }
}

/// Average-power model of the non-cooperative double-IRS system.
#[derive(Clone, Debug)]
pub struct DncModel<R> {
    pub label: CaseLabel,
    pub inner: PowerModel<R>,
}

impl<R: Real> DncModel<R> {
    pub fn new(s: &Scenario<R>) -> Result<Self> {
        Ok(Self {
            label: classify_case_dnc(s),
            inner: PowerModel::new(s)?,
        })
    }

    fn dims(&self) -> (R, R, R) {
        let m = &self.inner;
        (R::of(m.t_s as f64), R::of(m.t1 as f64), R::of(m.t2 as f64))
    }

    /// `(L_{S̄1,1̄U}, L_{S̄2,2̄U}, L̄_SU)` in the general regime, `α` products in pure LoS.
    fn los_weights(&self) -> (R, R, R) {
        let f = &self.inner.fading;
        (f.s1.los * f.l1u.los, f.s2.los * f.l2u.los, f.su.los)
    }

    pub fn gamma0(&self) -> R {
        let f = &self.inner.fading;
        let (ts, t1, t2) = self.dims();
        let c1 = f.s1.nlos * f.l1u.los + f.s1.los * f.l1u.nlos + f.s1.nlos * f.l1u.nlos;
        let c2 = f.s2.nlos * f.l2u.los + f.s2.los * f.l2u.nlos + f.s2.nlos * f.l2u.nlos;
        f.su.total() * ts + c1 * ts * t1 + c2 * ts * t2
    }

    fn part1(&self, ph: &PhaseShifts<R>) -> R {
        let c = &self.inner.coupling;
        let (l1, _, lsu) = self.los_weights();
        let v1 = ph.v1();
        l1 * quad(&v1, &c.a11) + R::of(2.0) * (lsu * l1).sqrt() * inner(&v1, &c.b11).re
    }

    fn part2(&self, ph: &PhaseShifts<R>) -> R {
        let c = &self.inner.coupling;
        let (_, l2, lsu) = self.los_weights();
        let v2 = ph.v2();
        l2 * quad(&v2, &c.a21) + R::of(2.0) * (lsu * l2).sqrt() * inner(&v2, &c.b21).re
    }

    fn cross(&self, ph: &PhaseShifts<R>) -> R {
        let c = &self.inner.coupling;
        let (l1, l2, _) = self.los_weights();
        R::of(2.0) * (l1 * l2).sqrt() * inner(&ph.v2(), &c.big_b5.dot(&ph.v1())).re
    }

    /// Average power in the scenario's regime and case.
    pub fn gamma(&self, ph: &PhaseShifts<R>) -> Result<R> {
        let m = &self.inner;
        if ph.phi1.len() != m.t1 || ph.phi2.len() != m.t2 {
            return Err(crate::Error::Dimension(
                "phases do not match the arrays".into(),
            ));
        }
        let (ts, t1, t2) = self.dims();
        let f = &m.fading;
        Ok(match (self.label.regime, self.label.case) {
            (Regime::PureNlos, _) => {
                f.su.total() * ts
                    + f.s1.total() * f.l1u.total() * ts * t1
                    + f.s2.total() * f.l2u.total() * ts * t2
            }
            // pure LoS: L̄ = α and L̃ = 0, so only the LoS terms survive
            (Regime::PureLos, _) => {
                f.su.total() * ts + self.part1(ph) + self.part2(ph) + self.cross(ph)
            }
            (Regime::General, Case::Case0) => self.gamma0(),
            (Regime::General, Case::Case1) => self.part1(ph) + self.gamma0(),
            (Regime::General, Case::Case2) => self.part2(ph) + self.gamma0(),
            (Regime::General, Case::Case3) => {
                self.part1(ph) + self.part2(ph) + self.gamma0() + self.cross(ph)
            }
        })
    }

    pub fn leading_term(&self) -> R {
        let f = &self.inner.fading;
        let (ts, t1, t2) = self.dims();
        let (l1, l2, _) = self.los_weights();
        match (self.label.regime, self.label.case) {
            (Regime::PureNlos, _) => {
                f.s1.total() * f.l1u.total() * ts * t1 + f.s2.total() * f.l2u.total() * ts * t2
            }
            (Regime::PureLos, _) | (Regime::General, Case::Case3) => {
                let x = l1.sqrt() * t1 + l2.sqrt() * t2;
                ts * x * x
            }
            (Regime::General, Case::Case1) => l1 * ts * t1 * t1,
            (Regime::General, Case::Case2) => l2 * ts * t2 * t2,
            (Regime::General, Case::Case0) => {
                let c1 = f.s1.nlos * f.l1u.los + f.s1.los * f.l1u.nlos + f.s1.nlos * f.l1u.nlos;
                let c2 = f.s2.nlos * f.l2u.los + f.s2.los * f.l2u.nlos + f.s2.nlos * f.l2u.nlos;
                c1 * ts * t1 + c2 * ts * t2
            }
        }
    }
}

fn cophase<R: Real>(delta: &Array1<R>, theta: R) -> Array1<R> {
    delta.mapv(|d| wrap(theta - d))
}

/// Maximizes `2ℜ{p1·e^{jθ₁} + p2·e^{jθ₂} + p3·e^{j(θ₂−θ₁)}}` over both angles.
///
/// For fixed `θ₁` the best `θ₂` is `−∠(p2 + p3·e^{−jθ₁})`, which leaves a smooth
/// one-dimensional problem in `θ₁`: dense scan, then golden-section refinement.
pub(crate) fn best_common_phases<R: Real>(p1: Cx<R>, p2: Cx<R>, p3: Cx<R>) -> (R, R) {
    let theta2 = |t1: R| {
        let z = p2 + p3 * cis(-t1);
        if z.norm() == R::zero() {
            R::zero()
        } else {
            -z.arg()
        }
    };
    if p3.norm() == R::zero() {
        let t1 = if p1.norm() == R::zero() {
            R::zero()
        } else {
            -p1.arg()
        };
        return (t1, theta2(t1));
    }
    let g = |t1: R| (p1 * cis(t1)).re + (p2 + p3 * cis(-t1)).norm();
    const SCAN: usize = 3600;
    let step = R::TAU() / R::of(SCAN as f64);
    let (mut best, mut best_val) = (R::zero(), g(R::zero()));
    for i in 1..SCAN {
        let t = step * R::of(i as f64);
        let v = g(t);
        if v > best_val {
            best = t;
            best_val = v;
        }
    }
    let (mut lo, mut hi) = (best - step, best + step);
    let ratio = R::of(0.5 * (5f64.sqrt() - 1.0));
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1);
        }
    }
    let cand = R::of(0.5) * (lo + hi);
    let t1 = if g(cand) >= best_val { cand } else { best };
    (wrap(t1), wrap(theta2(t1)))
}

/// Optimal phases; `None` when neither IRS influences the average power.
///
/// With both IRSs active the objective is a convex quadratic in the two
/// co-phased sums, so every element of an IRS is aligned to a common phase and
/// only the two common phases are searched.
pub fn optimal_phases_dnc<R: Real>(s: &Scenario<R>) -> Result<Option<PhaseShifts<R>>> {
    let dm = DncModel::new(s)?;
    let m = &dm.inner;
    let g = &m.geometry;
    let (l1, l2, lsu) = dm.los_weights();
    let (t1, t2) = (m.t1, m.t2);
    let case = match dm.label.regime {
        Regime::PureNlos => Case::Case0,
        Regime::PureLos => Case::Case3,
        Regime::General => dm.label.case,
    };
    let ph = match case {
        Case::Case0 => return Ok(None),
        Case::Case1 => PhaseShifts {
            phi1: cophase(&g.delta_s1_1u, -g.r_s1_su.arg()),
            phi2: Array1::zeros(t2),
        },
        Case::Case2 => PhaseShifts {
            phi1: Array1::zeros(t1),
            phi2: cophase(&g.delta_s2_2u, -g.r_s2_su.arg()),
        },
        Case::Case3 => {
            let (n1, n2) = (R::of(t1 as f64), R::of(t2 as f64));
            let p1 = g.r_s1_su * ((lsu * l1).sqrt() * n1);
            let p2 = g.r_s2_su * ((lsu * l2).sqrt() * n2);
            let p3 = g.r_s1_s2.conj() * ((l1 * l2).sqrt() * n1 * n2);
            let (th1, th2) = best_common_phases(p1, p2, p3);
            PhaseShifts {
                phi1: cophase(&g.delta_s1_1u, th1),
                phi2: cophase(&g.delta_s2_2u, th2),
            }
        }
    };
    Ok(Some(ph))
}

/// Both IRSs co-phased with fixed common phases `−∠r_{S1,SU}` and
/// `−(∠r_{S2,SU} − ∠r_{S1,S2})`.
///
/// Optimal only when the three pairwise LoS phase relations are consistent
/// (e.g. a single BS antenna); [`optimal_phases_dnc`] handles the general case.
pub fn aligned_phases_dnc<R: Real>(s: &Scenario<R>) -> Result<PhaseShifts<R>> {
    let m = PowerModel::new(s)?;
    let g = &m.geometry;
    Ok(PhaseShifts {
        phi1: cophase(&g.delta_s1_1u, -g.r_s1_su.arg()),
        phi2: cophase(&g.delta_s2_2u, -(g.r_s2_su.arg() - g.r_s1_s2.arg())),
    })
}
