//! Resolved, validated scenario description.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{ArraySpec, LinkAngles};
use crate::scalar::Real;
use crate::{Error, Result};

/// Rician factor of a link, or one of the two limiting regimes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rician<R> {
    Finite(R),
    PureLos,
    PureNlos,
}

impl<R: Real> Rician<R> {
    /// `true` when the link carries a LoS component (K > 0).
    pub fn has_los(&self) -> bool {
        match *self {
            Rician::Finite(k) => k > R::zero(),
            Rician::PureLos => true,
            Rician::PureNlos => false,
        }
    }

    pub fn cast<S: Real>(&self) -> Rician<S> {
        match *self {
            Rician::Finite(k) => Rician::Finite(S::of(k.as_f64())),
            Rician::PureLos => Rician::PureLos,
            Rician::PureNlos => Rician::PureNlos,
        }
    }
}

/// Large-scale power and Rician factor of a link.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkFading<R> {
    pub alpha: R,
    pub rician: Rician<R>,
}

impl<R: Real> LinkFading<R> {
    pub fn new(alpha: R, rician: Rician<R>) -> Result<Self> {
        if !(alpha > R::zero()) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if let Rician::Finite(k) = rician {
            if !(k >= R::zero()) || !k.is_finite() {
                return Err(Error::Domain(format!(
                    "Rician factor must be finite and nonnegative, got {k}"
                )));
            }
        }
        Ok(Self { alpha, rician })
    }

    /// `L̄ = Kα/(K+1)`.
    pub fn los_power(&self) -> R {
        match self.rician {
            Rician::Finite(k) => k * self.alpha / (k + R::one()),
            Rician::PureLos => self.alpha,
            Rician::PureNlos => R::zero(),
        }
    }

    /// `L̃ = α/(K+1)`.
    pub fn nlos_power(&self) -> R {
        match self.rician {
            Rician::Finite(k) => self.alpha / (k + R::one()),
            Rician::PureLos => R::zero(),
            Rician::PureNlos => self.alpha,
        }
    }

    pub fn has_los(&self) -> bool {
        self.rician.has_los()
    }

    pub fn cast<S: Real>(&self) -> LinkFading<S> {
        LinkFading {
            alpha: S::of(self.alpha.as_f64()),
            rician: self.rician.cast(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Link<R> {
    pub angles: LinkAngles<R>,
    pub fading: LinkFading<R>,
}

impl<R: Real> Link<R> {
    pub fn cast<S: Real>(&self) -> Link<S> {
        Link {
            angles: self.angles.cast(),
            fading: self.fading.cast(),
        }
    }
}

/// The six links of the cooperative double-IRS system.
#[derive(Clone, Debug, PartialEq)]
pub struct Links<R> {
    pub s1: Link<R>,
    pub s2: Link<R>,
    pub l12: Link<R>,
    pub su: Link<R>,
    pub l1u: Link<R>,
    pub l2u: Link<R>,
}

impl<R: Real> Links<R> {
    pub fn iter(&self) -> impl Iterator<Item = &Link<R>> {
        [
            &self.s1, &self.s2, &self.l12, &self.su, &self.l1u, &self.l2u,
        ]
        .into_iter()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut Link<R>> {
        [
            &mut self.s1,
            &mut self.s2,
            &mut self.l12,
            &mut self.su,
            &mut self.l1u,
            &mut self.l2u,
        ]
        .into_iter()
    }
}

/// Where the single IRS of the S-IRS counterpart sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Pos1,
    Pos2,
    Mid,
}

impl Placement {
    pub const ALL: [Placement; 3] = [Placement::Pos1, Placement::Pos2, Placement::Mid];

    pub fn name(&self) -> &'static str {
        match self {
            Placement::Pos1 => "pos1",
            Placement::Pos2 => "pos2",
            Placement::Mid => "mid",
        }
    }
}

/// Single-IRS counterpart: IRS 0 with links S0 and 0U.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleIrs<R> {
    pub array: ArraySpec,
    pub s0: Link<R>,
    pub l0u: Link<R>,
}

impl<R: Real> SingleIrs<R> {
    pub fn cast<S: Real>(&self) -> SingleIrs<S> {
        SingleIrs {
            array: self.array,
            s0: self.s0.cast(),
            l0u: self.l0u.cast(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SingleIrsSet<R> {
    pub pos1: Option<SingleIrs<R>>,
    pub pos2: Option<SingleIrs<R>>,
    pub mid: Option<SingleIrs<R>>,
}

impl<R> SingleIrsSet<R> {
    pub fn get(&self, p: Placement) -> Option<&SingleIrs<R>> {
        match p {
            Placement::Pos1 => self.pos1.as_ref(),
            Placement::Pos2 => self.pos2.as_ref(),
            Placement::Mid => self.mid.as_ref(),
        }
    }

    pub fn get_mut(&mut self, p: Placement) -> Option<&mut SingleIrs<R>> {
        match p {
            Placement::Pos1 => self.pos1.as_mut(),
            Placement::Pos2 => self.pos2.as_mut(),
            Placement::Mid => self.mid.as_mut(),
        }
    }

    pub fn set(&mut self, p: Placement, irs: SingleIrs<R>) {
        match p {
            Placement::Pos1 => self.pos1 = Some(irs),
            Placement::Pos2 => self.pos2 = Some(irs),
            Placement::Mid => self.mid = Some(irs),
        }
    }
}

/// Fading regime of a whole system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    General,
    PureLos,
    PureNlos,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::General => "general",
            Regime::PureLos => "pure_los",
            Regime::PureNlos => "pure_nlos",
        }
    }

    /// Regime of a set of links: pure only when every link carries the same flag.
    pub fn of<'a, R: Real + 'a>(links: impl IntoIterator<Item = &'a Link<R>>) -> Regime {
        let mut all_los = true;
        let mut all_nlos = true;
        for l in links {
            all_los &= l.fading.rician == Rician::PureLos;
            all_nlos &= l.fading.rician == Rician::PureNlos;
        }
        match (all_los, all_nlos) {
            (true, _) => Regime::PureLos,
            (_, true) => Regime::PureNlos,
            _ => Regime::General,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fully resolved system description.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<R> {
    pub d_over_lambda: R,
    pub bs: ArraySpec,
    pub irs1: ArraySpec,
    pub irs2: ArraySpec,
    pub links: Links<R>,
    pub single: SingleIrsSet<R>,
    /// Watts.
    pub transmit_power: R,
    /// Watts.
    pub noise_power: R,
    pub seed: u64,
}

impl<R: Real> Scenario<R> {
    /// Zero angles, unit spacing ratio 1/2 and the same fading on every link.
    pub fn uniform(bs: ArraySpec, irs1: ArraySpec, irs2: ArraySpec, fading: LinkFading<R>) -> Self {
        let link = Link {
            angles: LinkAngles::default(),
            fading,
        };
        let single = SingleIrs {
            array: ArraySpec::with_total(irs1.total() + irs2.total()).expect("nonempty arrays"),
            s0: link,
            l0u: link,
        };
        Self {
            d_over_lambda: R::of(0.5),
            bs,
            irs1,
            irs2,
            links: Links {
                s1: link,
                s2: link,
                l12: link,
                su: link,
                l1u: link,
                l2u: link,
            },
            single: SingleIrsSet {
                pos1: Some(single.clone()),
                pos2: Some(single.clone()),
                mid: Some(single),
            },
            transmit_power: R::one(),
            noise_power: R::one(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dl = self.d_over_lambda;
        if !(dl > R::zero() && dl <= R::of(0.5)) {
            return Err(Error::config(
                "d_over_lambda",
                format!("must lie in (0, 0.5], got {dl}"),
            ));
        }
        for (name, p) in [
            ("transmit_power", self.transmit_power),
            ("noise_power", self.noise_power),
        ] {
            if !(p > R::zero()) || !p.is_finite() {
                return Err(Error::config(name, format!("must be positive, got {p}")));
            }
        }
        for l in self.links.iter() {
            LinkFading::new(l.fading.alpha, l.fading.rician)?;
            LinkAngles::new(
                l.angles.aoa_h,
                l.angles.aoa_v,
                l.angles.aod_h,
                l.angles.aod_v,
            )?;
        }
        Ok(())
    }

    pub fn t_s(&self) -> usize {
        self.bs.total()
    }

    pub fn t1(&self) -> usize {
        self.irs1.total()
    }

    pub fn t2(&self) -> usize {
        self.irs2.total()
    }

    /// `P_S / σ²`.
    pub fn snr(&self) -> R {
        self.transmit_power / self.noise_power
    }

    /// Regime of the cooperative system.
    pub fn regime(&self) -> Regime {
        Regime::of(self.links.iter())
    }

    pub fn single_irs(&self, p: Placement) -> Result<&SingleIrs<R>> {
        self.single.get(p).ok_or(Error::MissingSingleIrs(p.name()))
    }

    /// Regime of the single-IRS counterpart at `p`.
    pub fn single_regime(&self, p: Placement) -> Result<Regime> {
        let s = self.single_irs(p)?;
        Ok(Regime::of([&s.s0, &s.l0u, &self.links.su]))
    }

    /// The same scenario with every Rician factor replaced by `rician`.
    pub fn with_rician(&self, rician: Rician<R>) -> Self {
        let mut out = self.clone();
        out.map_links(|l| l.fading.rician = rician);
        out
    }

    /// Applies `f` to every link, including single-IRS ones.
    pub fn map_links(&mut self, mut f: impl FnMut(&mut Link<R>)) {
        for l in self.links.iter_mut() {
            f(l);
        }
        for p in Placement::ALL {
            if let Some(s) = self.single.get_mut(p) {
                f(&mut s.s0);
                f(&mut s.l0u);
            }
        }
    }

    pub fn cast<S: Real>(&self) -> Scenario<S> {
        let c = |l: &Link<R>| l.cast::<S>();
        Scenario {
            d_over_lambda: S::of(self.d_over_lambda.as_f64()),
            bs: self.bs,
            irs1: self.irs1,
            irs2: self.irs2,
            links: Links {
                s1: c(&self.links.s1),
                s2: c(&self.links.s2),
                l12: c(&self.links.l12),
                su: c(&self.links.su),
                l1u: c(&self.links.l1u),
                l2u: c(&self.links.l2u),
            },
            single: SingleIrsSet {
                pos1: self.single.pos1.as_ref().map(SingleIrs::cast),
                pos2: self.single.pos2.as_ref().map(SingleIrs::cast),
                mid: self.single.mid.as_ref().map(SingleIrs::cast),
            },
            transmit_power: S::of(self.transmit_power.as_f64()),
            noise_power: S::of(self.noise_power.as_f64()),
            seed: self.seed,
        }
    }
}

/// Which system a design or estimate refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    DirsC,
    DirsNc,
    SirsPos1,
    SirsPos2,
    SirsPosMid,
    NoIrs,
}

impl SystemKind {
    pub const ALL: [SystemKind; 6] = [
        SystemKind::DirsC,
        SystemKind::DirsNc,
        SystemKind::SirsPos1,
        SystemKind::SirsPos2,
        SystemKind::SirsPosMid,
        SystemKind::NoIrs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::DirsC => "dirs_c",
            SystemKind::DirsNc => "dirs_nc",
            SystemKind::SirsPos1 => "sirs_pos1",
            SystemKind::SirsPos2 => "sirs_pos2",
            SystemKind::SirsPosMid => "sirs_pos_mid",
            SystemKind::NoIrs => "no_irs",
        }
    }

    pub fn placement(&self) -> Option<Placement> {
        match self {
            SystemKind::SirsPos1 => Some(Placement::Pos1),
            SystemKind::SirsPos2 => Some(Placement::Pos2),
            SystemKind::SirsPosMid => Some(Placement::Mid),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
