//! LoS components, Rician channel draws and the equivalent BS–user channel.

use ndarray::{Array1, Array2, Zip};
use num_complex::Complex;
use rand::Rng;

use crate::geometry::{steering_vector, ArraySpec, LinkAngles};
use crate::scalar::{cis, wrap, CMat, CVec, Cx, Real};
use crate::scenario::{Link, Placement, Rician, Scenario};
use crate::{Error, Result};

/// Deterministic LoS channels and the steering vectors they are built from.
#[derive(Clone, Debug)]
pub struct LosComponents<R> {
    pub h_s1: CMat<R>,
    pub h_s2: CMat<R>,
    pub h_12: CMat<R>,
    pub h_su: CVec<R>,
    pub h_1u: CVec<R>,
    pub h_2u: CVec<R>,
    pub aa_s1: CVec<R>,
    pub aa_s2: CVec<R>,
    pub aa_12: CVec<R>,
    pub ad_s1: CVec<R>,
    pub ad_s2: CVec<R>,
    pub ad_12: CVec<R>,
}

/// `a_A a_Dᴴ`.
pub fn outer<R: Real>(arrival: &CVec<R>, departure: &CVec<R>) -> CMat<R> {
    Array2::from_shape_fn((arrival.len(), departure.len()), |(i, k)| {
        arrival[i] * departure[k].conj()
    })
}

fn departure<R: Real>(a: &LinkAngles<R>, arr: ArraySpec, dl: R) -> CVec<R> {
    steering_vector(a.aod_h, a.aod_v, arr, dl)
}

fn arrival<R: Real>(a: &LinkAngles<R>, arr: ArraySpec, dl: R) -> CVec<R> {
    steering_vector(a.aoa_h, a.aoa_v, arr, dl)
}

pub fn los_components<R: Real>(s: &Scenario<R>) -> LosComponents<R> {
    let dl = s.d_over_lambda;
    let l = &s.links;
    let ad_s1 = departure(&l.s1.angles, s.bs, dl);
    let ad_s2 = departure(&l.s2.angles, s.bs, dl);
    let ad_12 = departure(&l.l12.angles, s.irs1, dl);
    let aa_s1 = arrival(&l.s1.angles, s.irs1, dl);
    let aa_s2 = arrival(&l.s2.angles, s.irs2, dl);
    let aa_12 = arrival(&l.l12.angles, s.irs2, dl);
    LosComponents {
        h_s1: outer(&aa_s1, &ad_s1),
        h_s2: outer(&aa_s2, &ad_s2),
        h_12: outer(&aa_12, &ad_12),
        h_su: departure(&l.su.angles, s.bs, dl),
        h_1u: departure(&l.l1u.angles, s.irs1, dl),
        h_2u: departure(&l.l2u.angles, s.irs2, dl),
        aa_s1,
        aa_s2,
        aa_12,
        ad_s1,
        ad_s2,
        ad_12,
    }
}

/// LoS components of the single-IRS counterpart.
#[derive(Clone, Debug)]
pub struct SingleLos<R> {
    pub h_s0: CMat<R>,
    pub h_0u: CVec<R>,
    pub h_su: CVec<R>,
    pub aa_s0: CVec<R>,
    pub ad_s0: CVec<R>,
}

pub fn single_los_components<R: Real>(s: &Scenario<R>, p: Placement) -> Result<SingleLos<R>> {
    let irs = s.single_irs(p)?;
    let dl = s.d_over_lambda;
    let ad_s0 = departure(&irs.s0.angles, s.bs, dl);
    let aa_s0 = arrival(&irs.s0.angles, irs.array, dl);
    Ok(SingleLos {
        h_s0: outer(&aa_s0, &ad_s0),
        h_0u: departure(&irs.l0u.angles, irs.array, dl),
        h_su: departure(&s.links.su.angles, s.bs, dl),
        aa_s0,
        ad_s0,
    })
}

/// Phase shifts of the two IRSs, every entry in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseShifts<R> {
    pub phi1: Array1<R>,
    pub phi2: Array1<R>,
}

impl<R: Real> PhaseShifts<R> {
    pub fn new(phi1: Array1<R>, phi2: Array1<R>) -> Result<Self> {
        check_phases(&phi1)?;
        check_phases(&phi2)?;
        Ok(Self { phi1, phi2 })
    }

    /// Wraps arbitrary finite phases into `[0, 2π)`.
    pub fn wrapped(phi1: Array1<R>, phi2: Array1<R>) -> Result<Self> {
        let w = |p: Array1<R>| -> Result<Array1<R>> {
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Domain("phases must be finite".into()));
            }
            Ok(p.mapv(wrap))
        };
        Ok(Self {
            phi1: w(phi1)?,
            phi2: w(phi2)?,
        })
    }

    pub fn zeros(t1: usize, t2: usize) -> Self {
        Self {
            phi1: Array1::zeros(t1),
            phi2: Array1::zeros(t2),
        }
    }

    pub fn random<G: Rng + ?Sized>(t1: usize, t2: usize, rng: &mut G) -> Self {
        Self {
            phi1: random_phases(t1, rng),
            phi2: random_phases(t2, rng),
        }
    }

    pub fn v1(&self) -> CVec<R> {
        reflection(&self.phi1)
    }

    pub fn v2(&self) -> CVec<R> {
        reflection(&self.phi2)
    }

    pub fn cast<S: Real>(&self) -> PhaseShifts<S> {
        PhaseShifts {
            phi1: self.phi1.mapv(|x| S::of(x.as_f64())),
            phi2: self.phi2.mapv(|x| S::of(x.as_f64())),
        }
    }
}

pub(crate) fn check_phases<R: Real>(p: &Array1<R>) -> Result<()> {
    match p.iter().find(|&&x| !(x >= R::zero() && x < R::TAU())) {
        Some(x) => Err(Error::Domain(format!("phase {x} outside [0, 2pi)"))),
        None => Ok(()),
    }
}

/// Uniform phases on `[0, 2π)`.
pub fn random_phases<R: Real, G: Rng + ?Sized>(len: usize, rng: &mut G) -> Array1<R> {
    Array1::from_shape_simple_fn(len, || wrap(R::of(rng.random::<f64>()) * R::TAU()))
}

/// `v = (e^{−jφ_t})_t`.
pub fn reflection<R: Real>(phi: &Array1<R>) -> CVec<R> {
    phi.mapv(|p| cis(-p))
}

/// One slot's channels.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization<R> {
    pub h_s1: CMat<R>,
    pub h_s2: CMat<R>,
    pub h_12: CMat<R>,
    pub h_su: CVec<R>,
    pub h_1u: CVec<R>,
    pub h_2u: CVec<R>,
}

impl<R: Real> ChannelRealization<R> {
    pub fn zeros(t_s: usize, t1: usize, t2: usize) -> Self {
        Self {
            h_s1: Array2::zeros((t1, t_s)),
            h_s2: Array2::zeros((t2, t_s)),
            h_12: Array2::zeros((t2, t1)),
            h_su: Array1::zeros(t_s),
            h_1u: Array1::zeros(t1),
            h_2u: Array1::zeros(t2),
        }
    }
}

/// One CN(0, 1) draw.
pub fn cn01<R: Real, G: Rng + ?Sized>(rng: &mut G) -> Cx<R> {
    let s = R::FRAC_1_SQRT_2();
    Complex::new(R::standard_normal(rng) * s, R::standard_normal(rng) * s)
}

/// Matrix of i.i.d. CN(0, 1) entries, filled row by row.
pub fn draw_nlos<R: Real, G: Rng + ?Sized>(shape: (usize, usize), rng: &mut G) -> CMat<R> {
    Array2::from_shape_simple_fn(shape, || cn01(rng))
}

/// Overwrites `out` with `√α(√(K/(K+1))·los + √(1/(K+1))·CN(0,1))`.
///
/// Draws are consumed only for links with an NLoS part, in row-major order.
pub fn fill_rician<R: Real, G: Rng + ?Sized, D: ndarray::Dimension>(
    out: &mut ndarray::Array<Cx<R>, D>,
    los: &ndarray::Array<Cx<R>, D>,
    link: &Link<R>,
    rng: &mut G,
) {
    let f = &link.fading;
    let (a_los, a_nlos) = match f.rician {
        Rician::PureLos => (f.alpha.sqrt(), R::zero()),
        Rician::PureNlos => (R::zero(), f.alpha.sqrt()),
        Rician::Finite(k) => (
            (f.alpha * k / (k + R::one())).sqrt(),
            (f.alpha / (k + R::one())).sqrt(),
        ),
    };
    if a_nlos == R::zero() {
        Zip::from(out).and(los).for_each(|o, &l| *o = l * a_los);
    } else if a_los == R::zero() {
        out.iter_mut().for_each(|o| *o = cn01(rng) * a_nlos);
    } else {
        Zip::from(out)
            .and(los)
            .for_each(|o, &l| *o = l * a_los + cn01(rng) * a_nlos);
    }
}

/// Draws a realization of all six links in the order S1, S2, 12, SU, 1U, 2U.
pub fn assemble_rician<R: Real, G: Rng + ?Sized>(
    s: &Scenario<R>,
    los: &LosComponents<R>,
    rng: &mut G,
) -> ChannelRealization<R> {
    let mut out = ChannelRealization::zeros(s.t_s(), s.t1(), s.t2());
    assemble_rician_into(&mut out, s, los, rng);
    out
}

pub fn assemble_rician_into<R: Real, G: Rng + ?Sized>(
    out: &mut ChannelRealization<R>,
    s: &Scenario<R>,
    los: &LosComponents<R>,
    rng: &mut G,
) {
    let l = &s.links;
    fill_rician(&mut out.h_s1, &los.h_s1, &l.s1, rng);
    fill_rician(&mut out.h_s2, &los.h_s2, &l.s2, rng);
    fill_rician(&mut out.h_12, &los.h_12, &l.l12, rng);
    fill_rician(&mut out.h_su, &los.h_su, &l.su, rng);
    fill_rician(&mut out.h_1u, &los.h_1u, &l.l1u, rng);
    fill_rician(&mut out.h_2u, &los.h_2u, &l.l2u, rng);
}

fn check_dims<R>(real: &ChannelRealization<R>, t1: usize, t2: usize) -> Result<()> {
    let t_s = real.h_su.len();
    let ok = real.h_s1.dim() == (t1, t_s)
        && real.h_s2.dim() == (t2, t_s)
        && real.h_12.dim() == (t2, t1)
        && real.h_1u.len() == t1
        && real.h_2u.len() == t2;
    if ok {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "realization does not match phase lengths ({t1}, {t2})"
        )))
    }
}

/// Entries of `h_eᴴ = h_SUᴴ + Σ_l h_lUᴴ diag(v_lᴴ) H_Sl + h_2Uᴴ diag(v₂ᴴ) H₁₂ diag(v₁ᴴ) H_S1`.
pub fn equivalent_channel<R: Real>(
    real: &ChannelRealization<R>,
    ph: &PhaseShifts<R>,
) -> Result<CVec<R>> {
    check_dims(real, ph.phi1.len(), ph.phi2.len())?;
    Ok(cascade(real, &ph.v1(), &ph.v2(), true))
}

/// Same as [`equivalent_channel`] without the inter-IRS path.
pub fn equivalent_channel_dnc<R: Real>(
    real: &ChannelRealization<R>,
    ph: &PhaseShifts<R>,
) -> Result<CVec<R>> {
    check_dims(real, ph.phi1.len(), ph.phi2.len())?;
    Ok(cascade(real, &ph.v1(), &ph.v2(), false))
}

pub(crate) fn cascade<R: Real>(
    real: &ChannelRealization<R>,
    v1: &CVec<R>,
    v2: &CVec<R>,
    inter: bool,
) -> CVec<R> {
    // row vectors h_lUᴴ diag(v_lᴴ)
    let x1: CVec<R> = Zip::from(&real.h_1u)
        .and(v1)
        .map_collect(|h, v| (h * v).conj());
    let y: CVec<R> = Zip::from(&real.h_2u)
        .and(v2)
        .map_collect(|h, v| (h * v).conj());
    let mut into1 = x1;
    if inter {
        let z = y.dot(&real.h_12);
        Zip::from(&mut into1)
            .and(&z)
            .and(v1)
            .for_each(|a, &z, v| *a += z * v.conj());
    }
    let mut he = real.h_su.mapv(|h| h.conj());
    he += &into1.dot(&real.h_s1);
    he += &y.dot(&real.h_s2);
    he
}

/// Single-IRS slot: `h_S0`, `h_0U` and the direct link.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleRealization<R> {
    pub h_s0: CMat<R>,
    pub h_0u: CVec<R>,
    pub h_su: CVec<R>,
}

/// Draws S0, 0U, SU in that order.
pub fn assemble_single_into<R: Real, G: Rng + ?Sized>(
    out: &mut SingleRealization<R>,
    s: &Scenario<R>,
    p: Placement,
    los: &SingleLos<R>,
    rng: &mut G,
) -> Result<()> {
    let irs = s.single_irs(p)?;
    fill_rician(&mut out.h_s0, &los.h_s0, &irs.s0, rng);
    fill_rician(&mut out.h_0u, &los.h_0u, &irs.l0u, rng);
    fill_rician(&mut out.h_su, &los.h_su, &s.links.su, rng);
    Ok(())
}

/// `h_SUᴴ + h_0Uᴴ diag(v₀ᴴ) H_S0`.
pub fn equivalent_channel_single<R: Real>(
    real: &SingleRealization<R>,
    phi0: &Array1<R>,
) -> Result<CVec<R>> {
    if real.h_s0.nrows() != phi0.len() || real.h_0u.len() != phi0.len() {
        return Err(Error::Dimension(format!(
            "single-IRS realization does not match {} phases",
            phi0.len()
        )));
    }
    Ok(single_cascade(real, &reflection(phi0)))
}

pub(crate) fn single_cascade<R: Real>(real: &SingleRealization<R>, v0: &CVec<R>) -> CVec<R> {
    let x: CVec<R> = Zip::from(&real.h_0u)
        .and(v0)
        .map_collect(|h, v| (h * v).conj());
    let mut he = real.h_su.mapv(|h| h.conj());
    he += &x.dot(&real.h_s0);
    he
}

/// `Σ|x_i|²`.
pub fn norm_sqr<R: Real>(x: &CVec<R>) -> R {
    x.iter().map(|c| c.norm_sqr()).sum()
}
