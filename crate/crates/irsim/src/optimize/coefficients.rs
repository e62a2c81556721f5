use ndarray::{Array1, Zip};
use num_complex::Complex;

use crate::channel::PhaseShifts;
use crate::linalg::{conj, diag_left, diag_right, inner, outer_h, two_re};
use crate::power::PowerModel;
use crate::scalar::{cis, wrap, CMat, CVec, Real};
use crate::scenario::Regime;
use crate::{Error, Result};

/// Which block objective the coefficients describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdMode {
    /// IRS 1 alone matters.
    Case1,
    /// IRS 2 alone matters.
    Case2,
    /// IRS 1 with IRS 2 held fixed.
    Case3Irs1,
    /// IRS 2 with IRS 1 held fixed.
    Case3Irs2,
    /// IRS 2 with IRS 1 held fixed, pure LoS.
    PureLosIrs2,
}

/// `vᴴMv + 2ℜ{vᴴd}` up to a constant, as a function of one IRS's `v`.
#[derive(Clone, Debug)]
pub struct CdCoefficients<R> {
    pub mode: CdMode,
    pub matrix: CMat<R>,
    pub vector: CVec<R>,
}

impl<R: Real> CdCoefficients<R> {
    /// `vᴴMv + 2ℜ{vᴴd}` at phases `phi`.
    pub fn objective(&self, phi: &Array1<R>) -> R {
        let v = phi.mapv(|p| cis(-p));
        inner(&v, &self.matrix.dot(&v)).re + R::of(2.0) * inner(&v, &self.vector).re
    }
}

pub fn build_cd_coefficients<R: Real>(
    m: &PowerModel<R>,
    ph: &PhaseShifts<R>,
    mode: CdMode,
) -> Result<CdCoefficients<R>> {
    let c = &m.coupling;
    let (matrix, vector) = match mode {
        CdMode::Case1 => {
            let (w11, w12) = m.a1_weights();
            (&c.a11 * w11 + &(&c.a12 * w12), m.b1())
        }
        CdMode::Case2 => {
            let (w21, w22) = m.a2_weights();
            (&c.a21 * w21 + &(&c.a22 * w22), m.b2())
        }
        CdMode::Case3Irs1 => irs1_block(m, &ph.v2()),
        CdMode::Case3Irs2 => irs2_block(m, &ph.v1()),
        CdMode::PureLosIrs2 => {
            if m.label.regime != Regime::PureLos {
                return Err(Error::Regime {
                    expected: "pure_los",
                    found: m.label.regime.name(),
                });
            }
            irs2_block(m, &ph.v1())
        }
    };
    Ok(CdCoefficients {
        mode,
        matrix,
        vector,
    })
}

fn irs1_block<R: Real>(m: &PowerModel<R>, v2: &CVec<R>) -> (CMat<R>, CVec<R>) {
    let f = &m.fading;
    let c = &m.coupling;
    let ts = R::of(m.t_s as f64);
    let l3 = f.inter_los();
    let l1 = f.s1.los * f.l1u.los;
    let l2 = f.s2.los * f.l2u.los;
    let v2c = conj(v2);

    let (w11, w12) = m.a1_weights();
    let g = c.a3.t().dot(&v2c);
    let d = c.big_b1.t().dot(&v2c);
    let db2 = diag_left(&d, &c.big_b2);
    let matrix = &c.a11 * w11
        + &(&c.a12 * w12)
        + &(outer_h(&g, &g) * (l3 * ts))
        + &(two_re(&db2) * (l1 * l3).sqrt());

    let b3v2 = c.big_b3.dot(v2);
    let db3v2: CVec<R> = Zip::from(&d).and(&b3v2).map_collect(|a, b| a * b);
    let b5h_v2 = c.big_b5.t().mapv(|x| x.conj()).dot(v2);
    let vector = m.b1()
        + &(db3v2 * (l2 * l3).sqrt())
        + &(c.big_b4.t().dot(&v2c) * (f.su.los * l3).sqrt())
        + &(b5h_v2 * (l1 * l2).sqrt());
    (matrix, vector)
}

fn irs2_block<R: Real>(m: &PowerModel<R>, v1: &CVec<R>) -> (CMat<R>, CVec<R>) {
    let f = &m.fading;
    let c = &m.coupling;
    let ts = R::of(m.t_s as f64);
    let l3 = f.inter_los();
    let l1 = f.s1.los * f.l1u.los;
    let l2 = f.s2.los * f.l2u.los;
    let v1c = conj(v1);

    let (w21, w22) = m.a2_weights();
    let h = c.a3.dot(&v1c);
    let b1_dv1 = diag_right(&c.big_b1, &v1c);
    let e = b1_dv1.dot(&c.big_b3);
    let matrix = &c.a21 * w21
        + &(&c.a22 * w22)
        + &(outer_h(&h, &h) * (l3 * ts))
        + &(two_re(&e) * (l2 * l3).sqrt());

    let vector = m.b2()
        + &(b1_dv1.dot(&c.big_b2.dot(v1)) * (l1 * l3).sqrt())
        + &(c.big_b4.dot(&v1c) * (f.su.los * l3).sqrt())
        + &(c.big_b5.dot(v1) * (l1 * l2).sqrt());
    (matrix, vector)
}

/// Exact maximizer over phase `t` with the others fixed.
///
/// Keeps the current phase when the driving term vanishes (relative to the
/// magnitudes involved), since then every phase is optimal.
pub fn cd_update<R: Real>(coeffs: &CdCoefficients<R>, phi: &Array1<R>, t: usize) -> R {
    let row = coeffs.matrix.row(t);
    let mut acc = coeffs.vector[t];
    let mut scale = acc.norm();
    for (k, (&mtk, &p)) in row.iter().zip(phi.iter()).enumerate() {
        if k != t {
            acc += mtk * cis(-p);
            scale += mtk.norm();
        }
    }
    if acc.norm() <= R::of(1e-12) * scale || acc == Complex::new(R::zero(), R::zero()) {
        phi[t]
    } else {
        wrap(-acc.arg())
    }
}

/// One pass of [`cd_update`] over every element, in index order.
pub fn cd_sweep<R: Real>(coeffs: &CdCoefficients<R>, phi: &mut Array1<R>) {
    for t in 0..phi.len() {
        phi[t] = cd_update(coeffs, phi, t);
    }
}

/// Exact maximizer over all of IRS 1 with IRS 2 fixed, pure LoS only.
///
/// In pure LoS `h̄_e` depends on `φ₁` only through the scalar
/// `Σ_t e^{jφ_{1,t}} c_t`, so co-phasing the `c_t` with the rest of the channel is
/// optimal. Elements with `c_t = 0` keep `current`.
pub fn bcd_block_phi1<R: Real>(
    m: &PowerModel<R>,
    phi2: &Array1<R>,
    current: &Array1<R>,
) -> Result<Array1<R>> {
    if m.label.regime != Regime::PureLos {
        return Err(Error::Regime {
            expected: "pure_los",
            found: m.label.regime.name(),
        });
    }
    let f = &m.fading;
    let los = &m.los;
    let (a_s1, a_s2, a_12) = (f.s1.total(), f.s2.total(), f.l12.total());
    let (a_su, a_1u, a_2u) = (f.su.total(), f.l1u.total(), f.l2u.total());
    let v2 = phi2.mapv(|p| cis(-p));

    let u_row = conj(&los.h_1u) * (a_s1 * a_1u).sqrt()
        + &(m.coupling.big_b1.t().dot(&conj(&v2)) * (a_s1 * a_12 * a_2u).sqrt());
    let c: CVec<R> = Zip::from(&u_row).and(&los.aa_s1).map_collect(|u, a| u * a);

    let via2: CVec<R> = Zip::from(&v2).and(&los.h_2u).map_collect(|v, h| v * h);
    let g = &los.h_su * a_su.sqrt()
        + &(los.h_s2.t().mapv(|x| x.conj()).dot(&via2) * (a_s2 * a_2u).sqrt());
    let q = inner(&los.ad_s1, &g);
    let q_scale: R = g.iter().map(|x| x.norm()).sum();
    let q_arg = if q.norm() <= R::of(1e-12) * q_scale {
        R::zero()
    } else {
        q.arg()
    };

    let c_scale: R = c.iter().map(|x| x.norm()).fold(R::zero(), R::max);
    Ok(Zip::from(&c).and(current).map_collect(|ct, &cur| {
        if ct.norm() <= R::of(1e-12) * c_scale || c_scale == R::zero() {
            cur
        } else {
            wrap(-ct.arg() - q_arg)
        }
    }))
}
