//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use irsim::geometry::{ArraySpec, LinkAngles};
use irsim::scenario::{
    Link, LinkFading, Links, Placement, Rician, Scenario, SingleIrs, SingleIrsSet,
};
use irsim::{PhaseShifts64, Scenario64, C64};
use ndarray::Array1;
use rand::Rng;

/// Per-link Rician choice for random scenarios.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum K {
    /// Finite positive factor.
    Pos,
    Zero,
    Los,
    Nlos,
}

pub use K::{Los, Nlos, Pos, Zero};

pub fn arr(rows: usize, cols: usize) -> ArraySpec {
    ArraySpec::new(rows, cols).unwrap()
}

pub fn fading(alpha: f64, rician: Rician<f64>) -> LinkFading<f64> {
    LinkFading::new(alpha, rician).unwrap()
}

pub fn uniform(
    ts: (usize, usize),
    t1: (usize, usize),
    t2: (usize, usize),
    alpha: f64,
    r: Rician<f64>,
) -> Scenario64 {
    Scenario::uniform(
        arr(ts.0, ts.1),
        arr(t1.0, t1.1),
        arr(t2.0, t2.1),
        fading(alpha, r),
    )
}

fn rician<G: Rng>(rng: &mut G, k: K) -> Rician<f64> {
    match k {
        Pos => Rician::Finite(rng.random_range(0.3..5.0)),
        Zero => Rician::Finite(0.0),
        Los => Rician::PureLos,
        Nlos => Rician::PureNlos,
    }
}

fn link<G: Rng>(rng: &mut G, k: K) -> Link<f64> {
    let mut a = || rng.random_range(0.0..TAU);
    let angles = LinkAngles::new(a(), a(), a(), a()).unwrap();
    let alpha = rng.random_range(0.4..2.5);
    let r = rician(rng, k);
    Link {
        angles,
        fading: fading(alpha, r),
    }
}

/// Random angles and large-scale powers; `ks` in link order S1, S2, 12, SU, 1U, 2U.
/// Single-IRS links S0 and 0U follow `ks[0]` and `ks[4]`.
pub fn random_scenario<G: Rng>(
    rng: &mut G,
    ts: (usize, usize),
    t1: (usize, usize),
    t2: (usize, usize),
    ks: [K; 6],
) -> Scenario64 {
    let links = Links {
        s1: link(rng, ks[0]),
        s2: link(rng, ks[1]),
        l12: link(rng, ks[2]),
        su: link(rng, ks[3]),
        l1u: link(rng, ks[4]),
        l2u: link(rng, ks[5]),
    };
    let irs0 = ArraySpec::with_total(t1.0 * t1.1 + t2.0 * t2.1).unwrap();
    let mut single = SingleIrsSet::default();
    for p in Placement::ALL {
        single.set(
            p,
            SingleIrs {
                array: irs0,
                s0: link(rng, ks[0]),
                l0u: link(rng, ks[4]),
            },
        );
    }
    Scenario {
        d_over_lambda: rng.random_range(0.2..=0.5),
        bs: arr(ts.0, ts.1),
        irs1: arr(t1.0, t1.1),
        irs2: arr(t2.0, t2.1),
        links,
        single,
        transmit_power: 1.0,
        noise_power: 1.0,
        seed: rng.random(),
    }
}

pub fn random_phases<G: Rng>(rng: &mut G, s: &Scenario64) -> PhaseShifts64 {
    let mut p = |n: usize| Array1::from_shape_fn(n, |_| rng.random_range(0.0..TAU));
    PhaseShifts64::new(p(s.t1()), p(s.t2())).unwrap()
}

pub fn cis(x: f64) -> C64 {
    C64::new(x.cos(), x.sin())
}

/// URA response written out from the element-position picture: element `(m, n)`
/// sits at `((m−1)d, (n−1)d)` and sees the wave-vector projection
/// `(sin v cos h, sin v sin h)`.
pub fn steering_oracle(h: f64, v: f64, a: ArraySpec, dl: f64) -> Vec<C64> {
    let kx = v.sin() * h.cos();
    let ky = v.sin() * h.sin();
    let mut out = vec![C64::new(0.0, 0.0); a.rows * a.cols];
    for n in 0..a.cols {
        for m in 0..a.rows {
            let pos = (m as f64 * dl, n as f64 * dl);
            out[m + a.rows * n] = cis(2.0 * PI * (pos.0 * kx + pos.1 * ky));
        }
    }
    out
}

/// `H̄[i][k] = a_A[i]·conj(a_D[k])`.
fn los_matrix(l: &Link<f64>, rx: ArraySpec, tx: ArraySpec, dl: f64) -> Vec<Vec<C64>> {
    let aa = steering_oracle(l.angles.aoa_h, l.angles.aoa_v, rx, dl);
    let ad = steering_oracle(l.angles.aod_h, l.angles.aod_v, tx, dl);
    aa.iter()
        .map(|a| ad.iter().map(|d| a * d.conj()).collect())
        .collect()
}

fn los_vector(l: &Link<f64>, tx: ArraySpec, dl: f64) -> Vec<C64> {
    steering_oracle(l.angles.aod_h, l.angles.aod_v, tx, dl)
}

/// `(√L̄, √L̃)` of one link.
fn amp(l: &Link<f64>) -> (f64, f64) {
    let a = l.fading.alpha;
    match l.fading.rician {
        Rician::PureLos => (a.sqrt(), 0.0),
        Rician::PureNlos => (0.0, a.sqrt()),
        Rician::Finite(k) => ((k * a / (k + 1.0)).sqrt(), (a / (k + 1.0)).sqrt()),
    }
}

/// Exact `E‖h_e‖²` of the double-IRS system by expanding the equivalent channel
/// into monomials of independent CN(0, 1) entries. Every monomial has unit
/// second moment and distinct monomials are orthogonal, so the expectation is
/// `|mean|²` plus the sum of squared coefficients. `inter = false` drops the
/// IRS 1 → IRS 2 link.
pub fn exact_power_dual(s: &Scenario64, ph: &PhaseShifts64, inter: bool) -> f64 {
    let dl = s.d_over_lambda;
    let l = &s.links;
    let (ts, t1, t2) = (s.t_s(), s.t1(), s.t2());
    let hs1 = los_matrix(&l.s1, s.irs1, s.bs, dl);
    let hs2 = los_matrix(&l.s2, s.irs2, s.bs, dl);
    let h12 = los_matrix(&l.l12, s.irs2, s.irs1, dl);
    let hsu = los_vector(&l.su, s.bs, dl);
    let h1u = los_vector(&l.l1u, s.irs1, dl);
    let h2u = los_vector(&l.l2u, s.irs2, dl);
    let (a_s1, b_s1) = amp(&l.s1);
    let (a_s2, b_s2) = amp(&l.s2);
    let (a_12, b_12) = if inter { amp(&l.l12) } else { (0.0, 0.0) };
    let (a_su, b_su) = amp(&l.su);
    let (a_1u, b_1u) = amp(&l.l1u);
    let (a_2u, b_2u) = amp(&l.l2u);
    // conj(v) = e^{jφ}
    let cv1: Vec<C64> = ph.phi1.iter().map(|&p| cis(p)).collect();
    let cv2: Vec<C64> = ph.phi2.iter().map(|&p| cis(p)).collect();
    // coefficient of the 1U-LoS part of IRS 1 and the 2U-LoS part of IRS 2
    let x1: Vec<C64> = (0..t1).map(|t| h1u[t].conj() * cv1[t] * a_1u).collect();
    let y2: Vec<C64> = (0..t2).map(|u| h2u[u].conj() * cv2[u] * a_2u).collect();

    let mut total = 0.0;
    for k in 0..ts {
        let mut mean = hsu[k].conj() * a_su;
        for t in 0..t1 {
            mean += x1[t] * hs1[t][k] * a_s1;
        }
        for u in 0..t2 {
            mean += y2[u] * hs2[u][k] * a_s2;
            for t in 0..t1 {
                mean += y2[u] * h12[u][t] * a_12 * cv1[t] * hs1[t][k] * a_s1;
            }
        }
        let mut var = b_su * b_su;
        for t in 0..t1 {
            // {S1[t,k]}: through 1U and through 12→2U
            let mut c = x1[t] * b_s1;
            for u in 0..t2 {
                c += y2[u] * h12[u][t] * a_12 * cv1[t] * b_s1;
            }
            var += c.norm_sqr();
            // {1U_t}, {1U_t, S1[t,k]}
            var += (b_1u * a_s1).powi(2) + (b_1u * b_s1).powi(2);
        }
        for u in 0..t2 {
            // {S2[u,k]}
            var += (y2[u] * b_s2).norm_sqr();
            // {2U_u}: through S2 and through S1→12
            let mut c = hs2[u][k] * a_s2;
            for t in 0..t1 {
                c += h12[u][t] * a_12 * cv1[t] * hs1[t][k] * a_s1;
            }
            var += (c * b_2u).norm_sqr();
            // {2U_u, S2[u,k]}
            var += (b_2u * b_s2).powi(2);
            for _ in 0..t1 {
                // {12}, {12, S1}, {2U, 12}, {2U, S1}, {2U, 12, S1}
                var += (a_2u * b_12 * a_s1).powi(2);
                var += (a_2u * b_12 * b_s1).powi(2);
                var += (b_2u * b_12 * a_s1).powi(2);
                var += (b_2u * a_12 * b_s1).powi(2);
                var += (b_2u * b_12 * b_s1).powi(2);
            }
        }
        total += mean.norm_sqr() + var;
    }
    total
}

/// Exact `E‖h_e‖²` of the single-IRS system at placement `p`.
pub fn exact_power_single(s: &Scenario64, p: Placement, phi0: &Array1<f64>) -> f64 {
    let dl = s.d_over_lambda;
    let irs = s.single_irs(p).unwrap();
    let hs0 = los_matrix(&irs.s0, irs.array, s.bs, dl);
    let h0u = los_vector(&irs.l0u, irs.array, dl);
    let hsu = los_vector(&s.links.su, s.bs, dl);
    let (a_s0, b_s0) = amp(&irs.s0);
    let (a_0u, b_0u) = amp(&irs.l0u);
    let (a_su, b_su) = amp(&s.links.su);
    let t = irs.array.total();
    let mut total = 0.0;
    for k in 0..s.t_s() {
        let mut mean = hsu[k].conj() * a_su;
        for i in 0..t {
            mean += h0u[i].conj() * cis(phi0[i]) * a_0u * hs0[i][k] * a_s0;
        }
        let var = b_su * b_su
            + t as f64 * ((a_0u * b_s0).powi(2) + (b_0u * a_s0).powi(2) + (b_0u * b_s0).powi(2));
        total += mean.norm_sqr() + var;
    }
    total
}

/// Relative difference, guarded near zero.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
