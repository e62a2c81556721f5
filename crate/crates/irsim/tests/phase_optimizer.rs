mod common;

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use common::*;
use irsim::channel::PhaseShifts;
use irsim::optimize::{
    bcd_block_phi1, build_cd_coefficients, cd_sweep, cd_update, closed_form_case1,
    closed_form_case2, closed_form_case3, coordinate_descent, run_optimizer, CdCoefficients,
    CdMode, InitMode, OptimizerConfig, OptimizerPath,
};
use irsim::scenario::{Regime, Rician};
use irsim::{Error, PhaseShifts64, PowerModel64, Scenario64, C64};
use ndarray::{Array1, Array2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// S1, S2, 12, SU, 1U, 2U
const CASE1_NO_1U: [K; 6] = [Pos, Pos, Pos, Pos, Zero, Zero];
const CASE1_NO_12: [K; 6] = [Pos, Pos, Zero, Pos, Pos, Zero];
const CASE2_NO_S2: [K; 6] = [Zero, Zero, Pos, Pos, Pos, Pos];
const CASE2_NO_12: [K; 6] = [Zero, Pos, Zero, Pos, Pos, Pos];
const CASE3_NO_S2_1U: [K; 6] = [Pos, Zero, Pos, Pos, Zero, Pos];
const CASE3_NO_12_SU: [K; 6] = [Pos, Pos, Zero, Zero, Pos, Pos];
const CLOSED: [[K; 6]; 6] = [
    CASE1_NO_1U,
    CASE1_NO_12,
    CASE2_NO_S2,
    CASE2_NO_12,
    CASE3_NO_S2_1U,
    CASE3_NO_12_SU,
];

fn model(s: &Scenario64) -> PowerModel64 {
    PowerModel64::new(s).unwrap()
}

fn closed(m: &PowerModel64, ks: [K; 6]) -> PhaseShifts64 {
    match ks {
        CASE1_NO_1U | CASE1_NO_12 => closed_form_case1(m).unwrap(),
        CASE2_NO_S2 | CASE2_NO_12 => closed_form_case2(m).unwrap(),
        _ => closed_form_case3(m, 0.0).unwrap(),
    }
}

fn grid(n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| TAU * i as f64 / n as f64)
}

/// Maximum over a two-phase grid, the two free phases chosen by `place`.
fn grid_max(m: &PowerModel64, n: usize, place: impl Fn(f64, f64) -> PhaseShifts64) -> f64 {
    let mut best = f64::MIN;
    for a in grid(n) {
        for b in grid(n) {
            best = best.max(m.evaluate(&place(a, b)).unwrap());
        }
    }
    best
}

fn one(x: f64) -> Array1<f64> {
    Array1::from(vec![x])
}

#[test]
fn closed_forms_match_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for ks in CLOSED {
        for _ in 0..3 {
            let (t1, t2) = match ks {
                CASE1_NO_1U | CASE1_NO_12 => ((2, 1), (1, 1)),
                CASE2_NO_S2 | CASE2_NO_12 => ((1, 1), (2, 1)),
                _ => ((1, 1), (1, 1)),
            };
            let s = random_scenario(&mut rng, (2, 1), t1, t2, ks);
            let m = model(&s);
            let best = grid_max(&m, 400, |a, b| match ks {
                CASE1_NO_1U | CASE1_NO_12 => {
                    PhaseShifts::new(Array1::from(vec![a, b]), one(0.0)).unwrap()
                }
                CASE2_NO_S2 | CASE2_NO_12 => {
                    PhaseShifts::new(one(0.0), Array1::from(vec![a, b])).unwrap()
                }
                _ => PhaseShifts::new(one(a), one(b)).unwrap(),
            });
            let g = m.evaluate(&closed(&m, ks)).unwrap();
            assert!(
                g >= best * (1.0 - 1e-12),
                "{ks:?}: closed {g} < grid {best}"
            );
            assert!(rel(g, best) < 1e-3, "{ks:?}: closed {g}, grid {best}");
        }
    }
}

#[test]
fn closed_forms_dominate_random_phases() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for ks in CLOSED {
        let s = random_scenario(&mut rng, (2, 2), (3, 2), (2, 3), ks);
        let m = model(&s);
        let ph = closed(&m, ks);
        assert!(ph
            .phi1
            .iter()
            .chain(&ph.phi2)
            .all(|p| (0.0..TAU).contains(p)));
        let g = m.evaluate(&ph).unwrap();
        for _ in 0..200 {
            let r = m.evaluate(&random_phases(&mut rng, &s)).unwrap();
            assert!(g >= r * (1.0 - 1e-12), "{ks:?}");
        }
    }
}

#[test]
fn closed_form_zero_angles() {
    let s = uniform((2, 1), (2, 2), (2, 1), 1.0, Rician::Finite(1.0));
    let mut s = s;
    s.links.l1u.fading.rician = Rician::Finite(0.0);
    s.links.l2u.fading.rician = Rician::Finite(0.0);
    let ph = closed_form_case1(&model(&s)).unwrap();
    assert!(ph
        .phi1
        .iter()
        .all(|&p| p.abs() < 1e-12 || (TAU - p).abs() < 1e-12));
}

#[test]
fn case3_family_is_flat_in_psi() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for ks in [CASE3_NO_S2_1U, CASE3_NO_12_SU] {
        let s = random_scenario(&mut rng, (2, 1), (2, 2), (3, 1), ks);
        let m = model(&s);
        let g0 = m.evaluate(&closed_form_case3(&m, 0.0).unwrap()).unwrap();
        for psi in [0.7, 1.3, 2.9] {
            let g = m.evaluate(&closed_form_case3(&m, psi).unwrap()).unwrap();
            assert!(rel(g, g0) < 1e-12);
        }
    }
}

#[test]
fn closed_forms_refuse_other_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let m = model(&random_scenario(&mut rng, (1, 1), (2, 1), (2, 1), [Pos; 6]));
    assert!(matches!(
        closed_form_case1(&m),
        Err(Error::NotApplicable(_))
    ));
    assert!(matches!(
        closed_form_case2(&m),
        Err(Error::NotApplicable(_))
    ));
    assert!(matches!(
        closed_form_case3(&m, 0.0),
        Err(Error::NotApplicable(_))
    ));
}

fn is_hermitian(a: &Array2<C64>) -> bool {
    let scale = a.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
    a.indexed_iter()
        .all(|((i, j), x)| (x - a[(j, i)].conj()).norm() <= 1e-12 * scale)
}

/// γ minus the block objective must not depend on the block's phases.
fn block_offset_is_constant(
    m: &PowerModel64,
    ph: &PhaseShifts64,
    mode: CdMode,
    rng: &mut ChaCha8Rng,
) {
    let c = build_cd_coefficients(m, ph, mode).unwrap();
    assert!(is_hermitian(&c.matrix), "{mode:?}");
    let irs1 = matches!(mode, CdMode::Case1 | CdMode::Case3Irs1);
    let with = |phi: Array1<f64>| {
        let mut p = ph.clone();
        if irs1 {
            p.phi1 = phi;
        } else {
            p.phi2 = phi;
        }
        p
    };
    let n = if irs1 { m.t1 } else { m.t2 };
    let mut offsets = Vec::new();
    for _ in 0..5 {
        let phi = Array1::from_shape_fn(n, |_| rng.random_range(0.0..TAU));
        offsets.push(m.evaluate(&with(phi.clone())).unwrap() - c.objective(&phi));
    }
    let scale = m.evaluate(ph).unwrap().abs();
    for o in &offsets {
        assert!(
            (o - offsets[0]).abs() <= 1e-10 * scale,
            "{mode:?}: {offsets:?}"
        );
    }
}

#[test]
fn block_coefficients_reproduce_gamma() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..4 {
        let s = random_scenario(&mut rng, (2, 2), (3, 2), (2, 2), [Pos; 6]);
        let m = model(&s);
        let ph = random_phases(&mut rng, &s);
        block_offset_is_constant(&m, &ph, CdMode::Case3Irs1, &mut rng);
        block_offset_is_constant(&m, &ph, CdMode::Case3Irs2, &mut rng);

        let s = random_scenario(
            &mut rng,
            (2, 1),
            (2, 2),
            (2, 2),
            [Pos, Pos, Pos, Pos, Pos, Zero],
        );
        let m = model(&s);
        block_offset_is_constant(&m, &random_phases(&mut rng, &s), CdMode::Case1, &mut rng);

        let s = random_scenario(&mut rng, (2, 1), (2, 2), (2, 2), CASE2_NO_12);
        let m = model(&s);
        block_offset_is_constant(&m, &random_phases(&mut rng, &s), CdMode::Case2, &mut rng);

        let s = random_scenario(&mut rng, (2, 1), (2, 2), (3, 1), [Los; 6]);
        let m = model(&s);
        block_offset_is_constant(
            &m,
            &random_phases(&mut rng, &s),
            CdMode::PureLosIrs2,
            &mut rng,
        );
    }
}

#[test]
fn case1_block_reduces_to_case1_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let s = random_scenario(
        &mut rng,
        (2, 1),
        (3, 1),
        (2, 2),
        [Pos, Pos, Pos, Pos, Pos, Zero],
    );
    let m = model(&s);
    let ph = random_phases(&mut rng, &s);
    let a = build_cd_coefficients(&m, &ph, CdMode::Case1).unwrap();
    let b = build_cd_coefficients(&m, &ph, CdMode::Case3Irs1).unwrap();
    for (x, y) in a
        .matrix
        .iter()
        .zip(&b.matrix)
        .chain(a.vector.iter().zip(&b.vector))
    {
        assert!((x - y).norm() < 1e-12 * (1.0 + x.norm()));
    }
}

#[test]
fn pure_los_block_needs_pure_los() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let s = random_scenario(&mut rng, (1, 1), (2, 1), (2, 1), [Pos; 6]);
    let m = model(&s);
    let ph = PhaseShifts::zeros(2, 2);
    assert!(matches!(
        build_cd_coefficients(&m, &ph, CdMode::PureLosIrs2),
        Err(Error::Regime { .. })
    ));
    assert!(matches!(
        bcd_block_phi1(&m, &ph.phi2, &ph.phi1),
        Err(Error::Regime { .. })
    ));
}

fn coeffs(matrix: Array2<C64>, vector: Vec<C64>) -> CdCoefficients<f64> {
    CdCoefficients {
        mode: CdMode::Case1,
        matrix,
        vector: Array1::from(vector),
    }
}

#[test]
fn cd_update_examples() {
    let z = C64::new(0.0, 0.0);
    let c = coeffs(Array2::from_elem((2, 2), z), vec![C64::new(1.0, 0.0), z]);
    assert_eq!(cd_update(&c, &Array1::from(vec![1.0, 2.0]), 0), 0.0);
    let c = coeffs(Array2::from_elem((2, 2), z), vec![C64::new(-1.0, 0.0), z]);
    assert!((cd_update(&c, &Array1::zeros(2), 0) - PI).abs() < 1e-15);
    // nothing drives element 1, so it stays put
    assert_eq!(cd_update(&c, &Array1::from(vec![0.0, 0.4]), 1), 0.4);
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> CdCoefficients<f64> {
    let mut g = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let a = Array2::from_shape_fn((n, n), |_| g());
    let matrix = &a + &a.t().mapv(|x| x.conj());
    let vector: Vec<C64> = (0..n).map(|_| g()).collect();
    coeffs(matrix, vector)
}

#[test]
fn cd_update_matches_one_dimensional_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..20 {
        let c = random_coeffs(&mut rng, 4);
        let phi = Array1::from_shape_fn(4, |_| rng.random_range(0.0..TAU));
        let t = rng.random_range(0..4);
        let at = |x: f64| {
            let mut p = phi.clone();
            p[t] = x;
            c.objective(&p)
        };
        let best = grid(10_000).map(at).fold(f64::MIN, f64::max);
        let u = cd_update(&c, &phi, t);
        assert!((0.0..TAU).contains(&u));
        assert!(at(u) >= best - 1e-12 * best.abs().max(1.0));
    }
}

#[test]
fn cd_sweep_never_decreases() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let c = random_coeffs(&mut rng, 6);
    let mut phi = Array1::from_shape_fn(6, |_| rng.random_range(0.0..TAU));
    let mut last = c.objective(&phi);
    for _ in 0..10 {
        cd_sweep(&c, &mut phi);
        let now = c.objective(&phi);
        assert!(now >= last - 1e-12 * last.abs());
        last = now;
    }
}

#[test]
fn bcd_block_is_block_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..5 {
        let s = random_scenario(&mut rng, (2, 1), (2, 2), (2, 1), [Los; 6]);
        let m = model(&s);
        let start = random_phases(&mut rng, &s);
        let phi1 = bcd_block_phi1(&m, &start.phi2, &start.phi1).unwrap();
        assert!(phi1.iter().all(|p| (0.0..TAU).contains(p)));
        let at = |p1: Array1<f64>| {
            m.evaluate(&PhaseShifts::new(p1, start.phi2.clone()).unwrap())
                .unwrap()
        };
        let g = at(phi1.clone());
        for t in 0..phi1.len() {
            for d in [-0.1, 0.1] {
                let mut p = phi1.clone();
                p[t] = (p[t] + d).rem_euclid(TAU);
                assert!(at(p) <= g * (1.0 + 1e-12));
            }
        }
        for _ in 0..200 {
            let p = Array1::from_shape_fn(phi1.len(), |_| rng.random_range(0.0..TAU));
            assert!(at(p) <= g * (1.0 + 1e-12));
        }
    }
}

#[test]
fn bcd_block_matches_grid_with_two_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let s = random_scenario(&mut rng, (2, 1), (2, 1), (1, 1), [Los; 6]);
    let m = model(&s);
    let phi2 = one(1.1);
    let phi1 = bcd_block_phi1(&m, &phi2, &Array1::zeros(2)).unwrap();
    let g = m
        .evaluate(&PhaseShifts::new(phi1, phi2.clone()).unwrap())
        .unwrap();
    let best = grid_max(&m, 400, |a, b| {
        PhaseShifts::new(Array1::from(vec![a, b]), phi2.clone()).unwrap()
    });
    assert!(g >= best * (1.0 - 1e-12) && rel(g, best) < 1e-3);
}

#[test]
fn dispatch_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let opt = OptimizerConfig::default();
    let path = |ks: [K; 6], rng: &mut ChaCha8Rng| {
        let s = random_scenario(rng, (2, 1), (2, 1), (2, 1), ks);
        run_optimizer(&model(&s), &opt).unwrap().path
    };
    assert_eq!(path([Zero; 6], &mut rng), OptimizerPath::NoOp);
    assert_eq!(path([Nlos; 6], &mut rng), OptimizerPath::NoOp);
    assert_eq!(
        path([Los; 6], &mut rng),
        OptimizerPath::BlockCoordinateDescent
    );
    assert_eq!(path([Pos; 6], &mut rng), OptimizerPath::CoordinateDescent);
    assert_eq!(
        path([Pos, Pos, Pos, Pos, Pos, Zero], &mut rng),
        OptimizerPath::CoordinateDescent
    );
    for ks in CLOSED {
        assert_eq!(path(ks, &mut rng), OptimizerPath::ClosedForm, "{ks:?}");
    }
}

#[test]
fn optimizer_config_is_validated() {
    let s = uniform((1, 1), (1, 1), (1, 1), 1.0, Rician::Finite(1.0));
    let m = model(&s);
    let bad = OptimizerConfig {
        max_iterations: 0,
        ..OptimizerConfig::default()
    };
    assert!(matches!(run_optimizer(&m, &bad), Err(Error::Config { .. })));
    let bad = OptimizerConfig {
        rel_tolerance: 0.0,
        ..OptimizerConfig::default()
    };
    assert!(matches!(run_optimizer(&m, &bad), Err(Error::Config { .. })));
    let bad = OptimizerConfig {
        init: InitMode::Given(PhaseShifts::zeros(2, 1)),
        ..OptimizerConfig::default()
    };
    assert!(matches!(
        coordinate_descent(&m, &bad),
        Err(Error::Dimension(_))
    ));
}

#[test]
fn descent_reaches_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for ks in CLOSED {
        for seed in 0..3 {
            let s = random_scenario(&mut rng, (2, 1), (3, 2), (2, 2), ks);
            let m = model(&s);
            let target = m.evaluate(&closed(&m, ks)).unwrap();
            let opt = OptimizerConfig {
                init: InitMode::Random(seed),
                rel_tolerance: 1e-12,
                ..OptimizerConfig::default()
            };
            let tr = coordinate_descent(&m, &opt).unwrap();
            assert!(
                rel(tr.final_objective(), target) < 1e-6,
                "{ks:?}: {} vs {target}",
                tr.final_objective()
            );
        }
    }
}

fn check_trace(m: &PowerModel64, opt: &OptimizerConfig<f64>) {
    let tr = coordinate_descent(m, opt).unwrap();
    for w in tr.objective.windows(2) {
        assert!(w[1] >= w[0] * (1.0 - 1e-12), "{:?}", tr.objective);
    }
    assert_eq!(tr.objective.len(), tr.iterations + 1);
    assert!(tr
        .phases
        .phi1
        .iter()
        .chain(&tr.phases.phi2)
        .all(|p| (0.0..TAU).contains(p)));
    assert!(
        (m.evaluate(&tr.phases).unwrap() - tr.final_objective()).abs()
            <= 1e-12 * tr.final_objective()
    );
    assert!(
        tr.converged,
        "{} passes, last {:?}",
        tr.iterations,
        &tr.objective[tr.objective.len() - 3..]
    );

    // no single element can still improve much
    let g = tr.final_objective();
    let mut ph = tr.phases.clone();
    if m.label.regime == Regime::PureLos {
        ph.phi1 = bcd_block_phi1(m, &ph.phi2, &ph.phi1).unwrap();
        let c2 = build_cd_coefficients(m, &ph, CdMode::PureLosIrs2).unwrap();
        cd_sweep(&c2, &mut ph.phi2);
    } else {
        let c1 = build_cd_coefficients(m, &ph, CdMode::Case3Irs1).unwrap();
        cd_sweep(&c1, &mut ph.phi1);
        let c2 = build_cd_coefficients(m, &ph, CdMode::Case3Irs2).unwrap();
        cd_sweep(&c2, &mut ph.phi2);
    }
    assert!(m.evaluate(&ph).unwrap() <= g * (1.0 + 1e-6));
}

#[test]
fn descent_traces_are_monotone_and_stationary() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for seed in 0..4 {
        let s = random_scenario(&mut rng, (2, 2), (3, 3), (2, 3), [Pos; 6]);
        let opt = OptimizerConfig {
            init: InitMode::Random(seed),
            rel_tolerance: 1e-10,
            max_iterations: 5000,
            ..OptimizerConfig::default()
        };
        check_trace(&model(&s), &opt);
        let s = random_scenario(&mut rng, (2, 2), (3, 3), (2, 3), [Los; 6]);
        check_trace(&model(&s), &opt);
    }
}

#[test]
fn iteration_cap_is_respected() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let s = random_scenario(&mut rng, (2, 2), (4, 4), (4, 4), [Pos; 6]);
    let opt = OptimizerConfig {
        max_iterations: 1,
        rel_tolerance: 1e-300,
        ..OptimizerConfig::default()
    };
    let tr = coordinate_descent(&model(&s), &opt).unwrap();
    assert_eq!(tr.iterations, 1);
    assert_eq!(tr.objective.len(), 2);
}

#[test]
#[ignore = "timing only"]
fn sweep_cost_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for side in [4, 8, 16] {
        let s = random_scenario(&mut rng, (2, 2), (side, side), (side, side), [Pos; 6]);
        let m = model(&s);
        let opt = OptimizerConfig {
            max_iterations: 5,
            rel_tolerance: 1e-300,
            ..OptimizerConfig::default()
        };
        let start = Instant::now();
        coordinate_descent(&m, &opt).unwrap();
        println!("T = {}: {:?} for 5 passes", side * side, start.elapsed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimum_dominates_start(seed in any::<u64>(), los in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ks = if los { [Los; 6] } else { [Pos; 6] };
        let s = random_scenario(&mut rng, (1, 2), (2, 2), (2, 1), ks);
        let m = model(&s);
        let start = random_phases(&mut rng, &s);
        let g0 = m.evaluate(&start).unwrap();
        let opt = OptimizerConfig { init: InitMode::Given(start), ..OptimizerConfig::default() };
        let tr = run_optimizer(&m, &opt).unwrap();
        prop_assert!(tr.final_objective() >= g0 * (1.0 - 1e-12));
        prop_assert!(tr.phases.phi1.iter().chain(&tr.phases.phi2).all(|p| (0.0..TAU).contains(p)));
    }
}
