//! Monte-Carlo estimates of average channel power and average rate.
//!
//! Samples are split into fixed-size batches. Batch `b` draws from a ChaCha8
//! stream seeded with `seed` and stream id `b`, and batch statistics are merged
//! in batch order, so results do not depend on the number of threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    cascade, fill_rician, los_components, norm_sqr, random_phases, reflection, single_cascade,
    single_los_components, ChannelRealization, LosComponents, SingleLos, SingleRealization,
};
use crate::design::{analytic_gamma, Phases, SystemDesign};
use crate::scalar::{log2_1p, CVec, Real};
use crate::scenario::{Placement, Scenario, SystemKind};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub num_samples: usize,
    pub seed: u64,
    pub batch_size: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            num_samples: 100_000,
            seed: 0,
            batch_size: 1000,
        }
    }
}

impl McConfig {
    pub fn new(num_samples: usize, seed: u64) -> Self {
        Self {
            num_samples,
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n`.
    pub std_error: f64,
    pub num_samples: usize,
}

/// Running count, mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64) / n as f64,
        }
    }

    fn estimate(&self) -> McEstimate {
        let se = if self.n > 1 {
            (self.m2.max(0.0) / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error: se,
            num_samples: self.n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Statistic<R> {
    /// `‖h_e‖²`.
    Power,
    /// `log₂(1 + snr·‖h_e‖²)`.
    Rate(R),
}

enum Sampler<'a, R> {
    Dual {
        s: &'a Scenario<R>,
        los: LosComponents<R>,
        v: Option<(CVec<R>, CVec<R>)>,
        inter: bool,
    },
    Single {
        s: &'a Scenario<R>,
        placement: Placement,
        los: SingleLos<R>,
        v0: Option<CVec<R>>,
    },
    Direct {
        s: &'a Scenario<R>,
        los: CVec<R>,
    },
}

enum Buffers<R> {
    Dual(ChannelRealization<R>),
    Single(SingleRealization<R>),
    Direct(CVec<R>),
}

impl<'a, R: Real> Sampler<'a, R> {
    fn new(s: &'a Scenario<R>, d: &SystemDesign<R>) -> Result<Self> {
        let fixed_dual = |p: &Phases<R>| -> Result<Option<(CVec<R>, CVec<R>)>> {
            match p {
                Phases::Dual(ph) => {
                    if ph.phi1.len() != s.t1() || ph.phi2.len() != s.t2() {
                        return Err(Error::Dimension("phases do not match the arrays".into()));
                    }
                    Ok(Some((ph.v1(), ph.v2())))
                }
                Phases::Uniform => Ok(None),
                _ => Err(Error::Dimension(
                    "double-IRS system needs two phase vectors".into(),
                )),
            }
        };
        Ok(match d.kind {
            SystemKind::DirsC | SystemKind::DirsNc => Sampler::Dual {
                s,
                los: los_components(s),
                v: fixed_dual(&d.phases)?,
                inter: d.kind == SystemKind::DirsC,
            },
            SystemKind::NoIrs => Sampler::Direct {
                s,
                los: los_components(s).h_su,
            },
            k => {
                let placement = k.placement().expect("single-IRS kind");
                let t0 = s.single_irs(placement)?.array.total();
                let v0 = match &d.phases {
                    Phases::Single(phi0) if phi0.len() == t0 => Some(reflection(phi0)),
                    Phases::Uniform => None,
                    _ => return Err(Error::Dimension(format!("{k} needs {t0} phases"))),
                };
                Sampler::Single {
                    s,
                    placement,
                    los: single_los_components(s, placement)?,
                    v0,
                }
            }
        })
    }

    fn buffers(&self) -> Buffers<R> {
        match self {
            Sampler::Dual { s, .. } => {
                Buffers::Dual(ChannelRealization::zeros(s.t_s(), s.t1(), s.t2()))
            }
            Sampler::Single { los, .. } => Buffers::Single(SingleRealization {
                h_s0: los.h_s0.clone(),
                h_0u: los.h_0u.clone(),
                h_su: los.h_su.clone(),
            }),
            Sampler::Direct { los, .. } => Buffers::Direct(los.clone()),
        }
    }

    /// One slot's `‖h_e‖²`.
    fn draw(&self, buf: &mut Buffers<R>, rng: &mut ChaCha8Rng) -> R {
        match (self, buf) {
            (Sampler::Dual { s, los, v, inter }, Buffers::Dual(real)) => {
                let l = &s.links;
                fill_rician(&mut real.h_s1, &los.h_s1, &l.s1, rng);
                fill_rician(&mut real.h_s2, &los.h_s2, &l.s2, rng);
                if *inter {
                    fill_rician(&mut real.h_12, &los.h_12, &l.l12, rng);
                }
                fill_rician(&mut real.h_su, &los.h_su, &l.su, rng);
                fill_rician(&mut real.h_1u, &los.h_1u, &l.l1u, rng);
                fill_rician(&mut real.h_2u, &los.h_2u, &l.l2u, rng);
                match v {
                    Some((v1, v2)) => norm_sqr(&cascade(real, v1, v2, *inter)),
                    None => {
                        let v1 = reflection(&random_phases::<R, _>(s.t1(), rng));
                        let v2 = reflection(&random_phases::<R, _>(s.t2(), rng));
                        norm_sqr(&cascade(real, &v1, &v2, *inter))
                    }
                }
            }
            (
                Sampler::Single {
                    s,
                    placement,
                    los,
                    v0,
                },
                Buffers::Single(real),
            ) => {
                let irs = s.single_irs(*placement).expect("checked at construction");
                fill_rician(&mut real.h_s0, &los.h_s0, &irs.s0, rng);
                fill_rician(&mut real.h_0u, &los.h_0u, &irs.l0u, rng);
                fill_rician(&mut real.h_su, &los.h_su, &s.links.su, rng);
                match v0 {
                    Some(v0) => norm_sqr(&single_cascade(real, v0)),
                    None => {
                        let v0 = reflection(&random_phases::<R, _>(irs.array.total(), rng));
                        norm_sqr(&single_cascade(real, &v0))
                    }
                }
            }
            (Sampler::Direct { s, los }, Buffers::Direct(h)) => {
                fill_rician(h, los, &s.links.su, rng);
                norm_sqr(h)
            }
            _ => unreachable!("buffers are built by the sampler"),
        }
    }
}

/// Sample mean of `stat` over `mc.num_samples` independent slots.
pub fn estimate_mc<R: Real>(
    s: &Scenario<R>,
    d: &SystemDesign<R>,
    mc: &McConfig,
    stat: Statistic<R>,
) -> Result<McEstimate> {
    if mc.num_samples == 0 || mc.batch_size == 0 {
        return Err(Error::config(
            "num_samples",
            "Monte-Carlo needs at least one sample",
        ));
    }
    s.validate()?;
    let sampler = Sampler::new(s, d)?;
    let batches = mc.num_samples.div_ceil(mc.batch_size);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
            rng.set_stream(b as u64);
            let mut buf = sampler.buffers();
            let n = mc.batch_size.min(mc.num_samples - b * mc.batch_size);
            let mut acc = Moments::default();
            for _ in 0..n {
                let p = sampler.draw(&mut buf, &mut rng);
                let x = match stat {
                    Statistic::Power => p,
                    Statistic::Rate(snr) => log2_1p(snr * p),
                };
                acc.push(x.as_f64());
            }
            acc
        })
        .collect();
    Ok(parts
        .into_iter()
        .fold(Moments::default(), Moments::merge)
        .estimate())
}

/// Monte-Carlo estimate of `E[‖h_e‖²]`.
pub fn estimate_gamma_mc<R: Real>(
    s: &Scenario<R>,
    d: &SystemDesign<R>,
    mc: &McConfig,
) -> Result<McEstimate> {
    estimate_mc(s, d, mc, Statistic::Power)
}

/// Monte-Carlo estimate of the average rate `E[log₂(1 + (P_S/σ²)‖h_e‖²)]`.
pub fn estimate_rate_mc<R: Real>(
    s: &Scenario<R>,
    d: &SystemDesign<R>,
    mc: &McConfig,
) -> Result<McEstimate> {
    estimate_mc(s, d, mc, Statistic::Rate(s.snr()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomPhaseReport {
    pub mean: f64,
    pub max: f64,
    pub values: Vec<f64>,
}

/// Analytic average power at `num_draws` uniformly random fixed phase designs.
pub fn random_phase_baseline<R: Real>(
    s: &Scenario<R>,
    kind: SystemKind,
    num_draws: usize,
    seed: u64,
) -> Result<RandomPhaseReport> {
    if num_draws == 0 {
        return Err(Error::config("num_draws", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(num_draws);
    for _ in 0..num_draws {
        let d = SystemDesign::random(s, kind, &mut rng)?;
        values.push(analytic_gamma(s, &d)?.as_f64());
    }
    let mean = values.iter().sum::<f64>() / num_draws as f64;
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(RandomPhaseReport { mean, max, values })
}

/// Outcome of comparing an analytic value with its Monte-Carlo estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub analytic: f64,
    pub estimate: McEstimate,
    /// `None` when the estimate has no spread (deterministic channel).
    pub z: Option<f64>,
    pub pass: bool,
}

impl Verification {
    pub const Z_LIMIT: f64 = 3.0;
    /// Relative tolerance used when the channel is deterministic.
    pub const EXACT_TOL: f64 = 1e-10;

    pub fn compare(analytic: f64, estimate: McEstimate) -> Self {
        let diff = (analytic - estimate.mean).abs();
        if estimate.std_error > 0.0 {
            let z = diff / estimate.std_error;
            Self {
                analytic,
                estimate,
                z: Some(z),
                pass: z <= Self::Z_LIMIT,
            }
        } else {
            Self {
                analytic,
                estimate,
                z: None,
                pass: diff
                    <= Self::EXACT_TOL
                        * analytic
                            .abs()
                            .max(estimate.mean.abs())
                            .max(f64::MIN_POSITIVE),
            }
        }
    }
}

/// Analytic average power against its Monte-Carlo estimate.
pub fn verify_analytic<R: Real>(
    s: &Scenario<R>,
    d: &SystemDesign<R>,
    mc: &McConfig,
) -> Result<Verification> {
    let analytic = analytic_gamma(s, d)?.as_f64();
    Ok(Verification::compare(
        analytic,
        estimate_gamma_mc(s, d, mc)?,
    ))
}
