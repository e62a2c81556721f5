//! JSON scenario files.
//!
//! Every field is optional; missing ones fall back to the reference deployment
//! (BS at (0, −25, 1.2), user at (0, 25, 1), IRSs at (−5, ∓20, 5), 2×2 BS,
//! 10×10 IRSs, K = 10 dB). Units are explicit in key suffixes: `_dBm`, `_dB`,
//! `_W`, `_m`; bare angles are radians.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{
    distance, link_angles_between, path_loss, ArraySpec, LinkAngles, Orientation, Position,
};
use crate::scenario::{
    Link, LinkFading, Links, Placement, Regime, Rician, Scenario, SingleIrs, SingleIrsSet,
};
use crate::sweep::SweepSpec;
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    /// Element count; factorized as squarely as possible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<usize>,
}

impl ArrayFile {
    pub fn total(n: usize) -> Self {
        Self {
            total: Some(n),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraysFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bs: Option<ArrayFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs1: Option<ArrayFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs2: Option<ArrayFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs0: Option<ArrayFile>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bs: Option<Position>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub user: Option<Position>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs1: Option<Position>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs2: Option<Position>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PureFlag {
    PureLos,
    PureNlos,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkFile {
    /// `[azimuth, elevation]` of departure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aod: Option<[f64; 2]>,
    /// `[azimuth, elevation]` of arrival.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aoa: Option<[f64; 2]>,
    #[serde(rename = "K_dB", default, skip_serializing_if = "Option::is_none")]
    pub k_db: Option<f64>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rician: Option<PureFlag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(rename = "alpha_dB", default, skip_serializing_if = "Option::is_none")]
    pub alpha_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_loss_exponent: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinksFile {
    #[serde(rename = "S1", default, skip_serializing_if = "Option::is_none")]
    pub s1: Option<LinkFile>,
    #[serde(rename = "S2", default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<LinkFile>,
    #[serde(rename = "12", default, skip_serializing_if = "Option::is_none")]
    pub l12: Option<LinkFile>,
    #[serde(rename = "SU", default, skip_serializing_if = "Option::is_none")]
    pub su: Option<LinkFile>,
    #[serde(rename = "1U", default, skip_serializing_if = "Option::is_none")]
    pub l1u: Option<LinkFile>,
    #[serde(rename = "2U", default, skip_serializing_if = "Option::is_none")]
    pub l2u: Option<LinkFile>,
    #[serde(rename = "S0", default, skip_serializing_if = "Option::is_none")]
    pub s0: Option<LinkFile>,
    #[serde(rename = "0U", default, skip_serializing_if = "Option::is_none")]
    pub l0u: Option<LinkFile>,
}

/// On-disk scenario description.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_over_lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrays: Option<ArraysFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<PositionsFile>,
    /// IRS 1 sits at `(−x, −y, 5)` and IRS 2 at `(−x, y, 5)` unless positioned explicitly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs_x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irs_y: Option<f64>,
    /// Derive missing link angles from positions instead of the reference angles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles_from_positions: Option<bool>,
    #[serde(rename = "P_S_dBm", default, skip_serializing_if = "Option::is_none")]
    pub p_s_dbm: Option<f64>,
    #[serde(rename = "P_S_W", default, skip_serializing_if = "Option::is_none")]
    pub p_s_w: Option<f64>,
    #[serde(rename = "noise_dBm", default, skip_serializing_if = "Option::is_none")]
    pub noise_dbm: Option<f64>,
    #[serde(rename = "noise_W", default, skip_serializing_if = "Option::is_none")]
    pub noise_w: Option<f64>,
    /// Rician factor of every link without its own.
    #[serde(rename = "K_dB", default, skip_serializing_if = "Option::is_none")]
    pub k_db: Option<f64>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    /// `pure_los` or `pure_nlos` switches every link without its own factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub links: Option<LinksFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

pub const DEFAULT_D_OVER_LAMBDA: f64 = 0.5;
pub const DEFAULT_P_S_DBM: f64 = 5.0;
pub const DEFAULT_NOISE_DBM: f64 = -104.0;
pub const DEFAULT_K_DB: f64 = 10.0;
pub const DEFAULT_IRS_X: f64 = 5.0;
pub const DEFAULT_IRS_Y: f64 = 20.0;
pub const IRS_HEIGHT: f64 = 5.0;
pub const DEFAULT_BS: Position = [0.0, -25.0, 1.2];
pub const DEFAULT_USER: Position = [0.0, 25.0, 1.0];

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LinkId {
    S1,
    S2,
    L12,
    SU,
    L1U,
    L2U,
    S0,
    L0U,
}

impl LinkId {
    fn key(&self) -> &'static str {
        match self {
            LinkId::S1 => "S1",
            LinkId::S2 => "S2",
            LinkId::L12 => "12",
            LinkId::SU => "SU",
            LinkId::L1U => "1U",
            LinkId::L2U => "2U",
            LinkId::S0 => "S0",
            LinkId::L0U => "0U",
        }
    }

    fn default_exponent(&self) -> f64 {
        match self {
            LinkId::L12 => 2.2,
            LinkId::SU => 3.7,
            _ => 2.3,
        }
    }

    /// Reference `(aoa, aod)`; links ending at the user have no arrival angle.
    fn default_angles(&self) -> Option<(f64, f64)> {
        Some(match self {
            LinkId::S1 => (PI / 6.0, PI / 6.0),
            LinkId::S2 => (PI / 5.0, PI / 4.0),
            LinkId::L12 => (PI / 4.0, PI / 5.0),
            LinkId::SU => (0.0, PI / 3.0),
            LinkId::L1U => (0.0, PI / 8.0),
            LinkId::L2U => (0.0, PI / 9.0),
            LinkId::S0 | LinkId::L0U => return None,
        })
    }
}

/// Parses a scenario file, reporting the path of any offending field.
pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::config(
            if path == "." {
                "<root>".to_string()
            } else {
                path
            },
            e.into_inner().to_string(),
        )
    })
}

pub fn read_scenario_file(path: &Path) -> Result<ScenarioFile> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario_file(&text)
}

/// Reads and resolves a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario<f64>> {
    read_scenario_file(path)?.resolve()
}

fn either<T: Copy>(a: Option<T>, b: Option<T>, field: &str) -> Result<Option<T>> {
    match (a, b) {
        (Some(_), Some(_)) => Err(Error::config(field, "given twice with different units")),
        (x, None) | (None, x) => Ok(x),
    }
}

fn positive(x: f64, field: &str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::config(field, format!("must be positive, got {x}")))
    }
}

struct Nodes {
    bs: Position,
    user: Position,
    irs1: Position,
    irs2: Position,
}

impl Nodes {
    fn orientation(&self, at: Position) -> Orientation {
        let mid = [
            0.5 * (self.bs[0] + self.user[0]),
            0.5 * (self.bs[1] + self.user[1]),
            0.0,
        ];
        Orientation::facing(at, mid)
    }

    fn angles(&self, from: Position, to: Position) -> LinkAngles<f64> {
        link_angles_between(from, self.orientation(from), to, self.orientation(to))
    }
}

impl ScenarioFile {
    fn link_file(&self, id: LinkId) -> Option<&LinkFile> {
        let l = self.links.as_ref()?;
        match id {
            LinkId::S1 => l.s1.as_ref(),
            LinkId::S2 => l.s2.as_ref(),
            LinkId::L12 => l.l12.as_ref(),
            LinkId::SU => l.su.as_ref(),
            LinkId::L1U => l.l1u.as_ref(),
            LinkId::L2U => l.l2u.as_ref(),
            LinkId::S0 => l.s0.as_ref(),
            LinkId::L0U => l.l0u.as_ref(),
        }
    }

    fn array(
        &self,
        which: Option<&ArrayFile>,
        field: &str,
        default: ArraySpec,
    ) -> Result<ArraySpec> {
        let Some(a) = which else { return Ok(default) };
        let bad = |r: &str| Error::config(field, r.to_string());
        match (a.rows, a.cols, a.total) {
            (None, None, None) => Ok(default),
            (Some(r), Some(c), None) => ArraySpec::new(r, c).map_err(|e| bad(&e.to_string())),
            (None, None, Some(t)) => ArraySpec::with_total(t).map_err(|e| bad(&e.to_string())),
            _ => Err(bad("give either rows and cols, or total")),
        }
    }

    fn nodes(&self) -> Result<Nodes> {
        let p = self.positions.clone().unwrap_or_default();
        let x = self.irs_x.unwrap_or(DEFAULT_IRS_X);
        let y = self.irs_y.unwrap_or(DEFAULT_IRS_Y);
        for (v, f) in [(x, "irs_x"), (y, "irs_y")] {
            if !v.is_finite() {
                return Err(Error::config(f, "must be finite"));
            }
        }
        Ok(Nodes {
            bs: p.bs.unwrap_or(DEFAULT_BS),
            user: p.user.unwrap_or(DEFAULT_USER),
            irs1: p.irs1.unwrap_or([-x, -y, IRS_HEIGHT]),
            irs2: p.irs2.unwrap_or([-x, y, IRS_HEIGHT]),
        })
    }

    /// Rician factor from the link entry, else the file-wide setting.
    fn rician(&self, id: LinkId, inherit: Option<LinkId>) -> Result<Rician<f64>> {
        let field = |f: &str| format!("links.{}.{f}", id.key());
        let candidates = [Some(id), inherit];
        for l in candidates.into_iter().flatten() {
            if let Some(lf) = self.link_file(l) {
                let k = either(lf.k_db.map(db_to_linear), lf.k, &field("K"))?;
                match (k, lf.rician) {
                    (Some(_), Some(_)) => {
                        return Err(Error::config(field("rician"), "conflicts with K"))
                    }
                    (Some(k), None) => {
                        if !(k >= 0.0 && k.is_finite()) {
                            return Err(Error::config(
                                field("K"),
                                format!("must be nonnegative, got {k}"),
                            ));
                        }
                        return Ok(Rician::Finite(k));
                    }
                    (None, Some(PureFlag::PureLos)) => return Ok(Rician::PureLos),
                    (None, Some(PureFlag::PureNlos)) => return Ok(Rician::PureNlos),
                    (None, None) => {}
                }
            }
        }
        match self.regime {
            Some(Regime::PureLos) => return Ok(Rician::PureLos),
            Some(Regime::PureNlos) => return Ok(Rician::PureNlos),
            _ => {}
        }
        let k =
            either(self.k_db.map(db_to_linear), self.k, "K")?.unwrap_or(db_to_linear(DEFAULT_K_DB));
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::config("K", format!("must be nonnegative, got {k}")));
        }
        Ok(Rician::Finite(k))
    }

    fn alpha(&self, id: LinkId, from: Position, to: Position, exponent: f64) -> Result<f64> {
        let field = |f: &str| format!("links.{}.{f}", id.key());
        let lf = self.link_file(id).cloned().unwrap_or_default();
        if let Some(a) = either(lf.alpha, lf.alpha_db.map(db_to_linear), &field("alpha"))? {
            return positive(a, &field("alpha"));
        }
        let d = match lf.distance_m {
            Some(d) => positive(d, &field("distance_m"))?,
            None => distance(from, to),
        };
        let exp = lf.path_loss_exponent.unwrap_or(exponent);
        path_loss(d, exp).map_err(|e| Error::config(field("distance_m"), e.to_string()))
    }

    fn angles(
        &self,
        id: LinkId,
        fallback: impl FnOnce() -> LinkAngles<f64>,
    ) -> Result<LinkAngles<f64>> {
        let lf = self.link_file(id).cloned().unwrap_or_default();
        let derive = self.angles_from_positions.unwrap_or(false);
        let base = match id.default_angles() {
            Some((aoa, aod)) if !derive => LinkAngles::symmetric(aoa, aod),
            _ => fallback(),
        };
        let [aoa_h, aoa_v] = lf.aoa.unwrap_or([base.aoa_h, base.aoa_v]);
        let [aod_h, aod_v] = lf.aod.unwrap_or([base.aod_h, base.aod_v]);
        LinkAngles::new(aoa_h, aoa_v, aod_h, aod_v)
            .map_err(|e| Error::config(format!("links.{}", id.key()), e.to_string()))
    }

    fn link(&self, id: LinkId, from: Position, to: Position, nodes: &Nodes) -> Result<Link<f64>> {
        let angles = self.angles(id, || nodes.angles(from, to))?;
        let alpha = self.alpha(id, from, to, id.default_exponent())?;
        let fading = LinkFading::new(alpha, self.rician(id, None)?)
            .map_err(|e| Error::config(format!("links.{}", id.key()), e.to_string()))?;
        Ok(Link { angles, fading })
    }

    fn single(
        &self,
        p: Placement,
        nodes: &Nodes,
        array: ArraySpec,
        s: &Links<f64>,
    ) -> Result<SingleIrs<f64>> {
        let (at, s_like, u_like, s_id, u_id) = match p {
            Placement::Pos1 => (nodes.irs1, &s.s1, &s.l1u, LinkId::S1, LinkId::L1U),
            Placement::Pos2 => (nodes.irs2, &s.s2, &s.l2u, LinkId::S2, LinkId::L2U),
            Placement::Mid => (
                [
                    0.5 * (nodes.irs1[0] + nodes.irs2[0]),
                    0.5 * (nodes.irs1[1] + nodes.irs2[1]),
                    0.5 * (nodes.irs1[2] + nodes.irs2[2]),
                ],
                &s.s1,
                &s.l1u,
                LinkId::S1,
                LinkId::L1U,
            ),
        };
        let derive = p == Placement::Mid || self.angles_from_positions.unwrap_or(false);
        let s0_base = if derive {
            nodes.angles(nodes.bs, at)
        } else {
            s_like.angles
        };
        let u0_base = if derive {
            nodes.angles(at, nodes.user)
        } else {
            u_like.angles
        };
        let s0 = Link {
            angles: self.angles(LinkId::S0, || s0_base)?,
            fading: LinkFading::new(
                self.alpha(LinkId::S0, nodes.bs, at, s_id.default_exponent())?,
                self.rician(LinkId::S0, Some(s_id))?,
            )?,
        };
        let l0u = Link {
            angles: self.angles(LinkId::L0U, || u0_base)?,
            fading: LinkFading::new(
                self.alpha(LinkId::L0U, at, nodes.user, u_id.default_exponent())?,
                self.rician(LinkId::L0U, Some(u_id))?,
            )?,
        };
        Ok(SingleIrs { array, s0, l0u })
    }

    /// Fills in defaults and validates.
    pub fn resolve(&self) -> Result<Scenario<f64>> {
        let d_over_lambda = self.d_over_lambda.unwrap_or(DEFAULT_D_OVER_LAMBDA);
        if !(d_over_lambda > 0.0 && d_over_lambda <= 0.5) {
            return Err(Error::config(
                "d_over_lambda",
                format!("element spacing must lie in (0, 0.5] wavelengths, got {d_over_lambda}"),
            ));
        }
        let arrays = self.arrays.clone().unwrap_or_default();
        let square = |n| ArraySpec::new(n, n).expect("nonzero");
        let bs = self.array(arrays.bs.as_ref(), "arrays.bs", square(2))?;
        let irs1 = self.array(arrays.irs1.as_ref(), "arrays.irs1", square(10))?;
        let irs2 = self.array(arrays.irs2.as_ref(), "arrays.irs2", square(10))?;
        let irs0_default = ArraySpec::with_total(irs1.total() + irs2.total())?;
        let irs0 = self.array(arrays.irs0.as_ref(), "arrays.irs0", irs0_default)?;

        let p_s = either(self.p_s_dbm.map(dbm_to_watts), self.p_s_w, "P_S")?
            .unwrap_or(dbm_to_watts(DEFAULT_P_S_DBM));
        let noise = either(self.noise_dbm.map(dbm_to_watts), self.noise_w, "noise")?
            .unwrap_or(dbm_to_watts(DEFAULT_NOISE_DBM));
        let p_s = positive(p_s, "P_S")?;
        let noise = positive(noise, "noise")?;

        let n = self.nodes()?;
        let links = Links {
            s1: self.link(LinkId::S1, n.bs, n.irs1, &n)?,
            s2: self.link(LinkId::S2, n.bs, n.irs2, &n)?,
            l12: self.link(LinkId::L12, n.irs1, n.irs2, &n)?,
            su: self.link(LinkId::SU, n.bs, n.user, &n)?,
            l1u: self.link(LinkId::L1U, n.irs1, n.user, &n)?,
            l2u: self.link(LinkId::L2U, n.irs2, n.user, &n)?,
        };
        let mut single = SingleIrsSet::default();
        for p in Placement::ALL {
            single.set(p, self.single(p, &n, irs0, &links)?);
        }
        let s = Scenario {
            d_over_lambda,
            bs,
            irs1,
            irs2,
            links,
            single,
            transmit_power: p_s,
            noise_power: noise,
            seed: self.seed.unwrap_or(0),
        };
        s.validate()?;
        Ok(s)
    }
}
