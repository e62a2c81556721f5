//! Array geometry, steering vectors and large-scale fading.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::scalar::{cis, wrap, CVec, Real};
use crate::{Error, Result};

/// Uniform rectangular array of `rows × cols` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArraySpec {
    pub rows: usize,
    pub cols: usize,
}

impl ArraySpec {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain(format!(
                "array needs at least one row and column, got {rows}x{cols}"
            )));
        }
        Ok(Self { rows, cols })
    }

    /// The most square factorization `M × N` of `total` with `M ≤ N`.
    pub fn with_total(total: usize) -> Result<Self> {
        if total == 0 {
            return Err(Error::Domain("array needs at least one element".into()));
        }
        let mut rows = (total as f64).sqrt() as usize;
        while rows > 1 && total % rows != 0 {
            rows -= 1;
        }
        Self::new(rows.max(1), total / rows.max(1))
    }

    pub fn total(&self) -> usize {
        self.rows * self.cols
    }
}

/// Azimuth/elevation angles of arrival and departure of one link, in radians.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct LinkAngles<R> {
    pub aoa_h: R,
    pub aoa_v: R,
    pub aod_h: R,
    pub aod_v: R,
}

impl<R: Real> LinkAngles<R> {
    pub fn new(aoa_h: R, aoa_v: R, aod_h: R, aod_v: R) -> Result<Self> {
        let all = [aoa_h, aoa_v, aod_h, aod_v];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("link angles must be finite".into()));
        }
        Ok(Self {
            aoa_h,
            aoa_v,
            aod_h,
            aod_v,
        })
    }

    /// Same azimuth and elevation on both ends, the way angles are usually quoted.
    pub fn symmetric(aoa: R, aod: R) -> Self {
        Self {
            aoa_h: aoa,
            aoa_v: aoa,
            aod_h: aod,
            aod_v: aod,
        }
    }

    pub fn cast<S: Real>(&self) -> LinkAngles<S> {
        LinkAngles {
            aoa_h: S::of(self.aoa_h.as_f64()),
            aoa_v: S::of(self.aoa_v.as_f64()),
            aod_h: S::of(self.aod_h.as_f64()),
            aod_v: S::of(self.aod_v.as_f64()),
        }
    }
}

/// Phase of element `(m, n)` (1-based) relative to element `(1, 1)`.
pub fn phase_offset<R: Real>(x_h: R, x_v: R, m: usize, n: usize, d_over_lambda: R) -> R {
    debug_assert!(m >= 1 && n >= 1);
    let m = R::of((m - 1) as f64);
    let n = R::of((n - 1) as f64);
    R::TAU() * d_over_lambda * x_v.sin() * (m * x_h.cos() + n * x_h.sin())
}

/// `vec(A)` of the URA response, column-major so `m` varies fastest.
pub fn steering_vector<R: Real>(x_h: R, x_v: R, arr: ArraySpec, d_over_lambda: R) -> CVec<R> {
    let mut out = Array1::zeros(arr.total());
    for n in 1..=arr.cols {
        for m in 1..=arr.rows {
            out[(n - 1) * arr.rows + (m - 1)] = cis(phase_offset(x_h, x_v, m, n, d_over_lambda));
        }
    }
    out
}

/// `α = 1 / (1000·d^ᾱ)`.
pub fn path_loss<R: Real>(distance_m: R, exponent: R) -> Result<R> {
    if !(distance_m > R::zero()) || !distance_m.is_finite() {
        return Err(Error::Domain(format!(
            "distance must be positive, got {distance_m}"
        )));
    }
    if !exponent.is_finite() {
        return Err(Error::Domain("path-loss exponent must be finite".into()));
    }
    Ok(R::one() / (R::of(1000.0) * distance_m.powf(exponent)))
}

pub type Position = [f64; 3];

pub fn distance(a: Position, b: Position) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// A vertical URA whose broadside points along the horizontal unit vector `normal`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orientation {
    normal: [f64; 2],
}

impl Orientation {
    /// Vertical panel at `at` facing the horizontal projection of `toward`.
    /// Falls back to facing `+x` when the two points share a vertical line.
    pub fn facing(at: Position, toward: Position) -> Self {
        let (dx, dy) = (toward[0] - at[0], toward[1] - at[1]);
        let len = dx.hypot(dy);
        if len < 1e-12 {
            Self { normal: [1.0, 0.0] }
        } else {
            Self {
                normal: [dx / len, dy / len],
            }
        }
    }

    /// `(azimuth, elevation)` of direction `d` in the panel frame.
    ///
    /// Elevation is measured from broadside, azimuth within the panel plane from
    /// the horizontal panel axis, which makes `sin(v)cos(h)` and `sin(v)sin(h)`
    /// the direction cosines along the row and column axes.
    pub fn local_angles(&self, d: [f64; 3]) -> (f64, f64) {
        let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if norm < 1e-12 {
            return (0.0, 0.0);
        }
        let [nx, ny] = self.normal;
        let along_normal = d[0] * nx + d[1] * ny;
        let along_row = -d[0] * ny + d[1] * nx;
        let along_col = d[2];
        let v = (along_normal / norm).clamp(-1.0, 1.0).acos();
        let h = wrap(along_col.atan2(along_row));
        (h, v)
    }
}

/// Angles of the link `from → to` given both panel orientations.
pub fn link_angles_between(
    from: Position,
    from_orient: Orientation,
    to: Position,
    to_orient: Orientation,
) -> LinkAngles<f64> {
    let out = [to[0] - from[0], to[1] - from[1], to[2] - from[2]];
    let back = [-out[0], -out[1], -out[2]];
    let (aod_h, aod_v) = from_orient.local_angles(out);
    let (aoa_h, aoa_v) = to_orient.local_angles(back);
    LinkAngles {
        aoa_h,
        aoa_v,
        aod_h,
        aod_v,
    }
}
