use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::{Array1, Array2, ScalarOperand};
use num_complex::Complex;
use num_traits::{FloatConst, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Floating point scalar used throughout the crate (`f32` or `f64`).
pub trait Real:
    num_traits::Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + ScalarOperand
    + 'static
{
    /// One draw from N(0, 1).
    fn standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self;

    /// Converts an `f64` constant.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    fn standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f64 {
    fn standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }
}

pub type Cx<R> = Complex<R>;
pub type CVec<R> = Array1<Complex<R>>;
pub type CMat<R> = Array2<Complex<R>>;

/// Unit phasor `e^{jx}`.
pub(crate) fn cis<R: Real>(x: R) -> Cx<R> {
    Complex::new(x.cos(), x.sin())
}

/// `x mod 2π` in `[0, 2π)` without the finiteness check.
pub(crate) fn wrap<R: Real>(x: R) -> R {
    let tau = R::TAU();
    let y = x - tau * (x / tau).floor();
    // rounding can land exactly on 2π for tiny negative inputs
    if y >= tau || y < R::zero() {
        R::zero()
    } else {
        y
    }
}

/// `Λ(x) = x − 2π⌊x/2π⌋`.
pub fn wrap_phase<R: Real>(x: R) -> crate::Result<R> {
    if !x.is_finite() {
        return Err(crate::Error::Domain(format!(
            "phase must be finite, got {x}"
        )));
    }
    Ok(wrap(x))
}

/// `log2(1 + x)` computed through `ln_1p` for small arguments.
pub(crate) fn log2_1p<R: Real>(x: R) -> R {
    x.ln_1p() / R::LN_2()
}
