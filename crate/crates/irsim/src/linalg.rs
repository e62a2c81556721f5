//! Small dense complex helpers on top of `ndarray`.

use ndarray::{Array2, Axis, Zip};
use num_complex::Complex;

use crate::scalar::{CMat, CVec, Cx, Real};

/// `diag(d)·M`.
pub fn diag_left<R: Real>(d: &CVec<R>, m: &CMat<R>) -> CMat<R> {
    let mut out = m.clone();
    for (mut row, &x) in out.axis_iter_mut(Axis(0)).zip(d.iter()) {
        row.mapv_inplace(|y| x * y);
    }
    out
}

/// `M·diag(d)`.
pub fn diag_right<R: Real>(m: &CMat<R>, d: &CVec<R>) -> CMat<R> {
    let mut out = m.clone();
    for (mut col, &x) in out.axis_iter_mut(Axis(1)).zip(d.iter()) {
        col.mapv_inplace(|y| y * x);
    }
    out
}

/// Conjugate transpose.
pub fn herm<R: Real>(m: &CMat<R>) -> CMat<R> {
    m.t().mapv(|x| x.conj())
}

pub fn conj<R: Real>(v: &CVec<R>) -> CVec<R> {
    v.mapv(|x| x.conj())
}

/// `aᴴb`.
pub fn inner<R: Real>(a: &CVec<R>, b: &CVec<R>) -> Cx<R> {
    Zip::from(a)
        .and(b)
        .fold(Complex::new(R::zero(), R::zero()), |acc, x, y| {
            acc + x.conj() * y
        })
}

/// `ℜ{vᴴAv}`.
pub fn quad<R: Real>(v: &CVec<R>, a: &CMat<R>) -> R {
    inner(v, &a.dot(v)).re
}

/// `x yᴴ`.
pub fn outer_h<R: Real>(x: &CVec<R>, y: &CVec<R>) -> CMat<R> {
    Array2::from_shape_fn((x.len(), y.len()), |(i, k)| x[i] * y[k].conj())
}

/// `M + Mᴴ`.
pub fn two_re<R: Real>(m: &CMat<R>) -> CMat<R> {
    m + &herm(m)
}

/// Largest `|M − Mᴴ|` entry.
pub fn hermitian_defect<R: Real>(m: &CMat<R>) -> R {
    let h = herm(m);
    Zip::from(m)
        .and(&h)
        .fold(R::zero(), |acc, a, b| acc.max((a - b).norm()))
}
