use ndarray::{Array1, Zip};

use crate::channel::{LosComponents, SingleLos};
use crate::linalg::inner;
use crate::scalar::{CVec, Cx, Real};

/// Phase-sum vectors `Δ` and steering correlations `r` of the LoS geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct LosGeometry<R> {
    pub delta_s1_1u: Array1<R>,
    pub delta_s1_12: Array1<R>,
    pub delta_12_2u: Array1<R>,
    pub delta_s2_2u: Array1<R>,
    pub r_s1_su: Cx<R>,
    pub r_s2_su: Cx<R>,
    pub r_s1_s2: Cx<R>,
    pub r_s2_12: Cx<R>,
    pub r_12_1u: Cx<R>,
}

/// `∠(diag(a_outᴴ)·a_in)`.
pub(crate) fn phase_sum<R: Real>(a_in: &CVec<R>, a_out: &CVec<R>) -> Array1<R> {
    Zip::from(a_in)
        .and(a_out)
        .map_collect(|i, o| (o.conj() * i).arg())
}

pub fn los_geometry<R: Real>(los: &LosComponents<R>) -> LosGeometry<R> {
    LosGeometry {
        delta_s1_1u: phase_sum(&los.aa_s1, &los.h_1u),
        delta_s1_12: phase_sum(&los.aa_s1, &los.ad_12),
        delta_12_2u: phase_sum(&los.aa_12, &los.h_2u),
        delta_s2_2u: phase_sum(&los.aa_s2, &los.h_2u),
        r_s1_su: inner(&los.ad_s1, &los.h_su),
        r_s2_su: inner(&los.ad_s2, &los.h_su),
        r_s1_s2: inner(&los.ad_s1, &los.ad_s2),
        r_s2_12: inner(&los.aa_s2, &los.aa_12),
        r_12_1u: inner(&los.ad_12, &los.h_1u),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingleGeometry<R> {
    pub delta_s0_0u: Array1<R>,
    pub r_s0_su: Cx<R>,
}

pub fn single_los_geometry<R: Real>(los: &SingleLos<R>) -> SingleGeometry<R> {
    SingleGeometry {
        delta_s0_0u: phase_sum(&los.aa_s0, &los.h_0u),
        r_s0_su: inner(&los.ad_s0, &los.h_su),
    }
}
