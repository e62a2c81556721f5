use crate::channel::LosComponents;
use crate::linalg::{conj, diag_left, diag_right, herm};
use crate::scalar::{CMat, CVec, Real};

/// Phase-independent matrices the average power is assembled from.
#[derive(Clone, Debug)]
pub struct CouplingMatrices<R> {
    pub a11: CMat<R>,
    pub a12: CMat<R>,
    pub a21: CMat<R>,
    pub a22: CMat<R>,
    pub a3: CMat<R>,
    pub b11: CVec<R>,
    pub b12: CVec<R>,
    pub b21: CVec<R>,
    pub b22: CVec<R>,
    pub big_b1: CMat<R>,
    pub big_b2: CMat<R>,
    pub big_b3: CMat<R>,
    pub big_b4: CMat<R>,
    pub big_b5: CMat<R>,
}

pub fn coupling_matrices<R: Real>(los: &LosComponents<R>) -> CouplingMatrices<R> {
    let (hs1, hs2, h12) = (&los.h_s1, &los.h_s2, &los.h_12);
    let (hsu, h1u, h2u) = (&los.h_su, &los.h_1u, &los.h_2u);
    let (h1u_c, h2u_c, ad12_c) = (conj(h1u), conj(h2u), conj(&los.ad_12));

    let s1s1 = hs1.dot(&herm(hs1));
    let s2s2 = hs2.dot(&herm(hs2));
    let i12 = h12.dot(&herm(h12));
    let s1s2 = hs1.dot(&herm(hs2));

    let big_b1 = diag_left(&h2u_c, h12);
    CouplingMatrices {
        a11: diag_right(&diag_left(&h1u_c, &s1s1), h1u),
        a12: diag_right(&diag_left(&ad12_c, &s1s1), &los.ad_12),
        a21: diag_right(&diag_left(&h2u_c, &s2s2), h2u),
        a22: diag_right(&diag_left(&h2u_c, &i12), h2u),
        a3: diag_right(&big_b1, &los.aa_s1),
        b11: diag_left(&h1u_c, hs1).dot(hsu),
        b12: diag_left(&ad12_c, &s1s2).dot(&los.aa_12),
        b21: diag_left(&h2u_c, hs2).dot(hsu),
        b22: big_b1.dot(h1u),
        big_b2: diag_right(&s1s1, h1u),
        big_b3: diag_right(&s1s2, h2u),
        big_b4: diag_right(&big_b1, &hs1.dot(hsu)),
        big_b5: diag_right(&diag_left(&h2u_c, &hs2.dot(&herm(hs1))), h1u),
        big_b1,
    }
}
