use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::scenario::{Regime, Scenario};

/// Which IRS phase vectors influence the average channel power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    Case0,
    Case1,
    Case2,
    Case3,
}

impl Case {
    pub fn index(&self) -> usize {
        match self {
            Case::Case0 => 0,
            Case::Case1 => 1,
            Case::Case2 => 2,
            Case::Case3 => 3,
        }
    }

    /// Case from "IRS 1 matters" and "IRS 2 matters".
    pub fn from_influence(irs1: bool, irs2: bool) -> Self {
        match (irs1, irs2) {
            (false, false) => Case::Case0,
            (true, false) => Case::Case1,
            (false, true) => Case::Case2,
            (true, true) => Case::Case3,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Case{}", self.index())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseLabel {
    pub case: Case,
    pub regime: Regime,
}

/// An IRS takes effect iff there is a LoS link into it and a LoS link out of it.
pub fn classify_case<R: Real>(s: &Scenario<R>) -> CaseLabel {
    let l = &s.links;
    let (s1, s2, i12) = (
        l.s1.fading.has_los(),
        l.s2.fading.has_los(),
        l.l12.fading.has_los(),
    );
    let (u1, u2) = (l.l1u.fading.has_los(), l.l2u.fading.has_los());
    let irs1 = s1 && (u1 || i12);
    let irs2 = (i12 || s2) && u2;
    CaseLabel {
        case: Case::from_influence(irs1, irs2),
        regime: s.regime(),
    }
}
