//! Average channel power of the cooperative double-IRS system.

mod asymptotic;
mod case;
mod coupling;
mod fading;
mod gamma;
mod los;

pub use asymptotic::{asymptotic_gamma_dirc, case0_cascade_coefficient};
pub use case::{classify_case, Case, CaseLabel};
pub use coupling::{coupling_matrices, CouplingMatrices};
pub use fading::{fading_powers, FadingPowers, Split};
pub use gamma::{gamma, gamma_pure_los, gamma_pure_nlos, rate_bound, PowerModel};
pub use los::{los_geometry, single_los_geometry, LosGeometry, SingleGeometry};
