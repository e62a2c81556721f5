//! Quasi-static phase-shift optimization.

mod closed_form;
mod coefficients;
mod runner;

pub use closed_form::{closed_form_case1, closed_form_case2, closed_form_case3};
pub use coefficients::{
    bcd_block_phi1, build_cd_coefficients, cd_sweep, cd_update, CdCoefficients, CdMode,
};
pub use runner::{
    coordinate_descent, run_optimizer, InitMode, OptimizerConfig, OptimizerPath, OptimizerTrace,
};
