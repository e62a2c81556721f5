//! Rician-faded double-IRS channel simulator.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix it to `f64`, which is what the CLI uses.

pub mod baseline;
pub mod channel;
pub mod config;
pub mod design;
pub mod geometry;
pub mod linalg;
pub mod montecarlo;
pub mod optimize;
pub mod power;
pub mod report;
pub mod scalar;
pub mod scenario;
pub mod sweep;

mod error;

pub use error::{Error, Result};
pub use scalar::{wrap_phase, CMat, CVec, Cx, Real};

pub type Scenario64 = scenario::Scenario<f64>;
pub type PhaseShifts64 = channel::PhaseShifts<f64>;
pub type PowerModel64 = power::PowerModel<f64>;
pub type C64 = Cx<f64>;
