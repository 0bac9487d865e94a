//! Thermo-electro-mechanical aging of overhead transmission-line conductors.
//!
//! A 1-D finite-element model couples a phase-field damage law with
//! temperature-dependent fatigue, Joule heating and convective cooling. A
//! collocation layer propagates parameter uncertainty to failure
//! probabilities and variance-based sensitivities.
//!
//! The numerics are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod environment;
pub mod error;
pub mod fem;
pub mod mesh;
pub mod physics;
pub mod scalar;
pub mod simulator;
pub mod stochastic;
pub mod units;

pub use error::{Error, Result};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use scalar::Real;

pub type Mesh = mesh::Mesh1D<f64>;
pub type Material = physics::MaterialParams<f64>;
pub type Fields = physics::FieldState<f64>;
pub type Loads = environment::LoadParams<f64>;
pub type Scenario = environment::Scenario<f64>;
pub type Schedule = environment::LoadSchedule<f64>;
pub type SagChain = environment::SagChain<f64>;
pub type RunConfig = simulator::RunConfig<f64>;
pub type MeshSpec = simulator::MeshSpec<f64>;
pub type RunResult = simulator::RunResult<f64>;
pub type Simulation = simulator::Simulation<f64>;
pub type StochasticConfig = stochastic::StochasticConfig<f64>;
pub type EnsembleResult = stochastic::EnsembleResult<f64>;
