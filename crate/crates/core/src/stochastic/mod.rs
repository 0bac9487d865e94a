//! Non-intrusive uncertainty quantification by probabilistic collocation.
//!
//! The deterministic simulator is evaluated at the nodes of a tensor
//! Gauss-Legendre grid over independent uniform inputs; moments, Sobol
//! indices and failure probabilities follow by quadrature. A seeded Monte
//! Carlo design shares the same machinery as a baseline.

pub mod design;
pub mod ensemble;
pub mod params;
pub mod quadrature;
pub mod stats;

pub use design::{CollocationGrid, Design, MonteCarlo, MAX_DIMS};
pub use ensemble::{
    run_collocation, run_monte_carlo, EnsembleResult, FieldStats, Method, Realization, StochasticConfig,
};
pub use params::{ParamId, RandomParam, DEFAULT_HALF_WIDTH};
pub use quadrature::gauss_legendre;
pub use stats::{
    expectation, moments_series, probability_of_failure, relative_error, sobol_first_order, sobol_series,
    std_dev, variance,
};
