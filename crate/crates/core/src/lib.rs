//! Best linear unbiased estimation for signals with a polynomial trend over
//! white noise.
//!
//! The crate fits the trend by ordinary least squares, builds kriging weights
//! from the Lagrange system of the constrained variance minimization, and
//! evaluates the minimized variance as a bilinear form so that it continues
//! analytically to complex evaluation points. For a linear trend the variance
//! vanishes at `m_n +/- i sigma_n`, and evaluating the estimator there yields a
//! complex estimate of the constant mean: the arithmetic mean plus an
//! imaginary part `sigma_n * slope`.
//!
//! The [`mc`] module simulates the generating model and provides an
//! independent minimum-norm oracle for the kriging weights.

pub mod blue;
pub mod error;
pub mod linalg;
pub mod mc;
pub mod model;

pub use blue::{
    kriging_weights, minimized_variance, normalized_variance_quadratic, ols_fit, predict,
    van_hecke_estimate, zero_variance_points, BlueFit, ComplexScalar, KrigingSolution,
    NoiseModel, TrendSystem, VanHeckeEstimate,
};
pub use error::{Error, Result};
pub use mc::{
    empirical_mse, oracle_min_weights, simulate_field, EmpiricalVarianceReport,
    SimulationConfig, WhiteNoiseModel,
};
pub use model::{build_design, moments, DesignMatrix, MomentSummary, SampleSet, TrendBasis};
