//! Simulation, estimation, and inference for a small Phillips-curve economy
//! in which agents form expectations by constant-gain adaptive learning.
//!
//! The crate covers the full pipeline:
//!
//! - [`simulator`]: generate synthetic paths from the learning economy;
//! - [`filter`]: reconstruct belief paths and their gain-derivatives from
//!   observed data;
//! - [`estimation`]: profiled nonlinear least squares for the structural
//!   parameters plus OLS for the driving process;
//! - [`equilibria`]: locate and classify the fixed points of the implied
//!   autocorrelation map, including repeated roots;
//! - [`inference`]: numerical-Hessian standard errors, a sup-F test for the
//!   presence of the forward-looking term, influence functions, and uniform
//!   confidence bands for the equilibrium curve;
//! - [`harness`]: a Monte Carlo experiment runner with table-style summaries.

pub mod domain;
pub mod equilibria;
pub mod error;
pub mod estimation;
pub mod filter;
pub mod harness;
pub mod inference;
pub mod simulator;

pub use domain::{
    validate_lambda, validate_theta, AuxParams, Dataset, Lambda, ParamSpace, StructuralParams,
};
pub use error::{Error, Result};
