//! Simulation, training and evaluation of quantum-circuit Born machines on
//! bars-and-stripes data.
//!
//! The pipeline: [`bas`] builds the target distribution, [`ansatz`] the
//! parameterized circuit and its hardware embedding, [`sim`] evaluates output
//! distributions (optionally under a [`noise`] model), [`train`] fits the
//! parameters by MMD and Adam, and [`metrics`] scores the result.

pub mod ansatz;
pub mod bas;
pub mod error;
pub mod kv;
pub mod metrics;
pub mod noise;
pub mod rng;
pub mod sim;
pub mod train;

pub use error::{Error, Result};
