//! Exact BGG and Kostant computations for `sl(n+1)`, tractor transport on
//! hyperbolic space in the Klein chart, and cohomology of the genus-two
//! surface group with coefficients in trace-free symmetric powers.

pub mod bgg_complex;
pub mod cli;
pub mod error;
pub mod group_cohomology;
pub mod kostant;
pub mod lie_core;
pub mod linalg;
pub mod symmetric;
pub mod tractor_numerics;
pub mod vz_branching;

pub use error::{Error, Result};
