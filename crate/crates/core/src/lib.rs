//! Curve reconstruction from curvature data and numerical checks of
//! Schur-type chord comparison theorems in the plane, Euclidean 3-space,
//! the unit sphere and Minkowski space.

pub mod cli;
pub mod curves;
pub mod error;
pub mod minkowski;
pub mod numerics;
pub mod report;
pub mod schur;
pub mod sphere;

pub use error::{Error, Result};
