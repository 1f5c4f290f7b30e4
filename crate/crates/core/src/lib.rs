//! Verification toolkit for a three-component diffusive Lotka-Volterra system
//! with an incompressible convective flow.

pub mod error;
pub mod field;
pub mod figures;
pub mod numerics;
pub mod residual;
pub mod solutions;
pub mod solver;
pub mod special_fn;
pub mod stream;
pub mod symmetry;

pub use error::{Error, Result};
