//! Jets, finite differences, Runge-Kutta integration and seeded sampling.

pub mod fd;
pub mod jet;
pub mod jet1;
pub mod rk4;
pub mod sampling;
pub mod scalar;

pub use fd::{default_steps, fd_derivative6, fd_jet, fd_jets};
pub use jet::Jet2;
pub use jet1::Jet1;
pub use rk4::{rk4_fixed, rk4_integrate, Rk4Outcome};
pub use sampling::{sample_points, Point, SampleSpec};
pub use scalar::{Elem, Scalar};
