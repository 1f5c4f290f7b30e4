//! Lie point symmetries: generators of the classification table, the
//! determining equations, brackets, flows and equivalence transformations.

pub mod equivalence;
pub mod flow;
pub mod generator;
pub mod table;

pub use equivalence::{frame_system, rotating_frame, swap, FrameDirection, ScalingRotation};
pub use flow::{flow_map, Transported};
pub use generator::{coefficient_gap, generators_agree, lie_bracket, zero_generator, Coef, DeParams, LieGenerator};
pub use table::{builtin_generators, case10_algebra, determining_residual, verify_case, verify_stream, CaseReport};
