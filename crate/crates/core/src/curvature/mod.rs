//! Fiberwise curvature operators on the Clifford bundle and its derived
//! bundles.

mod bundle;
mod derived;
mod operators;
mod tensor;

pub use bundle::BundleCurvature;
pub use derived::{
    derived_weitzenboeck_dual, derived_weitzenboeck_sum, derived_weitzenboeck_tensor,
    positivity_2x2, theta, theta_full_sum, CliffordBundle, DiracBundle, DualBundle, TensorBundle,
    WhitneySum,
};
pub use operators::{
    curvature_action, kx_apply, r0, ricci_apply, trace_weitzenboeck, weitzenboeck_apply,
    weitzenboeck_matrix, WeitzenboeckMatrix,
};
pub use tensor::CurvatureTensor;

use thiserror::Error;

use crate::fiber::FiberError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("frame index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("operator undefined in dimension {0}: requires n >= 3")]
    UnsupportedDimension(usize),
    #[error("curvature data violates {0}")]
    SymmetryViolation(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Fiber(#[from] FiberError),
}
