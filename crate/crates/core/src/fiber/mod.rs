//! One fiber of the Clifford bundle, identified with the exterior algebra
//! of an orthonormal frame.

mod blade;
mod dual;
mod multivector;

pub use blade::{
    clifford_product, interior_product, reorder_is_odd, reversion_is_negative, wedge_product,
    Blade, MAX_DIM, MIN_DIM,
};
pub use dual::Dual;
pub use multivector::{FrameVector, MultiVector};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grade {grade} out of range for dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },
    #[error("dimension {0} outside the supported range 2..=12")]
    DimensionOutOfRange(usize),
    #[error("cannot parse blade {0:?}")]
    BladeSyntax(String),
}
