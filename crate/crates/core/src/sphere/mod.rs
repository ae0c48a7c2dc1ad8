//! Sections of the Clifford bundle of the round sphere `Sⁿ ⊂ ℝ^{n+1}`,
//! represented by ambient polynomial forms and evaluated pointwise in
//! tangent frames.

mod form;
mod frame;
mod gap;
mod poly;
mod section;
mod suite;

use thiserror::Error;

use crate::curvature::CurvatureError;

pub use form::{
    ambient_dirac, ambient_volume, connection_laplacian, constant_field, coordinate_field,
    directional, eval_form, exterior_derivative_fn, form_degree, modified_connection_laplacian,
    modified_nabla_field, nabla_field, partial, poly_inner, position_field, projected_frame,
    sphere_volume, tangential_field, tangential_part, AmbientPolyForm, PolyField,
};
pub use frame::{sample_points, tangent_frame, SpherePoint, TangentFrame};
pub use gap::{calabi_minimum, eigenvalue_gap_table, GapClass, GapRow};
pub use poly::{Monomial, Poly};
pub use section::{
    build_twistor_section, linear_eigenfunction, twistor_family_basis, twistor_family_dimension,
    Construction, SphereSection, CODIFFERENTIAL_SIGN,
};
pub use suite::{non_twistor_probe, verify_identity_suite, SuiteOptions, PROBE_THRESHOLD};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SphereError {
    #[error("point has norm {0}, not on the unit sphere")]
    NotOnSphere(f64),
    #[error("tangent frame is degenerate")]
    DegenerateFrame,
    #[error("direction has normal component {0}")]
    NotTangent(f64),
    #[error("sphere dimension {0} outside 2..=11")]
    DimensionOutOfRange(usize),
    #[error("expected parameters of length {expected}, got {got}")]
    ParameterLength { expected: usize, got: usize },
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}
