//! Dirac-bundle operator calculus on the Clifford bundle: exact fiber
//! algebra, curvature operators on constant-curvature models, twistor
//! sections on round spheres and a discrete spectral harness on surfaces.

pub mod curvature;
pub mod dec;
pub mod fiber;
pub mod fiber_suite;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod sphere;
