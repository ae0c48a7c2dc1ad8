//! Discrete exterior calculus on closed triangulated surfaces.

mod complex;
mod inequality;
mod mesh;
mod off;
mod spectrum;

use thiserror::Error;

use crate::linalg::LanczosError;

pub use complex::{build_dec, build_dec_with, CochainComplex, DualKind};
pub use inequality::{inequality_checks, FRIEDRICH_GRID};
pub use mesh::{
    flat_torus, flat_torus_with, icosphere, torus_displacement, SimplicialSurface, TorusLayout,
    ICOSPHERE_MAX_LEVEL,
};
pub use off::{load_off, parse_off, write_off};
pub use spectrum::{spectrum, SpectrumResult, DEFAULT_SHIFT, HARMONIC_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("OFF parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("face {0} is not a triangle")]
    NonTriangleFace(usize),
    #[error("edge ({a}, {b}) borders {faces} faces, expected 2")]
    NonManifoldEdge { a: usize, b: usize, faces: usize },
    #[error("surface is not orientable")]
    NonOrientable,
    #[error("face {0} is degenerate")]
    DegenerateFace(usize),
    #[error("vertex {0} belongs to no face")]
    IsolatedVertex(usize),
    #[error("icosphere level {0} outside 0..=7")]
    LevelOutOfRange(usize),
    #[error("torus size {0} unsupported for this layout")]
    TorusSize(usize),
    #[error("form degree {0} outside 0..=2")]
    BadDegree(usize),
    #[error("window {target}±{window} reaches the harmonic cluster")]
    AmbiguousWindow { target: f64, window: f64 },
    #[error("window {target}±{window} extends past the {computed} computed eigenvalues")]
    ClusterTruncated {
        target: f64,
        window: f64,
        computed: usize,
    },
    #[error(transparent)]
    Solver(#[from] LanczosError),
}

impl DecError {
    /// Errors caused by the mesh input rather than the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            DecError::Io { .. }
                | DecError::Parse { .. }
                | DecError::NonTriangleFace(_)
                | DecError::NonManifoldEdge { .. }
                | DecError::NonOrientable
                | DecError::DegenerateFace(_)
                | DecError::IsolatedVertex(_)
        )
    }
}
