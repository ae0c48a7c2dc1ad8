//! Numerical kernels: dense Jacobi, sparse storage, envelope Cholesky and
//! block Lanczos.

pub mod cholesky;
pub mod dense;
pub mod lanczos;
pub mod sparse;

pub use cholesky::{EnvelopeCholesky, FactorError};
pub use dense::{jacobi_eigen, JacobiResult};
pub use lanczos::{shift_invert_lanczos, LanczosError, LanczosOptions, LanczosResult};
pub use sparse::{CsrMatrix, TripletBuilder};
