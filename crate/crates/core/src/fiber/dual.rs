use super::{FiberError, MultiVector};
use crate::scalar::Scalar;

/// Metric dual `σ*` of a fiber element, stored as `σ` itself.
///
/// The pairing is `σ*(ξ) = ⟨σ, ξ⟩`.
#[derive(Clone, Debug)]
pub struct Dual<S>(pub MultiVector<S>);

impl<S: Scalar> PartialEq for Dual<S> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<S: Scalar> Dual<S> {
    pub fn of(sigma: &MultiVector<S>) -> Self {
        Dual(sigma.clone())
    }

    pub fn element(&self) -> &MultiVector<S> {
        &self.0
    }

    pub fn pair(&self, xi: &MultiVector<S>) -> Result<S, FiberError> {
        self.0.inner(xi)
    }

    /// Clifford action on the dual, `(a·σ*)(ξ) = σ*(γ(a)·ξ)`.
    ///
    /// Transposing left multiplication by `γ(a)` gives left multiplication by
    /// the grade involution of `a`.
    pub fn action(a: &MultiVector<S>, sigma: &Dual<S>) -> Result<Self, FiberError> {
        Ok(Dual(a.grade_involution().geometric_product(&sigma.0)?))
    }
}
