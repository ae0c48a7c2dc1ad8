use serde::Serialize;

use super::{CochainComplex, DecError};
use crate::linalg::{shift_invert_lanczos, LanczosOptions};

/// Eigenvalues below this count as harmonic.
pub const HARMONIC_TOL: f64 = 1e-6;

pub const DEFAULT_SHIFT: f64 = -1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub degree: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Relative residuals `‖Az − λz‖ / max(|λ|, 1)` in the mass-symmetrized form.
    pub residuals: Vec<f64>,
    /// Mass-normalized eigencochains, one per eigenvalue.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    pub shift: f64,
    pub iterations: usize,
    pub basis_size: usize,
    pub seed: u64,
}

/// `k` smallest eigenpairs of `Δ_p` as the pencil `(K, ∗_p)`.
pub fn spectrum(
    dec: &CochainComplex,
    p: usize,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<SpectrumResult, DecError> {
    let (stiff, mass) = dec.laplacian(p)?;
    let opts = LanczosOptions {
        k,
        shift: DEFAULT_SHIFT,
        tol,
        seed,
        ..Default::default()
    };
    let res = shift_invert_lanczos(&stiff, &mass, &opts)?;
    Ok(SpectrumResult {
        degree: p,
        eigenvalues: res.eigenvalues,
        residuals: res.residuals,
        eigenvectors: res.eigenvectors,
        shift: opts.shift,
        iterations: res.iterations,
        basis_size: res.basis_size,
        seed,
    })
}

impl SpectrumResult {
    /// Number of computed eigenvalues below `tol`.
    pub fn betti(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l < tol).count()
    }

    /// Eigenvalues at or above the harmonic threshold.
    pub fn positive(&self, tol: f64) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().copied().filter(move |&l| l >= tol)
    }

    pub fn first_positive(&self, tol: f64) -> Option<f64> {
        self.positive(tol).next()
    }

    /// Eigenvalues in `[target − window, target + window]`. Errors if the
    /// window reaches the harmonic cluster, or if the computed part of the
    /// spectrum ends inside the window so the count could be incomplete.
    pub fn multiplicity_near(&self, target: f64, window: f64) -> Result<usize, DecError> {
        let (lo, hi) = (target - window, target + window);
        if lo <= HARMONIC_TOL {
            return Err(DecError::AmbiguousWindow { target, window });
        }
        match self.eigenvalues.last() {
            Some(&top) if top > hi => {}
            _ => {
                return Err(DecError::ClusterTruncated {
                    target,
                    window,
                    computed: self.eigenvalues.len(),
                })
            }
        }
        Ok(self
            .eigenvalues
            .iter()
            .filter(|&&l| l >= lo && l <= hi)
            .count())
    }
}
