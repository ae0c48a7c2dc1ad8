use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use super::{CsrMatrix, EnvelopeCholesky, FactorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LanczosError {
    #[error("factorization of the shifted operator failed: {0}")]
    Factorization(#[from] FactorError),
    #[error("mass matrix must be diagonal and positive")]
    BadMass,
    #[error("requested {k} eigenpairs from a space of dimension {dim}")]
    TooMany { k: usize, dim: usize },
    #[error(
        "no convergence after {iterations} block steps (basis {basis}); worst residual {worst:e}"
    )]
    NonConvergence {
        iterations: usize,
        basis: usize,
        worst: f64,
    },
}

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    pub k: usize,
    pub shift: f64,
    pub tol: f64,
    pub seed: u64,
    pub block: usize,
    /// Cap on the Krylov basis size; `None` picks `max(300, 20k)`.
    pub max_basis: Option<usize>,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            k: 10,
            shift: -1e-3,
            tol: 1e-8,
            seed: 42,
            block: 8,
            max_basis: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LanczosResult {
    /// Ascending generalized eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// `‖M^{-1/2} K M^{-1/2} z − λ z‖ / max(|λ|, 1)` for the unit Ritz vector `z`.
    pub residuals: Vec<f64>,
    /// Eigenvectors of `K y = λ M y`, M-normalized, one per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    pub iterations: usize,
    pub basis_size: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthogonalize `v` against `basis` (two classical Gram–Schmidt passes) and
/// return the remaining norm.
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) -> f64 {
    for _ in 0..2 {
        let coeffs: Vec<f64> = basis.iter().map(|q| dot(q, v)).collect();
        for (q, c) in basis.iter().zip(coeffs) {
            axpy(-c, q, v);
        }
    }
    norm(v)
}

/// Smallest `k` eigenpairs of `K y = λ M y` with `M` diagonal positive, by
/// block Lanczos on `M^{1/2} (K − σM)^{-1} M^{1/2}` with full
/// reorthogonalization and Rayleigh–Ritz on the whole basis.
pub fn shift_invert_lanczos(
    stiffness: &CsrMatrix,
    mass: &CsrMatrix,
    opts: &LanczosOptions,
) -> Result<LanczosResult, LanczosError> {
    let dim = stiffness.nrows();
    let k = opts.k;
    if k == 0 || k > dim {
        return Err(LanczosError::TooMany { k, dim });
    }
    let m_diag = mass.diag();
    if mass.nnz() != dim || m_diag.iter().any(|&m| !(m > 0.0)) {
        return Err(LanczosError::BadMass);
    }
    let m_sqrt: Vec<f64> = m_diag.iter().map(|m| m.sqrt()).collect();
    let m_isqrt: Vec<f64> = m_sqrt.iter().map(|m| 1.0 / m).collect();
    let shifted = stiffness.add_scaled(-opts.shift, mass);
    let chol = EnvelopeCholesky::factor(&shifted)?;

    let op = |x: &[f64]| -> Vec<f64> {
        let b: Vec<f64> = x.iter().zip(&m_sqrt).map(|(a, s)| a * s).collect();
        let y = chol.solve(&b);
        y.iter().zip(&m_sqrt).map(|(a, s)| a * s).collect()
    };
    // standard-form operator A = M^{-1/2} K M^{-1/2}
    let apply_a = |z: &[f64]| -> Vec<f64> {
        let y: Vec<f64> = z.iter().zip(&m_isqrt).map(|(a, s)| a * s).collect();
        stiffness
            .matvec(&y)
            .iter()
            .zip(&m_isqrt)
            .map(|(a, s)| a * s)
            .collect()
    };

    let max_basis = opts.max_basis.unwrap_or_else(|| (20 * k).max(300)).min(dim);
    let block = opts.block.max(1).min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let random_vec = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..dim).map(|_| StandardNormal.sample(rng)).collect()
    };

    let mut q: Vec<Vec<f64>> = Vec::new();
    let mut w: Vec<Vec<f64>> = Vec::new();
    let mut h = DMatrix::<f64>::zeros(max_basis, max_basis);

    // next candidate block, not yet orthonormal
    let mut pending: Vec<Vec<f64>> = (0..block).map(|_| random_vec(&mut rng)).collect();
    let mut iterations = 0;
    let mut worst = f64::INFINITY;

    loop {
        // orthonormalize pending against the basis, refilling deflated
        // directions with fresh random vectors
        let start = q.len();
        for mut v in pending.drain(..) {
            if q.len() >= max_basis {
                break;
            }
            let scale = norm(&v).max(f64::MIN_POSITIVE);
            let mut r = orthogonalize(&mut v, &q);
            let mut attempts = 0;
            while r <= 1e-10 * scale && attempts < 5 {
                v = random_vec(&mut rng);
                r = orthogonalize(&mut v, &q);
                attempts += 1;
            }
            if r <= 1e-10 * scale {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= r);
            q.push(v);
        }
        if q.len() == start {
            break;
        }
        for j in start..q.len() {
            let wj = op(&q[j]);
            for i in 0..=j {
                let hij = dot(&q[i], &wj);
                h[(i, j)] = hij;
                h[(j, i)] = hij;
            }
            w.push(wj);
        }
        // entries between new columns and later ones are filled when those
        // columns arrive; symmetry of the operator makes this consistent
        iterations += 1;

        let m = q.len();
        if m >= k {
            let sub = h.view((0, 0), (m, m)).into_owned();
            let eig = SymmetricEigen::new(sub);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
            let mut pairs = Vec::with_capacity(k);
            worst = 0.0f64;
            for &idx in order.iter().take(k) {
                let s = eig.eigenvectors.column(idx);
                let mut z = vec![0.0; dim];
                for (c, qc) in s.iter().zip(&q) {
                    axpy(*c, qc, &mut z);
                }
                let zn = norm(&z);
                z.iter_mut().for_each(|x| *x /= zn);
                let az = apply_a(&z);
                let lambda = dot(&z, &az);
                let mut r = az;
                axpy(-lambda, &z, &mut r);
                let res = norm(&r) / lambda.abs().max(1.0);
                worst = worst.max(res);
                pairs.push((lambda, res, z));
            }
            if worst <= opts.tol || m >= max_basis {
                if worst > opts.tol {
                    return Err(LanczosError::NonConvergence {
                        iterations,
                        basis: m,
                        worst,
                    });
                }
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                let eigenvalues = pairs.iter().map(|p| p.0).collect();
                let residuals = pairs.iter().map(|p| p.1).collect();
                let eigenvectors = pairs
                    .into_iter()
                    .map(|(_, _, z)| z.iter().zip(&m_isqrt).map(|(a, s)| a * s).collect())
                    .collect();
                return Ok(LanczosResult {
                    eigenvalues,
                    residuals,
                    eigenvectors,
                    iterations,
                    basis_size: m,
                });
            }
        }
        pending = w[start..].to_vec();
    }
    Err(LanczosError::NonConvergence {
        iterations,
        basis: q.len(),
        worst,
    })
}
