use rand::Rng;

use super::CurvatureError;
use crate::fiber::MultiVector;
use crate::scalar::Scalar;

/// Curvature of an auxiliary euclidean bundle `E` of rank `m`:
/// skew matrices `F_{ij}` with `(F_{ij})_{ba} = ⟨R^E(e_i,e_j) f_a, f_b⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleCurvature<S> {
    dim: usize,
    rank: usize,
    f: Vec<S>,
}

impl<S: Scalar> BundleCurvature<S> {
    fn idx(&self, i: usize, j: usize, b: usize, a: usize) -> usize {
        ((i * self.dim + j) * self.rank + b) * self.rank + a
    }

    pub fn flat(dim: usize, rank: usize) -> Self {
        BundleCurvature {
            dim,
            rank,
            f: vec![S::zero(); dim * dim * rank * rank],
        }
    }

    /// Entries laid out as `[i][j][b][a]`.
    pub fn from_components(dim: usize, rank: usize, f: Vec<S>) -> Result<Self, CurvatureError> {
        let expected = dim * dim * rank * rank;
        if f.len() != expected {
            return Err(CurvatureError::RankMismatch {
                expected,
                got: f.len(),
            });
        }
        let out = BundleCurvature { dim, rank, f };
        for i in 0..dim {
            for j in 0..dim {
                for b in 0..rank {
                    for a in 0..rank {
                        let v = out.get(i, j, b, a);
                        if v != -out.get(j, i, b, a) || v != -out.get(i, j, a, b) {
                            return Err(CurvatureError::SymmetryViolation(
                                "skew bundle curvature".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn random<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> Self {
        let mut out = BundleCurvature::flat(dim, rank);
        for i in 0..dim {
            for j in (i + 1)..dim {
                for b in 0..rank {
                    for a in (b + 1)..rank {
                        let v = S::from_i64(rng.random_range(-3..=3));
                        let (p, q, r, s) = (
                            out.idx(i, j, b, a),
                            out.idx(j, i, b, a),
                            out.idx(i, j, a, b),
                            out.idx(j, i, a, b),
                        );
                        out.f[p] = v.clone();
                        out.f[s] = v.clone();
                        out.f[q] = -v.clone();
                        out.f[r] = -v;
                    }
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `(F_{ij})_{ba}`.
    pub fn get(&self, i: usize, j: usize, b: usize, a: usize) -> S {
        self.f[self.idx(i, j, b, a)].clone()
    }

    /// `F_{ij} ξ` for `ξ` given in the orthonormal frame of `E`.
    pub fn apply(&self, i: usize, j: usize, xi: &[S]) -> Vec<S> {
        (0..self.rank)
            .map(|b| {
                (0..self.rank).fold(S::zero(), |acc, a| {
                    acc + self.get(i, j, b, a) * xi[a].clone()
                })
            })
            .collect()
    }

    /// `F_{ij}` acting on the `E` factor of `η ∈ Cℓ ⊗ E`.
    pub fn apply_tensor(&self, i: usize, j: usize, eta: &[MultiVector<S>]) -> Vec<MultiVector<S>> {
        let dim = eta[0].dim();
        (0..self.rank)
            .map(|b| {
                let mut acc = MultiVector::zero(dim);
                for (a, eta_a) in eta.iter().enumerate() {
                    let f = self.get(i, j, b, a);
                    if !f.is_zero() {
                        acc = &acc + &eta_a.scale(&f);
                    }
                }
                acc
            })
            .collect()
    }
}
