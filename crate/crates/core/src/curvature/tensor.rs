use rand::Rng;

use super::CurvatureError;
use crate::fiber::{FrameVector, MAX_DIM, MIN_DIM};
use crate::scalar::{Field, Scalar};

/// Riemann tensor of the base in an orthonormal frame,
/// `R_{ijkl} = ⟨R(e_i, e_j) e_k, e_l⟩` with
/// `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<S> {
    dim: usize,
    r: Vec<S>,
}

impl<S: Scalar> CurvatureTensor<S> {
    fn idx(dim: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * dim + j) * dim + k) * dim + l
    }

    /// Validates the pair antisymmetries, pair symmetry and first Bianchi
    /// identity exactly.
    pub fn from_components(dim: usize, r: Vec<S>) -> Result<Self, CurvatureError> {
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(CurvatureError::Fiber(
                crate::fiber::FiberError::DimensionOutOfRange(dim),
            ));
        }
        if r.len() != dim.pow(4) {
            return Err(CurvatureError::RankMismatch {
                expected: dim.pow(4),
                got: r.len(),
            });
        }
        let t = CurvatureTensor { dim, r };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), CurvatureError> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(i, j, k, l);
                        if v != -self.get(j, i, k, l) || v != -self.get(i, j, l, k) {
                            return Err(CurvatureError::SymmetryViolation(
                                "antisymmetry in a pair".into(),
                            ));
                        }
                        if v != self.get(k, l, i, j) {
                            return Err(CurvatureError::SymmetryViolation("pair symmetry".into()));
                        }
                        let b = v + self.get(j, k, i, l) + self.get(k, i, j, l);
                        if !b.is_zero() {
                            return Err(CurvatureError::SymmetryViolation(
                                "first Bianchi identity".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `R(X,Y)Z = κ(⟨Y,Z⟩X − ⟨X,Z⟩Y)`.
    pub fn constant_curvature(dim: usize, kappa: S) -> Self {
        assert!((MIN_DIM..=MAX_DIM).contains(&dim), "dimension {dim}");
        let mut r = vec![S::zero(); dim.pow(4)];
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    continue;
                }
                // δ_jk δ_il − δ_ik δ_jl
                r[Self::idx(dim, i, j, j, i)] = kappa.clone();
                r[Self::idx(dim, i, j, i, j)] = -kappa.clone();
            }
        }
        CurvatureTensor { dim, r }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Component `R_{ijkl}`, zero-based indices.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> S {
        self.r[Self::idx(self.dim, i, j, k, l)].clone()
    }

    pub fn check_index(&self, index: usize) -> Result<(), CurvatureError> {
        if index >= self.dim {
            return Err(CurvatureError::IndexOutOfRange {
                index,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// `s = Σ_{i,j} R_{ijji}`.
    pub fn scalar_curvature(&self) -> S {
        let n = self.dim;
        let mut s = S::zero();
        for i in 0..n {
            for j in 0..n {
                s = s + self.get(i, j, j, i);
            }
        }
        s
    }

    /// Ricci endomorphism `Ric(X) = Σ_k R(X, e_k) e_k` as the matrix
    /// `Ric_{ij} = ⟨Ric(e_i), e_j⟩ = Σ_k R_{ikkj}`.
    pub fn ricci_matrix(&self) -> Vec<Vec<S>> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(S::zero(), |acc, k| acc + self.get(i, k, k, j)))
                    .collect()
            })
            .collect()
    }

    /// `R(e_i, e_j) Z` for a frame vector `Z`.
    pub fn apply_vector(&self, i: usize, j: usize, z: &FrameVector<S>) -> FrameVector<S> {
        let n = self.dim;
        let coeffs = (0..n)
            .map(|l| {
                (0..n).fold(S::zero(), |acc, k| {
                    acc + z.coeffs()[k].clone() * self.get(i, j, k, l)
                })
            })
            .collect();
        FrameVector::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &S) -> Self {
        CurvatureTensor {
            dim: self.dim,
            r: self.r.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CurvatureTensor<T> {
        CurvatureTensor {
            dim: self.dim,
            r: self.r.iter().map(f).collect(),
        }
    }
}

impl<S: Field> CurvatureTensor<S> {
    /// Algebraic curvature tensor from random small integers: antisymmetrize
    /// both pairs, symmetrize under pair exchange, then remove the totally
    /// antisymmetric part so that the first Bianchi identity holds.
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> Self {
        let n = dim;
        let raw: Vec<i64> = (0..n.pow(4)).map(|_| rng.random_range(-4..=4)).collect();
        let a = |i, j, k, l| raw[Self::idx(n, i, j, k, l)];
        let t = |i, j, k, l| a(i, j, k, l) - a(j, i, k, l) - a(i, j, l, k) + a(j, i, l, k);
        let p = |i, j, k, l| t(i, j, k, l) + t(k, l, i, j);
        let mut r = vec![S::zero(); n.pow(4)];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let bianchi = p(i, j, k, l) + p(j, k, i, l) + p(k, i, j, l);
                        // 3P − b(P) keeps everything integral
                        r[Self::idx(n, i, j, k, l)] = S::from_i64(3 * p(i, j, k, l) - bianchi);
                    }
                }
            }
        }
        CurvatureTensor { dim, r }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_curvature_matches_defining_formula() {
        let n = 3;
        let t = CurvatureTensor::constant_curvature(n, rat(2, 1));
        let x = FrameVector::basis(n, 0);
        // R(e1, e2) e1 = κ(⟨e2,e1⟩e1 − ⟨e1,e1⟩e2) = −κ e2
        let v = t.apply_vector(0, 1, &x);
        assert_eq!(v.coeffs(), &[rat(0, 1), rat(-2, 1), rat(0, 1)]);
        assert_eq!(t.scalar_curvature(), rat(12, 1));
        assert!(t.validate().is_ok());
    }

    #[test]
    fn ricci_of_constant_curvature() {
        let t = CurvatureTensor::constant_curvature(4, rat(1, 1));
        let ric = t.ricci_matrix();
        for (i, row) in ric.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, if i == j { rat(3, 1) } else { rat(0, 1) });
            }
        }
    }

    #[test]
    fn random_tensors_satisfy_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=5 {
            let t: CurvatureTensor<Rational> = CurvatureTensor::random(n, &mut rng);
            assert!(t.validate().is_ok());
            assert!(t.r.iter().any(|v| *v != rat(0, 1)));
        }
    }

    #[test]
    fn rejects_broken_symmetry() {
        let mut r = vec![rat(0, 1); 16];
        r[CurvatureTensor::<Rational>::idx(2, 0, 1, 0, 1)] = rat(1, 1);
        assert!(matches!(
            CurvatureTensor::from_components(2, r),
            Err(CurvatureError::SymmetryViolation(_))
        ));
    }
}
