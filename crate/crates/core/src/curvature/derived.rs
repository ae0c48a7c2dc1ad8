use super::operators::{curvature_action, weitzenboeck_apply};
use super::{BundleCurvature, CurvatureError, CurvatureTensor};
use crate::fiber::{Blade, Dual, FrameVector, MultiVector};
use crate::scalar::Field;

/// A Dirac bundle seen fiberwise: Clifford action of the frame and the
/// curvature endomorphisms `R(e_i, e_j)`.
///
/// The default [`DiracBundle::weitzenboeck`] evaluates the defining sum
/// directly from these two pieces of data.
pub trait DiracBundle<S: Field> {
    type Elem: Clone + std::fmt::Debug + PartialEq;

    fn dim(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `e_{i+1} · x`.
    fn clifford(&self, i: usize, x: &Self::Elem) -> Self::Elem;
    /// `R(e_{i+1}, e_{j+1}) x`.
    fn curvature(&self, i: usize, j: usize, x: &Self::Elem) -> Self::Elem;

    fn weitzenboeck(&self, x: &Self::Elem) -> Self::Elem {
        let n = self.dim();
        let mut out = self.zero();
        for i in 0..n {
            for j in (i + 1)..n {
                let r = self.curvature(i, j, x);
                out = self.add(&out, &self.clifford(i, &self.clifford(j, &r)));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct CliffordBundle<S> {
    pub tensor: CurvatureTensor<S>,
}

impl<S: Field> DiracBundle<S> for CliffordBundle<S> {
    type Elem = MultiVector<S>;

    fn dim(&self) -> usize {
        self.tensor.dim()
    }

    fn zero(&self) -> MultiVector<S> {
        MultiVector::zero(self.dim())
    }

    fn add(&self, a: &MultiVector<S>, b: &MultiVector<S>) -> MultiVector<S> {
        a + b
    }

    fn clifford(&self, i: usize, x: &MultiVector<S>) -> MultiVector<S> {
        x.left_generator(i)
    }

    fn curvature(&self, i: usize, j: usize, x: &MultiVector<S>) -> MultiVector<S> {
        curvature_action(&self.tensor, i, j, x).expect("indices within the frame")
    }
}

/// `S_1 ⊕ S_2` with componentwise action and curvature.
#[derive(Clone, Debug)]
pub struct WhitneySum<A, B>(pub A, pub B);

impl<S: Field, A: DiracBundle<S>, B: DiracBundle<S>> DiracBundle<S> for WhitneySum<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn zero(&self) -> Self::Elem {
        (self.0.zero(), self.1.zero())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.0.add(&a.0, &b.0), self.1.add(&a.1, &b.1))
    }

    fn clifford(&self, i: usize, x: &Self::Elem) -> Self::Elem {
        (self.0.clifford(i, &x.0), self.1.clifford(i, &x.1))
    }

    fn curvature(&self, i: usize, j: usize, x: &Self::Elem) -> Self::Elem {
        (self.0.curvature(i, j, &x.0), self.1.curvature(i, j, &x.1))
    }
}

/// Dual of the Clifford bundle. The induced curvature on the dual is
/// `(R σ*)(ξ) = −σ*(R ξ)`, computed here by pairing against every blade.
#[derive(Clone, Debug)]
pub struct DualBundle<S> {
    pub base: CliffordBundle<S>,
}

impl<S: Field> DiracBundle<S> for DualBundle<S> {
    type Elem = Dual<S>;

    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn zero(&self) -> Dual<S> {
        Dual(MultiVector::zero(self.dim()))
    }

    fn add(&self, a: &Dual<S>, b: &Dual<S>) -> Dual<S> {
        Dual(&a.0 + &b.0)
    }

    fn clifford(&self, i: usize, x: &Dual<S>) -> Dual<S> {
        let e = FrameVector::basis(self.dim(), i).to_multivector();
        Dual::action(&e, x).expect("same dimension")
    }

    fn curvature(&self, i: usize, j: usize, x: &Dual<S>) -> Dual<S> {
        let n = self.dim();
        let mut out = MultiVector::zero(n);
        for b in Blade::all(n) {
            let rb = self.base.curvature(i, j, &MultiVector::basis(n, b));
            out.add_term(b, -x.pair(&rb).expect("same dimension"));
        }
        Dual(out)
    }
}

/// `Cℓ ⊗ E` with `E` euclidean of rank `m`; elements are the components
/// `η = Σ_a η_a ⊗ f_a`.
#[derive(Clone, Debug)]
pub struct TensorBundle<S> {
    pub base: CliffordBundle<S>,
    pub aux: BundleCurvature<S>,
}

impl<S: Field> TensorBundle<S> {
    pub fn new(base: CliffordBundle<S>, aux: BundleCurvature<S>) -> Result<Self, CurvatureError> {
        if aux.dim() != base.dim() {
            return Err(CurvatureError::RankMismatch {
                expected: base.dim(),
                got: aux.dim(),
            });
        }
        Ok(TensorBundle { base, aux })
    }

    /// `σ ⊗ ξ` as components.
    pub fn simple(&self, sigma: &MultiVector<S>, xi: &[S]) -> Vec<MultiVector<S>> {
        xi.iter().map(|c| sigma.scale(c)).collect()
    }
}

impl<S: Field> DiracBundle<S> for TensorBundle<S> {
    type Elem = Vec<MultiVector<S>>;

    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn zero(&self) -> Self::Elem {
        vec![MultiVector::zero(self.dim()); self.aux.rank()]
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn clifford(&self, i: usize, x: &Self::Elem) -> Self::Elem {
        x.iter().map(|c| self.base.clifford(i, c)).collect()
    }

    fn curvature(&self, i: usize, j: usize, x: &Self::Elem) -> Self::Elem {
        let aux = self.aux.apply_tensor(i, j, x);
        x.iter()
            .zip(aux)
            .map(|(c, f)| &self.base.curvature(i, j, c) + &f)
            .collect()
    }
}

/// `𝓡(ξ, ζ) = (𝓡ξ, 𝓡ζ)`.
pub fn derived_weitzenboeck_sum<S: Field>(
    rt: &CurvatureTensor<S>,
    x: &(MultiVector<S>, MultiVector<S>),
) -> Result<(MultiVector<S>, MultiVector<S>), CurvatureError> {
    Ok((weitzenboeck_apply(rt, &x.0)?, weitzenboeck_apply(rt, &x.1)?))
}

/// `𝓡(σ*) = (𝓡σ)*`.
pub fn derived_weitzenboeck_dual<S: Field>(
    rt: &CurvatureTensor<S>,
    x: &Dual<S>,
) -> Result<Dual<S>, CurvatureError> {
    Ok(Dual(weitzenboeck_apply(rt, &x.0)?))
}

/// `𝓡(σ⊗ξ) = 𝓡σ⊗ξ + Σ_{i<j} e_ie_j·σ ⊗ F_{ij}ξ`, extended linearly.
pub fn derived_weitzenboeck_tensor<S: Field>(
    rt: &CurvatureTensor<S>,
    aux: &BundleCurvature<S>,
    eta: &[MultiVector<S>],
) -> Result<Vec<MultiVector<S>>, CurvatureError> {
    if eta.len() != aux.rank() {
        return Err(CurvatureError::RankMismatch {
            expected: aux.rank(),
            got: eta.len(),
        });
    }
    if aux.dim() != rt.dim() {
        return Err(CurvatureError::RankMismatch {
            expected: rt.dim(),
            got: aux.dim(),
        });
    }
    let n = rt.dim();
    let mut out = eta
        .iter()
        .map(|c| weitzenboeck_apply(rt, c))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..n {
        for j in (i + 1)..n {
            let moved: Vec<_> = eta
                .iter()
                .map(|c| c.left_generator(j).left_generator(i))
                .collect();
            for (o, f) in out.iter_mut().zip(aux.apply_tensor(i, j, &moved)) {
                *o = &*o + &f;
            }
        }
    }
    Ok(out)
}

fn dot<S: Field>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `Θ(σ⊗ξ, τ⊗ζ) = Σ_{i<j} ⟨e_ie_j·σ, τ⟩ ⟨F_{ij}ξ, ζ⟩`, the trace over
/// `Λ²` taken in the orthonormal basis `e_i ∧ e_j`.
pub fn theta<S: Field>(
    aux: &BundleCurvature<S>,
    sigma: &MultiVector<S>,
    xi: &[S],
    tau: &MultiVector<S>,
    zeta: &[S],
) -> Result<S, CurvatureError> {
    let n = aux.dim();
    let mut acc = S::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let s = sigma.left_generator(j).left_generator(i).inner(tau)?;
            acc = acc + s * dot(&aux.apply(i, j, xi), zeta);
        }
    }
    Ok(acc)
}

/// Same form as [`theta`] summed over all ordered pairs with weight ½.
pub fn theta_full_sum<S: Field>(
    aux: &BundleCurvature<S>,
    sigma: &MultiVector<S>,
    xi: &[S],
    tau: &MultiVector<S>,
    zeta: &[S],
) -> Result<S, CurvatureError> {
    let n = aux.dim();
    let mut acc = S::zero();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                // F_ii = 0
                continue;
            }
            let eiej = MultiVector::one(n).left_generator(j).left_generator(i);
            let s = (&eiej * sigma).inner(tau)?;
            acc = acc + s * dot(&aux.apply(i, j, xi), zeta);
        }
    }
    Ok(acc * S::from_ratio(1, 2))
}

/// Determinant of the Gram matrix of `𝓡` on `span{σ⊗ξ, τ⊗ζ}`:
/// `⟨𝓡σ,σ⟩⟨𝓡τ,τ⟩|ξ|²|ζ|² − (⟨𝓡σ,τ⟩⟨ξ,ζ⟩ + Θ)²`.
pub fn positivity_2x2<S: Field>(
    rt: &CurvatureTensor<S>,
    aux: &BundleCurvature<S>,
    sigma: &MultiVector<S>,
    xi: &[S],
    tau: &MultiVector<S>,
    zeta: &[S],
) -> Result<S, CurvatureError> {
    let rs = weitzenboeck_apply(rt, sigma)?;
    let rt_tau = weitzenboeck_apply(rt, tau)?;
    let a = rs.inner(sigma)? * dot(xi, xi);
    let d = rt_tau.inner(tau)? * dot(zeta, zeta);
    let b = rs.inner(tau)? * dot(xi, zeta) + theta(aux, sigma, xi, tau, zeta)?;
    Ok(a * d - b.clone() * b)
}
