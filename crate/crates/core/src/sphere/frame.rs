use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::SphereError;
use crate::fiber::{Blade, MultiVector};

/// Unit vector in `ℝ^{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    pub fn new(x: Vec<f64>) -> Result<Self, SphereError> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (r - 1.0).abs() > 1e-12 {
            return Err(SphereError::NotOnSphere(r));
        }
        Ok(SpherePoint(x))
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(x: &[f64]) -> Result<Self, SphereError> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(r > 0.0) {
            return Err(SphereError::NotOnSphere(r));
        }
        Ok(SpherePoint(x.iter().map(|v| v / r).collect()))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Intrinsic dimension `n`.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
}

/// Seeded normal-then-normalize samples on `Sⁿ`.
pub fn sample_points(n: usize, count: usize, seed: u64) -> Vec<SpherePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..=n).map(|_| StandardNormal.sample(&mut rng)).collect();
        if let Ok(p) = SpherePoint::normalized(&v) {
            out.push(p);
        }
    }
    out
}

/// Orthonormal frame of `T_pSⁿ`, stored as ambient vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentFrame {
    point: SpherePoint,
    vectors: Vec<Vec<f64>>,
    /// `Y_{a_1} ∧ … ∧ Y_{a_q}` as ambient forms, indexed by tangent blade mask.
    blades: Vec<MultiVector<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Project the ambient basis onto `T_pSⁿ`, drop the vector with the largest
/// `|p_i|` and Gram–Schmidt the rest in index order.
pub fn tangent_frame(p: &SpherePoint) -> Result<TangentFrame, SphereError> {
    let x = p.coords();
    let big = (1..x.len()).fold(
        0,
        |best, i| if x[i].abs() > x[best].abs() { i } else { best },
    );
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(x.len() - 1);
    for i in (0..x.len()).filter(|&i| i != big) {
        let mut v: Vec<f64> = x.iter().map(|xj| -x[i] * xj).collect();
        v[i] += 1.0;
        for _ in 0..2 {
            for u in &vectors {
                let c = dot(u, &v);
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
            }
        }
        let r = dot(&v, &v).sqrt();
        if r < 1e-8 {
            return Err(SphereError::DegenerateFrame);
        }
        vectors.push(v.into_iter().map(|a| a / r).collect());
    }
    Ok(TangentFrame::assemble(p, vectors))
}

impl TangentFrame {
    fn assemble(p: &SpherePoint, vectors: Vec<Vec<f64>>) -> Self {
        let ambient = p.coords().len();
        let n = vectors.len();
        let mut blades: Vec<MultiVector<f64>> = Vec::with_capacity(1 << n);
        for b in Blade::all(n) {
            if b == Blade::SCALAR {
                blades.push(MultiVector::one(ambient));
                continue;
            }
            // extend the blade without its highest index by that index
            let top = b.indices().last().expect("nonempty blade");
            let rest = Blade(b.0 & !(1 << top));
            let mut y = MultiVector::zero(ambient);
            for (i, c) in vectors[top].iter().enumerate() {
                y.add_term(Blade::vector(i), *c);
            }
            let w = blades[rest.0 as usize].wedge(&y).expect("dims");
            blades.push(w);
        }
        TangentFrame {
            point: p.clone(),
            vectors,
            blades,
        }
    }

    /// Frame from explicit orthonormal tangent vectors.
    pub fn from_vectors(p: &SpherePoint, vectors: Vec<Vec<f64>>) -> Result<Self, SphereError> {
        if vectors.len() != p.dim() {
            return Err(SphereError::DegenerateFrame);
        }
        let f = TangentFrame::assemble(p, vectors);
        if f.orthonormality_defect() > 1e-10 {
            return Err(SphereError::DegenerateFrame);
        }
        Ok(f)
    }

    /// Frame rotated by an orthogonal `n×n` matrix, `Y'_a = Σ_b Q_{ba} Y_b`.
    pub fn rotated(&self, q: &nalgebra::DMatrix<f64>) -> Result<Self, SphereError> {
        let n = self.vectors.len();
        let vectors = (0..n)
            .map(|a| {
                let mut v = vec![0.0; n + 1];
                for b in 0..n {
                    v.iter_mut()
                        .zip(&self.vectors[b])
                        .for_each(|(x, y)| *x += q[(b, a)] * y);
                }
                v
            })
            .collect();
        TangentFrame::from_vectors(&self.point, vectors)
    }

    pub fn point(&self) -> &SpherePoint {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, a: usize) -> &[f64] {
        &self.vectors[a]
    }

    /// Largest deviation of the Gram matrix from the identity, together with
    /// the largest component along the base point.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, u) in self.vectors.iter().enumerate() {
            worst = worst.max(dot(u, self.point.coords()).abs());
            for (b, v) in self.vectors.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot(u, v) - target).abs());
            }
        }
        worst
    }

    fn ambient_blade(&self, b: Blade) -> &MultiVector<f64> {
        &self.blades[b.0 as usize]
    }

    /// Pullback of an ambient form value to the tangent fiber in this frame:
    /// the coefficient of `e_I` is `Ω(Y_{a_1}, …, Y_{a_q})`.
    pub fn pullback(&self, omega: &MultiVector<f64>) -> MultiVector<f64> {
        let n = self.dim();
        let mut out = MultiVector::zero(n);
        for b in Blade::all(n) {
            let c = omega.inner(&self.ambient_blade(b)).expect("dims");
            out.add_term(b, c);
        }
        out
    }

    /// Tangent fiber element written as an ambient form, for comparisons
    /// across frames.
    pub fn to_ambient(&self, phi: &MultiVector<f64>) -> MultiVector<f64> {
        let mut out = MultiVector::zero(self.point.coords().len());
        for (b, c) in phi.terms() {
            out = &out + &self.ambient_blade(b).scale(c);
        }
        out
    }

    /// Coordinates of an ambient vector in this frame.
    pub fn components(&self, v: &[f64]) -> Vec<f64> {
        self.vectors.iter().map(|y| dot(y, v)).collect()
    }
}
