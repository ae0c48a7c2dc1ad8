use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::blade::{
    clifford_product, interior_product, reversion_is_negative, wedge_product, Blade, MAX_DIM,
    MIN_DIM,
};
use super::FiberError;
use crate::scalar::{sign_pow, Scalar, ToF64};

/// Element of the `2^n`-dimensional Clifford fiber over an orthonormal frame.
///
/// Coefficients are kept in a sparse map keyed by blade. Explicit zeros may
/// be present; equality ignores them.
#[derive(Clone, Debug)]
pub struct MultiVector<S> {
    dim: usize,
    coeffs: BTreeMap<Blade, S>,
}

/// Tangent vector given by its coefficients over the orthonormal frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameVector<S> {
    coeffs: Vec<S>,
}

fn check_dim(dim: usize) {
    assert!(
        (MIN_DIM..=MAX_DIM).contains(&dim),
        "fiber dimension {dim} outside {MIN_DIM}..={MAX_DIM}"
    );
}

impl<S: Scalar> FrameVector<S> {
    /// Frame vector `e_{i+1}`.
    pub fn basis(dim: usize, i: usize) -> Self {
        check_dim(dim);
        assert!(i < dim, "frame index {i} out of range for dimension {dim}");
        let mut coeffs = vec![S::zero(); dim];
        coeffs[i] = S::one();
        FrameVector { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        check_dim(coeffs.len());
        FrameVector { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn norm_sq(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        FrameVector {
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    /// The same vector as a grade-1 multivector.
    pub fn to_multivector(&self) -> MultiVector<S> {
        let mut out = MultiVector::zero(self.dim());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_term(Blade::vector(i), c.clone());
        }
        out
    }
}

impl<S: Scalar> MultiVector<S> {
    pub fn zero(dim: usize) -> Self {
        check_dim(dim);
        MultiVector {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, value: S) -> Self {
        MultiVector::from_blade(dim, Blade::SCALAR, value)
    }

    pub fn one(dim: usize) -> Self {
        MultiVector::scalar(dim, S::one())
    }

    pub fn from_blade(dim: usize, blade: Blade, value: S) -> Self {
        let mut out = MultiVector::zero(dim);
        assert!(
            blade.is_subset_of(Blade::full(dim)),
            "blade {blade} outside dimension {dim}"
        );
        out.coeffs.insert(blade, value);
        out
    }

    /// Unit blade `e_I`.
    pub fn basis(dim: usize, blade: Blade) -> Self {
        MultiVector::from_blade(dim, blade, S::one())
    }

    /// Unit blade from notation such as `"e12"` or `"1"`; indices are
    /// single one-based digits.
    pub fn parse_blade(dim: usize, text: &str) -> Result<Self, FiberError> {
        let bad = || FiberError::BladeSyntax(text.to_string());
        if text == "1" {
            return Ok(MultiVector::one(dim));
        }
        let digits = text.strip_prefix('e').ok_or_else(bad)?;
        let mut indices = Vec::new();
        for ch in digits.chars() {
            let d = ch.to_digit(10).ok_or_else(bad)? as usize;
            if d == 0 || d > dim || indices.contains(&(d - 1)) {
                return Err(bad());
            }
            indices.push(d - 1);
        }
        if indices.is_empty() {
            return Err(bad());
        }
        Ok(MultiVector::basis(dim, Blade::from_indices(&indices)))
    }

    /// Volume element `∗1 = e_{1..n}`.
    pub fn volume(dim: usize) -> Self {
        MultiVector::basis(dim, Blade::full(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, blade: Blade) -> S {
        self.coeffs.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    /// Nonzero terms in blade order.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, &S)> {
        self.coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(b, c)| (*b, c))
    }

    pub fn add_term(&mut self, blade: Blade, value: S) {
        if value.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&blade) {
            Some(c) => {
                let sum = c.clone() + value;
                *c = sum;
            }
            None => {
                self.coeffs.insert(blade, value);
            }
        }
    }

    fn add_signed(&mut self, negative: bool, blade: Blade, value: S) {
        if negative {
            self.add_term(blade, -value)
        } else {
            self.add_term(blade, value)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    /// Drop stored zero coefficients.
    pub fn pruned(mut self) -> Self {
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    fn ensure_same_dim(&self, other: &Self) -> Result<(), FiberError> {
        if self.dim != other.dim {
            return Err(FiberError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MultiVector<T> {
        let mut out = MultiVector::zero(self.dim);
        for (b, c) in self.terms() {
            out.add_term(b, f(c));
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = MultiVector::zero(self.dim);
        for (b, c) in self.terms() {
            out.add_term(b, c.clone() * s.clone());
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FiberError> {
        self.ensure_same_dim(other)?;
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(b, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FiberError> {
        self.ensure_same_dim(other)?;
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(b, -c.clone());
        }
        Ok(out)
    }

    /// Clifford product with `e_i e_i = -1` and `e_i e_j = -e_j e_i`.
    pub fn geometric_product(&self, other: &Self) -> Result<Self, FiberError> {
        self.ensure_same_dim(other)?;
        let mut out = MultiVector::zero(self.dim);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let (neg, blade) = clifford_product(a, b);
                out.add_signed(neg, blade, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FiberError> {
        self.ensure_same_dim(other)?;
        let mut out = MultiVector::zero(self.dim);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some((neg, blade)) = wedge_product(a, b) {
                    out.add_signed(neg, blade, ca.clone() * cb.clone());
                }
            }
        }
        Ok(out)
    }

    /// Metric interior product `ι_v a`.
    pub fn contract(&self, v: &FrameVector<S>) -> Result<Self, FiberError> {
        if v.dim() != self.dim {
            return Err(FiberError::DimensionMismatch {
                left: v.dim(),
                right: self.dim,
            });
        }
        let mut out = MultiVector::zero(self.dim);
        for (i, vi) in v.coeffs().iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (b, c) in self.terms() {
                if let Some((neg, blade)) = interior_product(i, b) {
                    out.add_signed(neg, blade, vi.clone() * c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Clifford action of a frame vector through the exterior identification,
    /// `v · φ = v ∧ φ − ι_v φ`.
    pub fn vector_action(v: &FrameVector<S>, phi: &Self) -> Result<Self, FiberError> {
        let wedge = v.to_multivector().wedge(phi)?;
        wedge.try_sub(&phi.contract(v)?)
    }

    /// Left multiplication by the generator `e_{i+1}`.
    pub fn left_generator(&self, i: usize) -> Self {
        let mut out = MultiVector::zero(self.dim);
        let e = Blade::vector(i);
        for (b, c) in self.terms() {
            let (neg, blade) = clifford_product(e, b);
            out.add_signed(neg, blade, c.clone());
        }
        out
    }

    /// Reversion: the anti-automorphism fixing vectors.
    pub fn reversion(&self) -> Self {
        let mut out = MultiVector::zero(self.dim);
        for (b, c) in self.terms() {
            out.add_signed(reversion_is_negative(b), b, c.clone());
        }
        out
    }

    /// Grade involution: `(-1)^k` on grade `k`.
    pub fn grade_involution(&self) -> Self {
        let mut out = MultiVector::zero(self.dim);
        for (b, c) in self.terms() {
            out.add_signed(b.grade() % 2 == 1, b, c.clone());
        }
        out
    }

    pub fn grade_project(&self, grade: usize) -> Result<Self, FiberError> {
        if grade > self.dim {
            return Err(FiberError::GradeOutOfRange {
                grade,
                dim: self.dim,
            });
        }
        let mut out = MultiVector::zero(self.dim);
        for (b, c) in self.terms() {
            if b.grade() == grade {
                out.add_term(b, c.clone());
            }
        }
        Ok(out)
    }

    /// Grade of a homogeneous nonzero element.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms().map(|(b, _)| b.grade());
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    /// Hodge star fixed by `φ ∧ ∗ψ = ⟨φ, ψ⟩ ∗1`.
    pub fn hodge(&self) -> Self {
        let mut out = MultiVector::zero(self.dim);
        for (b, c) in self.terms() {
            let comp = b.complement(self.dim);
            let (neg, _) = wedge_product(b, comp).expect("complement is disjoint");
            out.add_signed(neg, comp, c.clone());
        }
        out
    }

    /// Induced inner product; the blade basis is orthonormal.
    pub fn inner(&self, other: &Self) -> Result<S, FiberError> {
        self.ensure_same_dim(other)?;
        let mut acc = S::zero();
        for (b, c) in self.terms() {
            if let Some(d) = other.coeffs.get(&b) {
                acc = acc + c.clone() * d.clone();
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> S {
        self.terms()
            .fold(S::zero(), |acc, (_, c)| acc + c.clone() * c.clone())
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self, FiberError> {
        self.geometric_product(other)?
            .try_sub(&other.geometric_product(self)?)
    }

    /// Sum of the grade projections; identity, used for completeness checks.
    pub fn grades(&self) -> Vec<Self> {
        (0..=self.dim)
            .map(|p| self.grade_project(p).expect("grade in range"))
            .collect()
    }

    /// Coefficient vector in mask order, length `2^n`.
    pub fn to_dense(&self) -> Vec<S> {
        let mut v = vec![S::zero(); 1 << self.dim];
        for (b, c) in self.terms() {
            v[b.0 as usize] = c.clone();
        }
        v
    }

    pub fn from_dense(dim: usize, values: &[S]) -> Self {
        assert_eq!(values.len(), 1 << dim, "dense length must be 2^dim");
        let mut out = MultiVector::zero(dim);
        for (i, c) in values.iter().enumerate() {
            out.add_term(Blade(i as u32), c.clone());
        }
        out
    }

    /// Sign `(-1)^{p(n-p) + p(p+1)/2}` relating `∗1 · φ` and `∗φ` on grade `p`.
    pub fn volume_action_sign(dim: usize, p: usize) -> S {
        sign_pow(p * (dim - p) + p * (p + 1) / 2)
    }
}

impl<S: Scalar + ToF64> MultiVector<S> {
    pub fn to_f64(&self) -> MultiVector<f64> {
        self.map(|c| c.to_f64())
    }
}

impl MultiVector<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> PartialEq for MultiVector<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let lhs: Vec<_> = self.terms().collect();
        let rhs: Vec<_> = other.terms().collect();
        lhs == rhs
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for MultiVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (b, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if b == Blade::SCALAR {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{c}*{b}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<S: Scalar> Add for &MultiVector<S> {
    type Output = MultiVector<S>;
    fn add(self, rhs: Self) -> MultiVector<S> {
        self.try_add(rhs).expect("multivector dimensions differ")
    }
}

impl<S: Scalar> Sub for &MultiVector<S> {
    type Output = MultiVector<S>;
    fn sub(self, rhs: Self) -> MultiVector<S> {
        self.try_sub(rhs).expect("multivector dimensions differ")
    }
}

impl<S: Scalar> Mul for &MultiVector<S> {
    type Output = MultiVector<S>;
    fn mul(self, rhs: Self) -> MultiVector<S> {
        self.geometric_product(rhs)
            .expect("multivector dimensions differ")
    }
}

impl<S: Scalar> Neg for &MultiVector<S> {
    type Output = MultiVector<S>;
    fn neg(self) -> MultiVector<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Add for MultiVector<S> {
    type Output = MultiVector<S>;
    fn add(self, rhs: Self) -> MultiVector<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for MultiVector<S> {
    type Output = MultiVector<S>;
    fn sub(self, rhs: Self) -> MultiVector<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for MultiVector<S> {
    type Output = MultiVector<S>;
    fn neg(self) -> MultiVector<S> {
        -&self
    }
}
