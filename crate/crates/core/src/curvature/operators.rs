use nalgebra::DMatrix;

use super::{CurvatureError, CurvatureTensor};
use crate::fiber::{Blade, FrameVector, MultiVector};
use crate::linalg::jacobi_eigen;
use crate::scalar::{Field, Scalar, ToF64};

/// Bivector `½ Σ_{k<l} R_{ijkl} e_k e_l` whose commutator gives `R(e_i,e_j)`.
fn curvature_bivector<S: Field>(rt: &CurvatureTensor<S>, i: usize, j: usize) -> MultiVector<S> {
    let n = rt.dim();
    let half = S::from_ratio(1, 2);
    let mut b = MultiVector::zero(n);
    for k in 0..n {
        for l in (k + 1)..n {
            let c = rt.get(i, j, k, l);
            if !c.is_zero() {
                // e_k e_l = e_{kl} for k < l
                b.add_term(Blade::from_indices(&[k, l]), c * half.clone());
            }
        }
    }
    b
}

fn check_operand<S: Scalar>(
    rt: &CurvatureTensor<S>,
    phi: &MultiVector<S>,
) -> Result<(), CurvatureError> {
    if phi.dim() != rt.dim() {
        return Err(crate::fiber::FiberError::DimensionMismatch {
            left: rt.dim(),
            right: phi.dim(),
        }
        .into());
    }
    Ok(())
}

/// `R(e_i, e_j) φ = ½ Σ_{k<l} ⟨R(e_i,e_j)e_k, e_l⟩ [e_k e_l, φ]`.
pub fn curvature_action<S: Field>(
    rt: &CurvatureTensor<S>,
    i: usize,
    j: usize,
    phi: &MultiVector<S>,
) -> Result<MultiVector<S>, CurvatureError> {
    rt.check_index(i)?;
    rt.check_index(j)?;
    check_operand(rt, phi)?;
    Ok(curvature_bivector(rt, i, j).commutator(phi)?)
}

/// `R(e_i, X) φ` for a frame vector `X`.
fn curvature_action_x<S: Field>(
    rt: &CurvatureTensor<S>,
    i: usize,
    x: &FrameVector<S>,
    phi: &MultiVector<S>,
) -> Result<MultiVector<S>, CurvatureError> {
    let n = rt.dim();
    let mut b = MultiVector::zero(n);
    for (j, xj) in x.coeffs().iter().enumerate() {
        if !xj.is_zero() {
            b = &b + &curvature_bivector(rt, i, j).scale(xj);
        }
    }
    Ok(b.commutator(phi)?)
}

/// `𝓡φ = Σ_{i<j} e_i·e_j·R(e_i,e_j)φ`.
pub fn weitzenboeck_apply<S: Field>(
    rt: &CurvatureTensor<S>,
    phi: &MultiVector<S>,
) -> Result<MultiVector<S>, CurvatureError> {
    check_operand(rt, phi)?;
    let n = rt.dim();
    let mut out = MultiVector::zero(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let r = curvature_action(rt, i, j, phi)?;
            out = &out + &r.left_generator(j).left_generator(i);
        }
    }
    Ok(out)
}

/// `Ric_X σ = 2 Σ_i e_i · R(e_i, X) σ`.
pub fn ricci_apply<S: Field>(
    rt: &CurvatureTensor<S>,
    x: &FrameVector<S>,
    phi: &MultiVector<S>,
) -> Result<MultiVector<S>, CurvatureError> {
    check_operand(rt, phi)?;
    if x.dim() != rt.dim() {
        return Err(crate::fiber::FiberError::DimensionMismatch {
            left: rt.dim(),
            right: x.dim(),
        }
        .into());
    }
    let n = rt.dim();
    let mut out = MultiVector::zero(n);
    for i in 0..n {
        out = &out + &curvature_action_x(rt, i, x, phi)?.left_generator(i);
    }
    Ok(out.scale(&S::from_i64(2)))
}

/// `K_X = n/(n−2) [ (1/(n−1)) X·𝓡 − ½ Ric_X ]`, defined for `n ≥ 3`.
pub fn kx_apply<S: Field>(
    rt: &CurvatureTensor<S>,
    x: &FrameVector<S>,
    phi: &MultiVector<S>,
) -> Result<MultiVector<S>, CurvatureError> {
    let n = rt.dim();
    if n < 3 {
        return Err(CurvatureError::UnsupportedDimension(n));
    }
    let n_i = n as i64;
    let rphi = weitzenboeck_apply(rt, phi)?;
    let first = MultiVector::vector_action(x, &rphi)?.scale(&S::from_ratio(1, n_i - 1));
    let second = ricci_apply(rt, x, phi)?.scale(&S::from_ratio(1, 2));
    Ok((&first - &second).scale(&S::from_ratio(n_i, n_i - 2)))
}

/// Matrix of `𝓡` in the blade basis, indexed by blade mask.
#[derive(Clone, Debug, PartialEq)]
pub struct WeitzenboeckMatrix<S> {
    dim: usize,
    entries: Vec<S>,
}

impl<S: Scalar> WeitzenboeckMatrix<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        1 << self.dim
    }

    /// Coefficient of `e_row` in `𝓡 e_col`.
    pub fn entry(&self, row: Blade, col: Blade) -> S {
        self.entries[row.0 as usize * self.size() + col.0 as usize].clone()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|r| (0..r).all(|c| self.entries[r * n + c] == self.entries[c * n + r]))
    }

    /// True when no entry couples blades of different grade.
    pub fn is_grade_diagonal(&self) -> bool {
        Blade::all(self.dim).all(|r| {
            Blade::all(self.dim).all(|c| r.grade() == c.grade() || self.entry(r, c).is_zero())
        })
    }

    /// Grade-`p` block in the ordering of [`Blade::of_grade`].
    pub fn grade_block(&self, p: usize) -> Vec<Vec<S>> {
        let blades: Vec<Blade> = Blade::of_grade(self.dim, p).collect();
        blades
            .iter()
            .map(|&r| blades.iter().map(|&c| self.entry(r, c)).collect())
            .collect()
    }

    pub fn trace_grade(&self, p: usize) -> S {
        Blade::of_grade(self.dim, p).fold(S::zero(), |acc, b| acc + self.entry(b, b))
    }

    pub fn trace(&self) -> S {
        Blade::all(self.dim).fold(S::zero(), |acc, b| acc + self.entry(b, b))
    }
}

pub fn weitzenboeck_matrix<S: Field>(rt: &CurvatureTensor<S>) -> WeitzenboeckMatrix<S> {
    let dim = rt.dim();
    let size = 1usize << dim;
    let mut entries = vec![S::zero(); size * size];
    for col in Blade::all(dim) {
        let image = weitzenboeck_apply(rt, &MultiVector::basis(dim, col))
            .expect("basis blade has the tensor's dimension");
        for (row, c) in image.terms() {
            entries[row.0 as usize * size + col.0 as usize] = c.clone();
        }
    }
    WeitzenboeckMatrix { dim, entries }
}

/// Trace of `𝓡` restricted to `p`-forms.
pub fn trace_weitzenboeck<S: Field>(
    rt: &CurvatureTensor<S>,
    p: usize,
) -> Result<S, CurvatureError> {
    let dim = rt.dim();
    if p > dim {
        return Err(crate::fiber::FiberError::GradeOutOfRange { grade: p, dim }.into());
    }
    let mut acc = S::zero();
    for b in Blade::of_grade(dim, p) {
        acc = acc + weitzenboeck_apply(rt, &MultiVector::basis(dim, b))?.coeff(b);
    }
    Ok(acc)
}

/// `R_0 = min_{|σ|=1} ⟨𝓡σ, σ⟩`, from Jacobi on each grade block.
pub fn r0<S: Field + ToF64>(rt: &CurvatureTensor<S>) -> f64 {
    let w = weitzenboeck_matrix(rt);
    (0..=rt.dim())
        .map(|p| {
            let block = w.grade_block(p);
            let m = block.len();
            let a = DMatrix::from_fn(m, m, |r, c| block[r][c].to_f64());
            jacobi_eigen(&a).eigenvalues[0]
        })
        .fold(f64::INFINITY, f64::min)
}
