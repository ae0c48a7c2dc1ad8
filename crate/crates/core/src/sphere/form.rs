//! Ambient polynomial forms on `ℝ^{n+1}` and the operators whose pullbacks
//! to the unit sphere give the intrinsic connection, Dirac operator and
//! connection laplacian.

use num_traits::Zero;

use super::Poly;
use crate::fiber::{Blade, FrameVector, MultiVector};
use crate::scalar::Rational;

/// Differential form on `ℝ^{n+1}` with polynomial coefficients; blade `e_I`
/// stands for `dx_I`.
pub type AmbientPolyForm = MultiVector<Poly>;

/// Polynomial vector field on `ℝ^{n+1}`.
pub type PolyField = FrameVector<Poly>;

/// Position field `x = Σ x_i ∂_i`.
pub fn position_field(ambient: usize) -> PolyField {
    FrameVector::from_coeffs((0..ambient).map(Poly::var).collect())
}

/// Constant field `∂_i`.
pub fn coordinate_field(ambient: usize, i: usize) -> PolyField {
    FrameVector::basis(ambient, i)
}

/// Constant field with the given rational components.
pub fn constant_field(a: &[Rational]) -> PolyField {
    FrameVector::from_coeffs(a.iter().map(|c| Poly::constant(c.clone())).collect())
}

/// Tangential part `V − ⟨V, x⟩ x`, exact on the unit sphere.
pub fn tangential_field(v: &PolyField) -> PolyField {
    let n = v.dim();
    let x = position_field(n);
    let vx = (0..n).fold(Poly::zero(), |acc, i| {
        acc + v.coeffs()[i].clone() * x.coeffs()[i].clone()
    });
    FrameVector::from_coeffs(
        (0..n)
            .map(|i| v.coeffs()[i].clone() - vx.clone() * x.coeffs()[i].clone())
            .collect(),
    )
}

/// Coefficientwise `∂Ω/∂x_i`.
pub fn partial(omega: &AmbientPolyForm, i: usize) -> AmbientPolyForm {
    omega.map(|c| c.derivative(i))
}

/// Flat derivative `D_V Ω = Σ V_i ∂_iΩ` along a polynomial field.
pub fn directional(omega: &AmbientPolyForm, v: &PolyField) -> AmbientPolyForm {
    let mut out = MultiVector::zero(omega.dim());
    for (i, vi) in v.coeffs().iter().enumerate() {
        if !vi.is_zero() {
            out = &out + &partial(omega, i).scale(vi);
        }
    }
    out
}

/// `𝒩_V Ω = D_V Ω − V♭ ∧ ι_x Ω`. For `V` tangent to the sphere its pullback
/// is the Levi-Civita derivative `∇_V ι^*Ω`.
pub fn nabla_field(omega: &AmbientPolyForm, v: &PolyField) -> AmbientPolyForm {
    let x = position_field(omega.dim());
    let ix = omega.contract(&x).expect("same ambient dimension");
    let shape = v
        .to_multivector()
        .wedge(&ix)
        .expect("same ambient dimension");
    &directional(omega, v) - &shape
}

/// Ambient representative of the Dirac operator:
/// `Σ_i ∂_i·𝒩_{∂_i}Ω − x·𝒩_xΩ`, whose pullback equals `D ι^*Ω`.
pub fn ambient_dirac(omega: &AmbientPolyForm) -> AmbientPolyForm {
    let n = omega.dim();
    let mut out = MultiVector::zero(n);
    for i in 0..n {
        let e = coordinate_field(n, i);
        let term = MultiVector::vector_action(&e, &nabla_field(omega, &e)).expect("dims");
        out = &out + &term;
    }
    let x = position_field(n);
    let normal = MultiVector::vector_action(&x, &nabla_field(omega, &x)).expect("dims");
    &out - &normal
}

/// Projected frame fields `T_a = ∂_a − x_a x`; `Σ_a T_a ⊗ T_a` is the
/// tangential projector on the sphere.
pub fn projected_frame(ambient: usize) -> Vec<PolyField> {
    (0..ambient)
        .map(|a| tangential_field(&coordinate_field(ambient, a)))
        .collect()
}

/// `∇*∇` through the projected frame: `−Σ_a (𝒩_{T_a}𝒩_{T_a}Ω + x_a 𝒩_{T_a}Ω)`,
/// using `∇_{T_a}T_a = −x_a T_a`.
pub fn connection_laplacian(omega: &AmbientPolyForm) -> AmbientPolyForm {
    modified_connection_laplacian(omega, &Poly::zero())
}

/// `𝒩^f_V Ω = 𝒩_V Ω + f V·Ω`.
pub fn modified_nabla_field(omega: &AmbientPolyForm, v: &PolyField, f: &Poly) -> AmbientPolyForm {
    let base = nabla_field(omega, v);
    if f.is_zero() {
        return base;
    }
    let act = MultiVector::vector_action(v, omega).expect("dims").scale(f);
    &base + &act
}

/// `∇^{f*}∇^f` through the projected frame.
pub fn modified_connection_laplacian(omega: &AmbientPolyForm, f: &Poly) -> AmbientPolyForm {
    let n = omega.dim();
    let mut out = MultiVector::zero(n);
    for (a, t) in projected_frame(n).iter().enumerate() {
        let first = modified_nabla_field(omega, t, f);
        let second = modified_nabla_field(&first, t, f);
        out = &out + &second;
        out = &out + &first.scale(&Poly::var(a));
    }
    -out
}

/// `Ω − x♭ ∧ ι_x Ω`: on the sphere this is the tangential part, whose
/// ambient inner products equal the intrinsic ones of the pullbacks.
pub fn tangential_part(omega: &AmbientPolyForm) -> AmbientPolyForm {
    let x = position_field(omega.dim());
    let ix = omega.contract(&x).expect("dims");
    omega - &x.to_multivector().wedge(&ix).expect("dims")
}

/// `dx_0 ∧ … ∧ dx_n`.
pub fn ambient_volume(ambient: usize) -> AmbientPolyForm {
    MultiVector::basis(ambient, Blade::full(ambient))
}

/// Volume form of the sphere, `ι_x (dx_0 ∧ … ∧ dx_n)`.
pub fn sphere_volume(ambient: usize) -> AmbientPolyForm {
    ambient_volume(ambient)
        .contract(&position_field(ambient))
        .expect("dims")
}

/// `ι^*(Σ_i ∂_i f dx_i)`, i.e. `df` for a polynomial `f`.
pub fn exterior_derivative_fn(f: &Poly, ambient: usize) -> AmbientPolyForm {
    let mut out = MultiVector::zero(ambient);
    for i in 0..ambient {
        out.add_term(Blade::vector(i), f.derivative(i));
    }
    out
}

/// Coefficientwise floating-point evaluation at an ambient point.
pub fn eval_form(omega: &AmbientPolyForm, x: &[f64]) -> MultiVector<f64> {
    let mut out = MultiVector::zero(omega.dim());
    for (b, c) in omega.terms() {
        out.add_term(b, c.eval(x));
    }
    out
}

/// Exact inner product of two ambient forms as a polynomial.
pub fn poly_inner(a: &AmbientPolyForm, b: &AmbientPolyForm) -> Poly {
    a.inner(b).expect("dims")
}

/// Largest total degree among the coefficients.
pub fn form_degree(omega: &AmbientPolyForm) -> usize {
    omega.terms().map(|(_, c)| c.degree()).max().unwrap_or(0)
}
