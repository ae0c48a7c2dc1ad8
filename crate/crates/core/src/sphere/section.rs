use serde::Serialize;

use super::form::{
    ambient_dirac, connection_laplacian, constant_field, eval_form, exterior_derivative_fn,
    partial, sphere_volume, AmbientPolyForm,
};
use super::frame::{tangent_frame, SpherePoint, TangentFrame};
use super::{Poly, SphereError};
use crate::fiber::{Blade, FrameVector, MultiVector, MAX_DIM};
use crate::scalar::{rat, Rational, Scalar};

/// Sign `s` in `d*(∗f) = s ∗df`, used for the grade `n−1` part of the
/// twistor family. Both signs give twistor sections since the family is a
/// vector space; the value is pinned by the test suite.
pub const CODIFFERENTIAL_SIGN: i64 = 1;

/// How a grade component of a section was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Constant,
    Differential,
    StarDifferential,
    VolumeMultiple,
    Derived,
}

/// Section of `Cℓ(Sⁿ)` given by an ambient polynomial form on `ℝ^{n+1}`.
#[derive(Clone, Debug)]
pub struct SphereSection {
    n: usize,
    form: AmbientPolyForm,
    parts: Vec<(usize, Construction)>,
    partials: Vec<AmbientPolyForm>,
}

fn check_sphere_dim(n: usize) -> Result<(), SphereError> {
    if n < 2 || n + 1 > MAX_DIM {
        return Err(SphereError::DimensionOutOfRange(n));
    }
    Ok(())
}

/// `f(x) = ⟨a, x⟩` as a 0-form; on `Sⁿ` it satisfies `Δf = n f`.
pub fn linear_eigenfunction(a: &[Rational]) -> AmbientPolyForm {
    MultiVector::scalar(a.len(), Poly::linear(a))
}

/// `σ = c_1 + df_1 + d^*(∗f_2) + c_2 ∗1` with `f_i = ⟨a_i, ·⟩`.
pub fn build_twistor_section(
    n: usize,
    c1: &Rational,
    a1: &[Rational],
    a2: &[Rational],
    c2: &Rational,
) -> Result<SphereSection, SphereError> {
    check_sphere_dim(n)?;
    let ambient = n + 1;
    if a1.len() != ambient || a2.len() != ambient {
        return Err(SphereError::ParameterLength {
            expected: ambient,
            got: a1.len().min(a2.len()),
        });
    }
    let vol = sphere_volume(ambient);
    let mut form = MultiVector::scalar(ambient, Poly::constant(c1.clone()));
    form = &form + &exterior_derivative_fn(&Poly::linear(a1), ambient);
    // ∗df = ι_{grad f} vol, and ι_a ι_x dV already has no normal part
    let star_df = vol
        .contract(&constant_field(a2))
        .expect("dims")
        .scale(&Poly::from_i64(CODIFFERENTIAL_SIGN));
    form = &form + &star_df;
    form = &form + &vol.scale(&Poly::constant(c2.clone()));
    let parts = vec![
        (0, Construction::Constant),
        (1, Construction::Differential),
        (n - 1, Construction::StarDifferential),
        (n, Construction::VolumeMultiple),
    ];
    SphereSection::with_parts(n, form, parts)
}

/// Number of real parameters `(c_1, a_1, a_2, c_2)` of the family.
pub fn twistor_family_dimension(n: usize) -> usize {
    1 + (n + 1) + (n + 1) + 1
}

/// Basis of the parameter space: unit vectors in `(c_1, a_1, a_2, c_2)`.
pub fn twistor_family_basis(n: usize) -> Result<Vec<SphereSection>, SphereError> {
    let dim = twistor_family_dimension(n);
    let zero = rat(0, 1);
    let one = rat(1, 1);
    (0..dim)
        .map(|k| {
            let mut params = vec![zero.clone(); dim];
            params[k] = one.clone();
            build_twistor_section(
                n,
                &params[0],
                &params[1..n + 2],
                &params[n + 2..2 * n + 3],
                &params[2 * n + 3],
            )
        })
        .collect()
}

impl SphereSection {
    pub fn new(n: usize, form: AmbientPolyForm) -> Result<Self, SphereError> {
        SphereSection::with_parts(n, form, vec![])
    }

    fn with_parts(
        n: usize,
        form: AmbientPolyForm,
        parts: Vec<(usize, Construction)>,
    ) -> Result<Self, SphereError> {
        check_sphere_dim(n)?;
        if form.dim() != n + 1 {
            return Err(SphereError::ParameterLength {
                expected: n + 1,
                got: form.dim(),
            });
        }
        let partials = (0..=n).map(|i| partial(&form, i)).collect();
        Ok(SphereSection {
            n,
            form,
            parts,
            partials,
        })
    }

    fn derived(&self, form: AmbientPolyForm) -> SphereSection {
        let parts = (0..=self.n).map(|p| (p, Construction::Derived)).collect();
        SphereSection::with_parts(self.n, form, parts).expect("same dimension")
    }

    /// `df` for a polynomial `f`.
    pub fn differential(n: usize, f: &Poly) -> Result<Self, SphereError> {
        SphereSection::with_parts(
            n,
            exterior_derivative_fn(f, n + 1),
            vec![(1, Construction::Differential)],
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn form(&self) -> &AmbientPolyForm {
        &self.form
    }

    pub fn parts(&self) -> &[(usize, Construction)] {
        &self.parts
    }

    pub fn add(&self, other: &SphereSection) -> SphereSection {
        self.derived(&self.form + &other.form)
    }

    pub fn scale(&self, c: &Poly) -> SphereSection {
        self.derived(self.form.scale(c))
    }

    /// Section whose pullback is `Dσ`.
    pub fn dirac_section(&self) -> SphereSection {
        self.derived(ambient_dirac(&self.form))
    }

    /// Section whose pullback is `∇*∇σ`.
    pub fn connection_laplacian_section(&self) -> SphereSection {
        self.derived(connection_laplacian(&self.form))
    }

    /// Value at `p` in the given frame.
    pub fn value_in(&self, frame: &TangentFrame) -> MultiVector<f64> {
        frame.pullback(&eval_form(&self.form, frame.point().coords()))
    }

    pub fn value(&self, p: &SpherePoint) -> Result<MultiVector<f64>, SphereError> {
        Ok(self.value_in(&tangent_frame(p)?))
    }

    /// `∇_X σ` at the frame's base point for an ambient tangent vector `X`,
    /// via `D_X Ω − X♭ ∧ ι_x Ω` followed by pullback.
    pub fn covariant_derivative_in(
        &self,
        frame: &TangentFrame,
        x: &[f64],
    ) -> Result<MultiVector<f64>, SphereError> {
        let p = frame.point().coords();
        let normal: f64 = x.iter().zip(p).map(|(a, b)| a * b).sum();
        let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        if normal.abs() > 1e-10 * scale {
            return Err(SphereError::NotTangent(normal));
        }
        let ambient = self.n + 1;
        let mut flat = MultiVector::zero(ambient);
        for (xi, d) in x.iter().zip(&self.partials) {
            if *xi != 0.0 {
                flat = &flat + &eval_form(d, p).scale(xi);
            }
        }
        let value = eval_form(&self.form, p);
        let ix = value
            .contract(&FrameVector::from_coeffs(p.to_vec()))
            .expect("dims");
        let xflat = FrameVector::from_coeffs(x.to_vec()).to_multivector();
        let shape = xflat.wedge(&ix).expect("dims");
        Ok(frame.pullback(&(&flat - &shape)))
    }

    pub fn covariant_derivative(
        &self,
        p: &SpherePoint,
        x: &[f64],
    ) -> Result<MultiVector<f64>, SphereError> {
        self.covariant_derivative_in(&tangent_frame(p)?, x)
    }

    /// `∇_{Y_a} σ` for every frame vector.
    pub fn frame_derivatives(&self, frame: &TangentFrame) -> Vec<MultiVector<f64>> {
        (0..self.n)
            .map(|a| {
                self.covariant_derivative_in(frame, frame.vector(a))
                    .expect("frame vectors are tangent")
            })
            .collect()
    }

    /// `Dσ = Σ_a e_a · ∇_{e_a} σ` in the given frame.
    pub fn dirac_in(&self, frame: &TangentFrame) -> MultiVector<f64> {
        self.frame_derivatives(frame)
            .iter()
            .enumerate()
            .fold(MultiVector::zero(self.n), |acc, (a, d)| {
                &acc + &d.left_generator(a)
            })
    }

    pub fn dirac(&self, p: &SpherePoint) -> Result<MultiVector<f64>, SphereError> {
        Ok(self.dirac_in(&tangent_frame(p)?))
    }

    /// `max_a |∇_{e_a}σ + (1/n) e_a·Dσ|`.
    pub fn twistor_residual(&self, p: &SpherePoint) -> Result<f64, SphereError> {
        let frame = tangent_frame(p)?;
        let d = self.dirac_in(&frame);
        let inv_n = 1.0 / self.n as f64;
        Ok(self
            .frame_derivatives(&frame)
            .iter()
            .enumerate()
            .map(|(a, nabla)| (nabla + &d.left_generator(a).scale(&inv_n)).norm())
            .fold(0.0, f64::max))
    }

    /// `max_a |∇_{e_a}σ − λ e_a·σ|`.
    pub fn killing_residual(&self, lambda: f64, p: &SpherePoint) -> Result<f64, SphereError> {
        let frame = tangent_frame(p)?;
        let v = self.value_in(&frame);
        Ok(self
            .frame_derivatives(&frame)
            .iter()
            .enumerate()
            .map(|(a, nabla)| (nabla - &v.left_generator(a).scale(&lambda)).norm())
            .fold(0.0, f64::max))
    }

    /// Grades that carry a nonzero coefficient polynomial.
    pub fn populated_grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.form.terms().map(|(b, _)| b.grade()).collect();
        g.sort_unstable();
        g.dedup();
        // ambient grade q pulls back to tangent grade q, except that the
        // volume part ι_x dV has ambient grade n
        g.retain(|&q| q <= self.n);
        g
    }

    /// Ambient blades present in the form, for diagnostics.
    pub fn ambient_blades(&self) -> Vec<Blade> {
        self.form.terms().map(|(b, _)| b).collect()
    }
}
