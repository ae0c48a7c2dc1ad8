//! Pointwise identity checks for sections of `Cℓ(Sⁿ)`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::json;

use super::form::{
    constant_field, eval_form, modified_connection_laplacian, poly_inner, tangential_field,
    tangential_part,
};
use super::{
    sample_points, tangent_frame, twistor_family_basis, twistor_family_dimension, Poly,
    SphereError, SpherePoint, SphereSection, TangentFrame,
};
use crate::curvature::{kx_apply, ricci_apply, weitzenboeck_apply, CurvatureTensor};
use crate::fiber::{FrameVector, MultiVector};
use crate::report::Record;
use crate::scalar::{rat, Rational};

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub n: usize,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl SuiteOptions {
    pub fn new(n: usize) -> Self {
        SuiteOptions {
            n,
            samples: 100,
            tol: 1e-8,
            seed: 42,
        }
    }
}

/// Lower bound on the twistor defect a non-twistor probe must show.
pub const PROBE_THRESHOLD: f64 = 0.1;

const KILLING_LAMBDAS: [f64; 9] = [-2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0];

struct Context {
    n: usize,
    rt: CurvatureTensor<f64>,
    points: Vec<SpherePoint>,
    frames: Vec<TangentFrame>,
    tol: f64,
}

impl Context {
    fn weitzenboeck(&self, phi: &MultiVector<f64>) -> MultiVector<f64> {
        weitzenboeck_apply(&self.rt, phi).expect("dims")
    }

    fn axis(&self, a: usize) -> FrameVector<f64> {
        FrameVector::basis(self.n, a)
    }
}

/// `f = x_0 x_1`, a degree-2 spherical harmonic; `df` is not twistor.
pub fn non_twistor_probe(n: usize) -> Result<SphereSection, SphereError> {
    SphereSection::differential(n, &(Poly::var(0) * Poly::var(1)))
}

fn max_over<F: FnMut(&TangentFrame) -> f64>(frames: &[TangentFrame], f: F) -> f64 {
    frames.iter().map(f).fold(0.0, f64::max)
}

/// `D²σ − (n/(n−1))𝓡σ` at a frame.
fn characterization_defect(
    ctx: &Context,
    s: &SphereSection,
    ds: &SphereSection,
    fr: &TangentFrame,
) -> f64 {
    let n = ctx.n as f64;
    let d2 = ds.dirac_in(fr);
    let r = ctx.weitzenboeck(&s.value_in(fr)).scale(&(n / (n - 1.0)));
    (&d2 - &r).norm()
}

/// Largest `|∇_{e_a}Dσ − K_{e_a}σ|`, or at `n = 2` the version multiplied
/// through by `(n−2)/n`, whose right side `(1/(n−1))X·𝓡σ − ½Ric_Xσ` must vanish.
fn second_row_defect(
    ctx: &Context,
    s: &SphereSection,
    ds: &SphereSection,
    fr: &TangentFrame,
) -> f64 {
    let v = s.value_in(fr);
    let n = ctx.n;
    let mut worst = 0.0f64;
    for a in 0..n {
        let x = ctx.axis(a);
        let defect = if n >= 3 {
            let nabla_d = ds
                .covariant_derivative_in(fr, fr.vector(a))
                .expect("tangent");
            &nabla_d - &kx_apply(&ctx.rt, &x, &v).expect("n >= 3")
        } else {
            let rv = ctx.weitzenboeck(&v);
            let first = MultiVector::vector_action(&x, &rv).expect("dims");
            let ric = ricci_apply(&ctx.rt, &x, &v).expect("dims");
            &first.scale(&(1.0 / (n as f64 - 1.0))) - &ric.scale(&0.5)
        };
        worst = worst.max(defect.norm());
    }
    worst
}

fn twistor_defect(s: &SphereSection, fr: &TangentFrame) -> f64 {
    let d = s.dirac_in(fr);
    let inv_n = 1.0 / fr.dim() as f64;
    s.frame_derivatives(fr)
        .iter()
        .enumerate()
        .map(|(a, nabla)| (nabla + &d.left_generator(a).scale(&inv_n)).norm())
        .fold(0.0, f64::max)
}

fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut *rng));
    m.qr().q()
}

/// Runs every pointwise check on the `2n+4` twistor family at seeded sample
/// points and returns one record per check.
pub fn verify_identity_suite(opts: &SuiteOptions) -> Result<Vec<Record>, SphereError> {
    let n = opts.n;
    let points = sample_points(n, opts.samples, opts.seed);
    let frames = points
        .iter()
        .map(tangent_frame)
        .collect::<Result<Vec<_>, _>>()?;
    let ctx = Context {
        n,
        rt: CurvatureTensor::constant_curvature(n, 1.0),
        points,
        frames,
        tol: opts.tol,
    };
    let basis = twistor_family_basis(n)?;
    let diracs: Vec<SphereSection> = basis.iter().map(SphereSection::dirac_section).collect();
    let probe = non_twistor_probe(n)?;
    let probe_dirac = probe.dirac_section();
    let tol = ctx.tol;
    let mut out = Vec::new();

    out.push(Record::exact(
        "family_dimension",
        "σ = c_1 + df_1 + d^*(∗f_2) + ∗c_2",
        basis.len() == 2 * n + 4,
        json!({ "dimension": twistor_family_dimension(n), "expected": 2 * n + 4 }),
    ));

    let twistor = basis
        .iter()
        .map(|s| max_over(&ctx.frames, |fr| twistor_defect(s, fr)))
        .fold(0.0, f64::max);
    out.push(Record::residual(
        "twistor_equation",
        "∇_Xσ + (1/n)X·Dσ = 0",
        twistor,
        tol,
        json!({ "sections": basis.len(), "points": ctx.points.len() }),
    ));

    let characterization = basis
        .iter()
        .zip(&diracs)
        .map(|(s, ds)| max_over(&ctx.frames, |fr| characterization_defect(&ctx, s, ds, fr)))
        .fold(0.0, f64::max);
    out.push(Record::residual(
        "twistor_characterization",
        "D²σ = (n/(n−1))𝓡σ",
        characterization,
        tol,
        json!({ "kappa": 1 }),
    ));

    if n >= 3 {
        let ric_derivative = basis
            .iter()
            .zip(&diracs)
            .map(|(s, ds)| max_over(&ctx.frames, |fr| second_row_defect(&ctx, s, ds, fr)))
            .fold(0.0, f64::max);
        out.push(Record::residual(
            "ricci_derivative",
            "∇_X Dσ = K_X σ",
            ric_derivative,
            tol,
            json!({ "kappa": 1 }),
        ));
    } else {
        out.push(Record::skipped(
            "ricci_derivative",
            "∇_X Dσ = K_X σ",
            "K_X has the factor n/(n−2) and is undefined for n = 2",
        ));
    }

    let pair = basis
        .iter()
        .zip(&diracs)
        .map(|(s, ds)| {
            max_over(&ctx.frames, |fr| {
                twistor_defect(s, fr).max(second_row_defect(&ctx, s, ds, fr))
            })
        })
        .fold(0.0, f64::max);
    out.push(Record::residual(
        "pair_connection",
        "∇^E(σ, Dσ) = 0",
        pair,
        tol,
        json!({
            "second_row": if n >= 3 { "∇_X Dσ − K_X σ" } else { "(1/(n−1))X·𝓡σ − ½Ric_Xσ" }
        }),
    ));

    let probe_twistor = max_over(&ctx.frames, |fr| twistor_defect(&probe, fr));
    let probe_char = max_over(&ctx.frames, |fr| {
        characterization_defect(&ctx, &probe, &probe_dirac, fr)
    });
    let probe_ok = probe_char > PROBE_THRESHOLD && probe_twistor > PROBE_THRESHOLD;
    out.push(Record::new(
        "non_twistor_probe",
        "D²σ ≠ (n/(n−1))𝓡σ for σ = d(x_0 x_1)",
        if probe_ok {
            crate::report::Status::Pass
        } else {
            crate::report::Status::Fail
        },
        Some(probe_char),
        json!({
            "characterization_residual": probe_char,
            "twistor_residual": probe_twistor,
            "threshold": PROBE_THRESHOLD,
        }),
    ));

    let mut all_sections: Vec<&SphereSection> = basis.iter().collect();
    all_sections.push(&probe);

    let bochner = all_sections
        .iter()
        .map(|s| {
            let ds = s.dirac_section();
            let lap = s.connection_laplacian_section();
            max_over(&ctx.frames, |fr| {
                let lhs = ds.dirac_in(fr);
                let rhs = &lap.value_in(fr) + &ctx.weitzenboeck(&s.value_in(fr));
                (&lhs - &rhs).norm()
            })
        })
        .fold(0.0, f64::max);
    out.push(Record::residual(
        "bochner_identity",
        "D² = ∇*∇ + 𝓡",
        bochner,
        tol,
        json!({ "sections": all_sections.len() }),
    ));

    out.push(modified_connection_record(&ctx, &all_sections));
    out.push(dirac_consistency_record(&ctx, &all_sections, opts.seed));
    out.push(metric_compatibility_record(&ctx, &all_sections));
    out.push(leibniz_record(&ctx, &all_sections));
    out.push(eigenfunction_record(&ctx)?);
    out.push(parallel_record(&ctx)?);
    out.push(killing_record(&ctx, &basis)?);

    Ok(out)
}

fn modified_connection_record(ctx: &Context, sections: &[&SphereSection]) -> Record {
    let n = ctx.n;
    // f = ⟨a, x⟩ with fixed rational a
    let a: Vec<Rational> = (0..=n).map(|i| rat(2 * i as i64 - 1, 3)).collect();
    let f = Poly::linear(&a);
    let grad = tangential_field(&constant_field(&a));
    let mut worst_square = 0.0f64;
    let mut worst_expand = 0.0f64;
    for s in sections {
        let omega = s.form();
        let shifted = |w: &super::AmbientPolyForm| -> super::AmbientPolyForm {
            &super::ambient_dirac(w) - &w.scale(&f)
        };
        let square = shifted(&shifted(omega));
        let mod_lap = modified_connection_laplacian(omega, &f);
        let lap = s.connection_laplacian_section();
        let ds = s.dirac_section();
        let grad_action = MultiVector::vector_action(&grad, omega).expect("dims");
        for fr in &ctx.frames {
            let x = fr.point().coords();
            let fv = f.eval(x);
            let v = s.value_in(fr);
            let ml = fr.pullback(&eval_form(&mod_lap, x));
            let lhs = fr.pullback(&eval_form(&square, x));
            let rhs = &(&ml + &ctx.weitzenboeck(&v)) + &v.scale(&((1.0 - n as f64) * fv * fv));
            worst_square = worst_square.max((&lhs - &rhs).norm());
            let expanded = &(&(&lap.value_in(fr) - &fr.pullback(&eval_form(&grad_action, x)))
                - &ds.value_in(fr).scale(&(2.0 * fv)))
                + &v.scale(&(n as f64 * fv * fv));
            worst_expand = worst_expand.max((&ml - &expanded).norm());
        }
    }
    Record::residual(
        "modified_connection",
        "(D − f)² = ∇^{f*}∇^f + 𝓡 + (1−n)f²",
        worst_square.max(worst_expand),
        ctx.tol,
        json!({
            "square_residual": worst_square,
            "expansion_residual": worst_expand,
            "expansion": "∇^{f*}∇^f = ∇*∇ − ∇f· − 2fD + nf²",
        }),
    )
}

/// Frame-route `Dσ` against a rotated frame and against the ambient operator.
fn dirac_consistency_record(ctx: &Context, sections: &[&SphereSection], seed: u64) -> Record {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut worst_frame = 0.0f64;
    let mut worst_ambient = 0.0f64;
    for s in sections {
        let ds = s.dirac_section();
        for fr in &ctx.frames {
            let q = random_rotation(ctx.n, &mut rng);
            let rot = fr.rotated(&q).expect("rotation of an orthonormal frame");
            let a = fr.to_ambient(&s.dirac_in(fr));
            let b = rot.to_ambient(&s.dirac_in(&rot));
            worst_frame = worst_frame.max((&a - &b).norm());
            worst_ambient = worst_ambient.max((&s.dirac_in(fr) - &ds.value_in(fr)).norm());
        }
    }
    Record::residual(
        "dirac_frame_independence",
        "Dσ = Σ e_i·∇_{e_i}σ",
        worst_frame.max(worst_ambient),
        ctx.tol,
        json!({ "rotated_frame": worst_frame, "ambient_operator": worst_ambient }),
    )
}

fn metric_compatibility_record(ctx: &Context, sections: &[&SphereSection]) -> Record {
    let mut worst = 0.0f64;
    for (k, s) in sections.iter().enumerate() {
        let t = sections[(k + 1) % sections.len()];
        let g = poly_inner(&tangential_part(s.form()), &tangential_part(t.form()));
        let grads: Vec<Poly> = (0..=ctx.n).map(|i| g.derivative(i)).collect();
        for fr in &ctx.frames {
            let x = fr.point().coords();
            let sv = s.value_in(fr);
            let tv = t.value_in(fr);
            for a in 0..ctx.n {
                let y = fr.vector(a);
                let lhs: f64 = grads.iter().zip(y).map(|(d, yi)| d.eval(x) * yi).sum();
                let ns = s.covariant_derivative_in(fr, y).expect("tangent");
                let nt = t.covariant_derivative_in(fr, y).expect("tangent");
                let rhs = ns.inner(&tv).expect("dims") + sv.inner(&nt).expect("dims");
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    Record::residual(
        "metric_compatibility",
        "X⟨σ,τ⟩ = ⟨∇_Xσ,τ⟩ + ⟨σ,∇_Xτ⟩",
        worst,
        ctx.tol,
        json!({ "pairs": sections.len() }),
    )
}

fn leibniz_record(ctx: &Context, sections: &[&SphereSection]) -> Record {
    let n = ctx.n;
    let fields: Vec<Vec<Rational>> = vec![
        (0..=n).map(|i| rat(i as i64 + 1, 1)).collect(),
        (0..=n)
            .map(|i| rat(if i % 2 == 0 { 1 } else { -2 }, 3))
            .collect(),
    ];
    let mut worst = 0.0f64;
    for a in &fields {
        let v = tangential_field(&constant_field(a));
        let v_form = SphereSection::new(n, v.to_multivector()).expect("dims");
        for s in sections {
            let product =
                SphereSection::new(n, MultiVector::vector_action(&v, s.form()).expect("dims"))
                    .expect("dims");
            for fr in &ctx.frames {
                let sv = s.value_in(fr);
                let vv = v_form.value_in(fr);
                for b in 0..n {
                    let y = fr.vector(b);
                    let lhs = product.covariant_derivative_in(fr, y).expect("tangent");
                    let nv = v_form.covariant_derivative_in(fr, y).expect("tangent");
                    let ns = s.covariant_derivative_in(fr, y).expect("tangent");
                    let rhs = &nv.geometric_product(&sv).expect("dims")
                        + &vv.geometric_product(&ns).expect("dims");
                    worst = worst.max((&lhs - &rhs).norm());
                }
            }
        }
    }
    Record::residual(
        "module_leibniz",
        "∇(a·σ) = (∇a)·σ + a·∇σ",
        worst,
        ctx.tol,
        json!({ "vector_fields": fields.len() }),
    )
}

/// `Δf = −Σ_a Hess f(e_a, e_a)` for linear `f`, read off `∇(df)`.
fn eigenfunction_record(ctx: &Context) -> Result<Record, SphereError> {
    let n = ctx.n;
    let a: Vec<Rational> = (0..=n).map(|i| rat(3 - i as i64, 2)).collect();
    let f = Poly::linear(&a);
    let df = SphereSection::differential(n, &f)?;
    let mut worst = 0.0f64;
    for fr in &ctx.frames {
        let mut lap = 0.0;
        for b in 0..n {
            let h = df.covariant_derivative_in(fr, fr.vector(b))?;
            lap -= h.coeff(crate::fiber::Blade::vector(b));
        }
        worst = worst.max((lap - n as f64 * f.eval(fr.point().coords())).abs());
    }
    Ok(Record::residual(
        "linear_eigenfunction",
        "Δ f_i = n f_i",
        worst,
        ctx.tol,
        json!({ "method": "trace of the intrinsic hessian" }),
    ))
}

/// Parallel sections `c_1 + c_2 ∗1` are Killing with `λ = 0`, harmonic and
/// annihilated by `𝓡`.
fn parallel_record(ctx: &Context) -> Result<Record, SphereError> {
    let n = ctx.n;
    let zero = vec![rat(0, 1); n + 1];
    let mut worst = 0.0f64;
    for (c1, c2) in [
        (rat(1, 1), rat(0, 1)),
        (rat(0, 1), rat(1, 1)),
        (rat(2, 3), rat(-5, 2)),
    ] {
        let s = super::build_twistor_section(n, &c1, &zero, &zero, &c2)?;
        for (p, fr) in ctx.points.iter().zip(&ctx.frames) {
            worst = worst.max(s.killing_residual(0.0, p)?);
            worst = worst.max(s.dirac_in(fr).norm());
            worst = worst.max(ctx.weitzenboeck(&s.value_in(fr)).norm());
        }
    }
    Ok(Record::residual(
        "parallel_killing",
        "∇σ = 0 ⇒ Dσ = 0, 𝓡σ = 0",
        worst,
        ctx.tol,
        json!({ "sections": 3 }),
    ))
}

/// No member of the family other than parallel sections at `λ = 0` is a
/// Killing section for any `λ` on the grid.
fn killing_record(ctx: &Context, basis: &[SphereSection]) -> Result<Record, SphereError> {
    let n = ctx.n;
    let mut candidates: Vec<(SphereSection, bool)> = Vec::new();
    for (k, s) in basis.iter().enumerate() {
        let parallel = k == 0 || k == basis.len() - 1;
        candidates.push((s.clone(), parallel));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b11);
    for _ in 0..4 {
        let mut draw = || -> Rational {
            let v: f64 = StandardNormal.sample(&mut rng);
            rat((v * 8.0).round() as i64, 8)
        };
        let c1 = draw();
        let a1: Vec<Rational> = (0..=n).map(|_| draw()).collect();
        let a2: Vec<Rational> = (0..=n).map(|_| draw()).collect();
        let c2 = draw();
        let s = super::build_twistor_section(n, &c1, &a1, &a2, &c2)?;
        candidates.push((s, false));
    }
    let probe_points = &ctx.points[..ctx.points.len().min(20)];
    let mut smallest = f64::INFINITY;
    for (s, parallel) in &candidates {
        for &lambda in &KILLING_LAMBDAS {
            if *parallel && lambda == 0.0 {
                continue;
            }
            let mut r = 0.0f64;
            for p in probe_points {
                r = r.max(s.killing_residual(lambda, p)?);
            }
            smallest = smallest.min(r);
        }
    }
    let status = if smallest > ctx.tol {
        crate::report::Status::Pass
    } else {
        crate::report::Status::Fail
    };
    Ok(Record::new(
        "killing_nonexistence",
        "∇_Xσ = λX·σ ⇒ λ = 0",
        status,
        Some(smallest),
        json!({
            "smallest_residual": smallest,
            "lambdas": KILLING_LAMBDAS,
            "sections": candidates.len(),
            "dimension": n,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn suite_passes_on_small_sample() {
        for n in [2, 3] {
            let opts = SuiteOptions {
                samples: 8,
                ..SuiteOptions::new(n)
            };
            for r in verify_identity_suite(&opts).unwrap() {
                assert!(
                    r.passed(),
                    "n = {n}: {} {:?} {}",
                    r.name,
                    r.max_residual,
                    r.details
                );
            }
        }
    }

    #[test]
    fn ricci_derivative_skipped_on_two_sphere() {
        let opts = SuiteOptions {
            samples: 2,
            ..SuiteOptions::new(2)
        };
        let recs = verify_identity_suite(&opts).unwrap();
        let r = recs.iter().find(|r| r.name == "ricci_derivative").unwrap();
        assert_eq!(r.status, Status::Skipped);
    }
}
