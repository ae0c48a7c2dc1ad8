//! Exhaustive fiberwise identity checks for the Clifford algebra and the
//! curvature operators, run over a chosen coefficient field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::curvature::{
    derived_weitzenboeck_dual, derived_weitzenboeck_sum, derived_weitzenboeck_tensor,
    positivity_2x2, r0, ricci_apply, theta, theta_full_sum, trace_weitzenboeck, weitzenboeck_apply,
    weitzenboeck_matrix, BundleCurvature, CliffordBundle, CurvatureTensor, DiracBundle, DualBundle,
    TensorBundle, WhitneySum,
};
use crate::fiber::{Blade, Dual, FrameVector, MultiVector};
use crate::report::{Record, Status};
use crate::scalar::{Field, ToF64};

#[derive(Clone, Debug)]
pub struct FiberSuiteOptions {
    pub max_dim: usize,
    /// Float tolerance; ignored when running exactly.
    pub tol: f64,
    pub seed: u64,
    /// Random curvature tensors per dimension for the trace checks.
    pub random_tensors: usize,
    /// Random probes for the flat-bundle positivity check.
    pub positivity_probes: usize,
    /// Mutation hook: negate the expected sign in the volume-action check.
    pub inject_volume_sign_flip: bool,
}

impl Default for FiberSuiteOptions {
    fn default() -> Self {
        FiberSuiteOptions {
            max_dim: 6,
            tol: 1e-10,
            seed: 42,
            random_tensors: 20,
            positivity_probes: 1000,
            inject_volume_sign_flip: false,
        }
    }
}

/// Dimension caps of the heavier checks.
const CLOSED_FORM_MAX: usize = 6;
const STRUCTURE_MAX: usize = 5;
const DERIVED_MAX: usize = 4;
const AUX_RANK_MAX: usize = 3;
const TRIPLE_MAX: usize = 5;

/// Tracks the worst defect of a check, both as an exact zero test and in f64.
struct Tally {
    exact: bool,
    all_zero: bool,
    worst: f64,
    cases: usize,
}

impl Tally {
    fn new(exact: bool) -> Self {
        Tally {
            exact,
            all_zero: true,
            worst: 0.0,
            cases: 0,
        }
    }

    fn scalar<S: Field + ToF64>(&mut self, lhs: &S, rhs: &S) {
        let d = lhs.clone() - rhs.clone();
        self.cases += 1;
        if !d.is_zero() {
            self.all_zero = false;
        }
        self.worst = self.worst.max(d.to_f64().abs());
    }

    fn element<S: Field + ToF64>(&mut self, lhs: &MultiVector<S>, rhs: &MultiVector<S>) {
        let d = lhs - rhs;
        self.cases += 1;
        if !d.is_zero() {
            self.all_zero = false;
        }
        self.worst = self.worst.max(d.to_f64().max_abs());
    }

    fn flag(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.all_zero = false;
            self.worst = self.worst.max(1.0);
        }
    }

    fn record(&self, name: &str, anchor: &str, tol: f64, mut details: serde_json::Value) -> Record {
        let ok = if self.exact {
            self.all_zero
        } else {
            self.all_zero || self.worst <= tol
        };
        details["cases"] = json!(self.cases);
        Record::new(
            name,
            anchor,
            if ok { Status::Pass } else { Status::Fail },
            Some(self.worst),
            details,
        )
    }
}

fn blades<S: Field>(n: usize) -> Vec<(Blade, MultiVector<S>)> {
    Blade::all(n)
        .map(|b| (b, MultiVector::basis(n, b)))
        .collect()
}

fn random_element<S: Field, R: Rng>(
    n: usize,
    grades: std::ops::RangeInclusive<usize>,
    rng: &mut R,
) -> MultiVector<S> {
    let mut out = MultiVector::zero(n);
    for b in Blade::all(n).filter(|b| grades.contains(&b.grade())) {
        out.add_term(b, S::from_i64(rng.random_range(-3..=3)));
    }
    out
}

fn random_vector<S: Field, R: Rng>(k: usize, rng: &mut R) -> Vec<S> {
    (0..k)
        .map(|_| S::from_i64(rng.random_range(-3..=3)))
        .collect()
}

/// Runs every fiber and curvature identity check up to `opts.max_dim`.
/// `exact` selects zero-tolerance comparison; otherwise `opts.tol` applies.
pub fn run_fiber_suite<S: Field + ToF64>(opts: &FiberSuiteOptions, exact: bool) -> Vec<Record> {
    let top = opts.max_dim;
    let tol = opts.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    let range = |cap: usize| json!({ "dims": [2, top.min(cap)] });

    // generators: e_i e_i = −1, e_i e_j = −e_j e_i
    let mut t = Tally::new(exact);
    for n in 2..=top {
        let one = MultiVector::<S>::one(n);
        for i in 0..n {
            let ei = one.left_generator(i);
            t.element(&(&ei * &ei), &-one.clone());
            for j in (i + 1)..n {
                let ej = one.left_generator(j);
                t.element(&(&ei * &ej), &-(&ej * &ei));
            }
        }
    }
    out.push(t.record(
        "clifford_relations",
        "e_i·e_i = −1, e_i·e_j = −e_j·e_i",
        tol,
        range(top),
    ));

    // v·φ = v∧φ − ι_vφ agrees with the geometric product
    let mut t = Tally::new(exact);
    for n in 2..=top {
        for i in 0..n {
            let v = FrameVector::<S>::basis(n, i);
            let vm = v.to_multivector();
            for (_, phi) in blades::<S>(n) {
                let act = MultiVector::vector_action(&v, &phi).expect("dims");
                t.element(&act, &(&vm * &phi));
            }
        }
    }
    out.push(t.record("vector_action_product", "v·φ = v∧φ − ι_vφ", tol, range(top)));

    // ⟨X·σ,τ⟩ + ⟨σ,X·τ⟩ = 0 over all blade pairs
    let mut t = Tally::new(exact);
    for n in 2..=top {
        let basis = blades::<S>(n);
        for i in 0..n {
            let images: Vec<MultiVector<S>> =
                basis.iter().map(|(_, b)| b.left_generator(i)).collect();
            for (s, xs) in basis.iter().zip(&images) {
                for (tau, xt) in basis.iter().zip(&images) {
                    let lhs = xs.inner(&tau.1).expect("dims") + s.1.inner(xt).expect("dims");
                    t.scalar(&lhs, &S::zero());
                }
            }
        }
    }
    out.push(t.record(
        "skew_adjointness",
        "⟨X·σ, τ⟩ + ⟨σ, X·τ⟩ = 0",
        tol,
        range(top),
    ));

    // |X·σ|² = |X|²|σ|² for random X, blades σ and random σ
    let mut t = Tally::new(exact);
    for n in 2..=top {
        for _ in 0..4 {
            let x = FrameVector::from_coeffs(random_vector::<S, _>(n, &mut rng));
            let mut sigmas: Vec<MultiVector<S>> =
                blades::<S>(n).into_iter().map(|(_, b)| b).collect();
            sigmas.push(random_element(n, 0..=n, &mut rng));
            for s in &sigmas {
                let xs = MultiVector::vector_action(&x, s).expect("dims");
                t.scalar(&xs.norm_sq(), &(x.norm_sq() * s.norm_sq()));
            }
        }
    }
    out.push(t.record("norm_identity", "|X·σ| = |X||σ|", tol, range(top)));

    // γ fixes vectors, reverses products, squares to the identity
    let mut t = Tally::new(exact);
    for n in 2..=top.min(STRUCTURE_MAX) {
        let basis = blades::<S>(n);
        for i in 0..n {
            let e = MultiVector::<S>::one(n).left_generator(i);
            t.element(&e.reversion(), &e);
        }
        for (_, a) in &basis {
            t.element(&a.reversion().reversion(), a);
            for (_, b) in &basis {
                t.element(&(a * b).reversion(), &(&b.reversion() * &a.reversion()));
            }
        }
    }
    out.push(t.record(
        "involution_laws",
        "γ(X) = X, γ(a·b) = γ(b)·γ(a)",
        tol,
        range(STRUCTURE_MAX),
    ));

    // ⟨a·σ,τ⟩ = (−1)^k ⟨σ, γ(a)·τ⟩ for a of grade k
    let mut t = Tally::new(exact);
    for n in 2..=top.min(CLOSED_FORM_MAX) {
        let basis = blades::<S>(n);
        for (ab, a) in &basis {
            let sign = crate::scalar::sign_pow::<S>(ab.grade());
            let ga = a.reversion();
            let left: Vec<MultiVector<S>> = basis.iter().map(|(_, s)| a * s).collect();
            let right: Vec<MultiVector<S>> = basis.iter().map(|(_, s)| &ga * s).collect();
            for (si, (_, s)) in basis.iter().enumerate() {
                for (ti, (_, tau)) in basis.iter().enumerate() {
                    let lhs = left[si].inner(tau).expect("dims");
                    let rhs = sign.clone() * s.inner(&right[ti]).expect("dims");
                    t.scalar(&lhs, &rhs);
                }
            }
        }
    }
    out.push(t.record(
        "adjoint_transfer",
        "⟨a·σ, τ⟩ = (−1)^k⟨σ, γ(a)·τ⟩",
        tol,
        range(CLOSED_FORM_MAX),
    ));

    // X·σ* = −(X·σ)* and (a·σ*)(ξ) = σ*(γ(a)·ξ)
    let mut t = Tally::new(exact);
    for n in 2..=top {
        let basis = blades::<S>(n);
        for i in 0..n {
            let e = FrameVector::<S>::basis(n, i).to_multivector();
            for (_, s) in &basis {
                let lhs = Dual::action(&e, &Dual::of(s)).expect("dims");
                t.element(lhs.element(), &-(&e * s));
            }
        }
        if n <= TRIPLE_MAX {
            for (_, a) in &basis {
                let ga = a.reversion();
                for (_, s) in &basis {
                    let act = Dual::action(a, &Dual::of(s)).expect("dims");
                    for (_, xi) in &basis {
                        let lhs = act.pair(xi).expect("dims");
                        let rhs = Dual::of(s).pair(&(&ga * xi)).expect("dims");
                        t.scalar(&lhs, &rhs);
                    }
                }
            }
        }
    }
    out.push(t.record(
        "dual_action",
        "X·σ* = −(X·σ)*",
        tol,
        json!({ "dims": [2, top], "pairing_dims": [2, top.min(TRIPLE_MAX)] }),
    ));

    // [e_ie_j, e_I]: 0 if {i,j} ⊆ I or {i,j} ⊆ I′, else 2e_ie_je_I
    let mut t = Tally::new(exact);
    for n in 2..=top {
        let one = MultiVector::<S>::one(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let eij = one.left_generator(j).left_generator(i);
                let pair = Blade::from_indices(&[i, j]);
                for (b, eb) in blades::<S>(n) {
                    let c = eij.commutator(&eb).expect("dims");
                    let expected = if pair.is_subset_of(b) || pair.is_subset_of(b.complement(n)) {
                        MultiVector::zero(n)
                    } else {
                        (&eij * &eb).scale(&S::from_i64(2))
                    };
                    t.element(&c, &expected);
                }
            }
        }
    }
    out.push(t.record(
        "commutator_cases",
        "[e_ie_j, e_I] = 2e_ie_je_I or 0",
        tol,
        range(top),
    ));

    // ∗1·φ = (−1)^{p(n−p)+p(p+1)/2} ∗φ
    let mut t = Tally::new(exact);
    for n in 2..=top {
        let vol = MultiVector::<S>::one(n).hodge();
        for (b, phi) in blades::<S>(n) {
            let mut sign = MultiVector::<S>::volume_action_sign(n, b.grade());
            if opts.inject_volume_sign_flip {
                sign = -sign;
            }
            t.element(&(&vol * &phi), &phi.hodge().scale(&sign));
        }
    }
    out.push(t.record(
        "volume_action_sign",
        "∗1·φ = (−1)^{p(n−p)+p(p+1)/2} ∗φ",
        tol,
        json!({ "dims": [2, top], "injected_sign_flip": opts.inject_volume_sign_flip }),
    ));

    // φ∧∗ψ = ⟨φ,ψ⟩∗1 on same-grade pairs and ∗∗ = (−1)^{p(n−p)}
    let mut t = Tally::new(exact);
    for n in 2..=top {
        let vol = MultiVector::<S>::volume(n);
        for p in 0..=n {
            let grade: Vec<MultiVector<S>> = Blade::of_grade(n, p)
                .map(|b| MultiVector::basis(n, b))
                .collect();
            for phi in &grade {
                let hh = phi.hodge().hodge();
                t.element(&hh, &phi.scale(&crate::scalar::sign_pow(p * (n - p))));
                for psi in &grade {
                    let lhs = phi.wedge(&psi.hodge()).expect("dims");
                    let rhs = vol.scale(&phi.inner(psi).expect("dims"));
                    t.element(&lhs, &rhs);
                }
            }
        }
    }
    out.push(t.record("hodge_definition", "φ∧∗ψ = ⟨φ,ψ⟩∗1", tol, range(top)));

    // 𝓡 on p-blades for constant curvature
    let mut t = Tally::new(exact);
    for n in 2..=top.min(CLOSED_FORM_MAX) {
        for kappa in [-1i64, 0, 1, 2] {
            let rt = CurvatureTensor::constant_curvature(n, S::from_i64(kappa));
            for (b, phi) in blades::<S>(n) {
                let p = b.grade() as i64;
                let expected = phi.scale(&S::from_i64(kappa * p * (n as i64 - p)));
                t.element(&weitzenboeck_apply(&rt, &phi).expect("dims"), &expected);
            }
        }
    }
    out.push(t.record(
        "weitzenboeck_closed_form",
        "𝓡_p φ = κ p(n−p) φ",
        tol,
        json!({ "dims": [2, top.min(CLOSED_FORM_MAX)], "kappas": [-1, 0, 1, 2] }),
    ));

    // traces, symmetry, Hodge commutation and the 1-form block on random tensors
    let mut traces = Tally::new(exact);
    let mut symmetric = Tally::new(exact);
    let mut hodge = Tally::new(exact);
    let mut ricci = Tally::new(exact);
    for n in 2..=top.min(STRUCTURE_MAX) {
        for _ in 0..opts.random_tensors {
            let rt: CurvatureTensor<S> = CurvatureTensor::random(n, &mut rng);
            let s = rt.scalar_curvature();
            let mut total = S::zero();
            for p in 0..=n {
                let tr = trace_weitzenboeck(&rt, p).expect("grade in range");
                total = total + tr.clone();
                let expected = if p == 0 || p == n {
                    S::zero()
                } else {
                    S::from_i64(binomial(n - 2, p - 1)) * s.clone()
                };
                traces.scalar(&tr, &expected);
            }
            let two_pow = S::from_i64(1 << (n - 2));
            traces.scalar(&total, &(two_pow * s.clone()));

            let w = weitzenboeck_matrix(&rt);
            symmetric.flag(w.is_symmetric() && w.is_grade_diagonal());

            for (_, phi) in blades::<S>(n) {
                let a = weitzenboeck_apply(&rt, &phi).expect("dims").hodge();
                let b = weitzenboeck_apply(&rt, &phi.hodge()).expect("dims");
                hodge.element(&a, &b);
            }

            let ric = rt.ricci_matrix();
            let block = w.grade_block(1);
            for r in 0..n {
                for c in 0..n {
                    ricci.scalar(&block[r][c], &ric[r][c]);
                }
            }
        }
    }
    let sdims =
        json!({ "dims": [2, top.min(STRUCTURE_MAX)], "tensors_per_dim": opts.random_tensors });
    out.push(traces.record(
        "trace_formulas",
        "tr 𝓡_p = {n-2\\choose p-1}s, tr 𝓡 = 2^{n-2}s",
        tol,
        sdims.clone(),
    ));
    out.push(symmetric.record(
        "weitzenboeck_symmetric",
        "⟨𝓡σ, τ⟩ = ⟨σ, 𝓡τ⟩",
        tol,
        sdims.clone(),
    ));
    out.push(hodge.record("hodge_commutation", "∗𝓡 = 𝓡∗", tol, sdims.clone()));
    out.push(ricci.record("ricci_one_forms", "𝓡φ = Ric(φ)", tol, sdims));

    // Ric_X on 1-forms: ⟨Ric_X e_k⟩ has scalar part −2 Ric(X, e_k)
    let mut t = Tally::new(exact);
    for n in 2..=top.min(STRUCTURE_MAX) {
        let rt: CurvatureTensor<S> = CurvatureTensor::random(n, &mut rng);
        let ric = rt.ricci_matrix();
        for a in 0..n {
            let x = FrameVector::basis(n, a);
            for k in 0..n {
                let v =
                    ricci_apply(&rt, &x, &MultiVector::basis(n, Blade::vector(k))).expect("dims");
                t.scalar(
                    &v.coeff(Blade::SCALAR),
                    &(S::from_i64(-2) * ric[a][k].clone()),
                );
            }
        }
    }
    out.push(t.record(
        "ricci_operator_trace",
        "Ric_X σ = 2Σ e_i·R(e_i,X)σ",
        tol,
        range(STRUCTURE_MAX),
    ));

    out.extend(derived_records::<S>(opts, exact, &mut rng));
    out.push(r0_record(opts));
    out
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

fn derived_records<S: Field + ToF64>(
    opts: &FiberSuiteOptions,
    exact: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<Record> {
    let top = opts.max_dim.min(DERIVED_MAX);
    let tol = opts.tol;
    let mut whitney = Tally::new(exact);
    let mut dual = Tally::new(exact);
    let mut tensor = Tally::new(exact);
    let mut theta_zero = Tally::new(exact);
    let mut theta_orders = Tally::new(exact);
    for n in 2..=top {
        let rt: CurvatureTensor<S> = CurvatureTensor::random(n, rng);
        let base = CliffordBundle { tensor: rt.clone() };
        let sum = WhitneySum(base.clone(), base.clone());
        let dual_bundle = DualBundle { base: base.clone() };
        let basis = blades::<S>(n);
        for (_, b) in &basis {
            let zero = MultiVector::zero(n);
            for x in [(b.clone(), zero.clone()), (zero.clone(), b.clone())] {
                let by_def = sum.weitzenboeck(&x);
                let closed = derived_weitzenboeck_sum(&rt, &x).expect("dims");
                whitney.element(&by_def.0, &closed.0);
                whitney.element(&by_def.1, &closed.1);
            }
            let d = Dual::of(b);
            dual.element(
                dual_bundle.weitzenboeck(&d).element(),
                derived_weitzenboeck_dual(&rt, &d).expect("dims").element(),
            );
        }
        for m in 1..=AUX_RANK_MAX {
            let aux: BundleCurvature<S> = BundleCurvature::random(n, m, rng);
            let tb = TensorBundle::new(base.clone(), aux.clone()).expect("dims");
            for (_, b) in &basis {
                for a in 0..m {
                    let mut xi = vec![S::zero(); m];
                    xi[a] = S::one();
                    let eta = tb.simple(b, &xi);
                    let by_def = tb.weitzenboeck(&eta);
                    let closed = derived_weitzenboeck_tensor(&rt, &aux, &eta).expect("dims");
                    for (l, r) in by_def.iter().zip(&closed) {
                        tensor.element(l, r);
                    }
                }
            }
            for _ in 0..20 {
                let sigma = random_element::<S, _>(n, 0..=n, rng);
                let xi = random_vector::<S, _>(m, rng);
                let tau = random_element::<S, _>(n, 0..=n, rng);
                let zeta = random_vector::<S, _>(m, rng);
                let th = theta(&aux, &sigma, &xi, &sigma, &xi).expect("dims");
                theta_zero.scalar(&th, &S::zero());
                let a = theta(&aux, &sigma, &xi, &tau, &zeta).expect("dims");
                let b = theta_full_sum(&aux, &sigma, &xi, &tau, &zeta).expect("dims");
                theta_orders.scalar(&a, &b);
            }
        }
    }
    let ddims = json!({ "dims": [2, top], "aux_rank": [1, AUX_RANK_MAX] });

    // flat auxiliary bundle, κ = 1, grades 1..n−1
    let mut positivity = Tally::new(exact);
    let mut worst_det = f64::INFINITY;
    let pos_top = opts.max_dim.min(STRUCTURE_MAX).max(3);
    for k in 0..opts.positivity_probes {
        let n = 3 + k % (pos_top - 2);
        let m = 1 + k % AUX_RANK_MAX;
        let rt = CurvatureTensor::constant_curvature(n, S::one());
        let aux = BundleCurvature::flat(n, m);
        let sigma = random_element::<S, _>(n, 1..=n - 1, rng);
        let tau = random_element::<S, _>(n, 1..=n - 1, rng);
        let xi = random_vector::<S, _>(m, rng);
        let zeta = random_vector::<S, _>(m, rng);
        let det = positivity_2x2(&rt, &aux, &sigma, &xi, &tau, &zeta).expect("dims");
        worst_det = worst_det.min(det.to_f64());
        positivity.flag(det.to_f64() >= 0.0 || (!exact && det.to_f64() >= -tol));
    }

    vec![
        whitney.record("derived_whitney", "𝓡(ξ,ζ) = (𝓡ξ, 𝓡ζ)", tol, ddims.clone()),
        dual.record("derived_dual", "𝓡(σ*) = (𝓡σ)*", tol, ddims.clone()),
        tensor.record(
            "derived_tensor",
            "𝓡(σ⊗ξ) = 𝓡σ⊗ξ + Σ_{i<j} e_ie_j·σ⊗R(e_i,e_j)ξ",
            tol,
            ddims.clone(),
        ),
        theta_zero.record(
            "theta_vanishing",
            "Θ(σ⊗ξ, σ⊗ξ) = 0",
            tol,
            json!({ "dims": [2, top], "arguments": "simple tensors σ⊗ξ" }),
        ),
        theta_orders.record(
            "theta_summation_order",
            "Θ = Σ_{i<j}⟨e_ie_j·σ,τ⟩⟨R(e_i,e_j)ξ,ζ⟩ = ½Σ_{i≠j}",
            tol,
            ddims,
        ),
        positivity.record(
            "flat_positivity",
            "⟨𝓡σ,σ⟩⟨𝓡τ,τ⟩|ξ|²|ζ|² − (⟨𝓡σ,τ⟩⟨ξ,ζ⟩ + Θ)² ≥ 0",
            tol,
            json!({
                "probes": opts.positivity_probes,
                "kappa": 1,
                "grades": "1..n−1",
                "min_determinant": worst_det,
            }),
        ),
    ]
}

/// `R_0` for constant curvature is `min_p κ p(n−p)`.
fn r0_record(opts: &FiberSuiteOptions) -> Record {
    let mut worst = 0.0f64;
    for n in 2..=opts.max_dim.min(STRUCTURE_MAX) {
        for kappa in [-1.0f64, 0.0, 1.0, 2.0] {
            let rt = CurvatureTensor::constant_curvature(n, kappa);
            let expected = (0..=n)
                .map(|p| kappa * (p * (n - p)) as f64)
                .fold(f64::INFINITY, f64::min);
            worst = worst.max((r0(&rt) - expected).abs());
        }
    }
    Record::residual(
        "r0_constant_curvature",
        "R_0 = min_{|σ|=1}⟨𝓡σ,σ⟩",
        worst,
        1e-10,
        json!({ "dims": [2, opts.max_dim.min(STRUCTURE_MAX)] }),
    )
}
