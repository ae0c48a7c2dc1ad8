//! Acceptance criteria, one pass/fail line each. Runs as a plain binary so
//! the lines are always printed; exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use dirac_lab::curvature::{r0, weitzenboeck_apply, weitzenboeck_matrix, CurvatureTensor};
use dirac_lab::dec::{
    build_dec, flat_torus, icosphere, inequality_checks, spectrum, SpectrumResult, HARMONIC_TOL,
};
use dirac_lab::fiber::{Blade, FrameVector, MultiVector};
use dirac_lab::fiber_suite::{run_fiber_suite, FiberSuiteOptions};
use dirac_lab::report::{Record, Status};
use dirac_lab::scalar::{rat, Rational, Scalar};
use dirac_lab::sphere::{
    eigenvalue_gap_table, verify_identity_suite, GapClass, GapRow, SuiteOptions, PROBE_THRESHOLD,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn find<'a>(records: &'a [Record], name: &str) -> Result<&'a Record, String> {
    records
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| format!("record {name} missing"))
}

/// Passed with an exact zero residual.
fn exact_pass(records: &[Record], names: &[&str]) -> Result<(), String> {
    for name in names {
        let r = find(records, name)?;
        ensure(r.status == Status::Pass, || {
            format!("{name}: {}", r.details)
        })?;
        ensure(r.max_residual.unwrap_or(0.0) == 0.0, || {
            format!("{name}: residual {:?} is not exactly zero", r.max_residual)
        })?;
    }
    Ok(())
}

/// Product of basis blades by reordering the generator word: adjacent
/// swaps flip the sign and each `e_i e_i` contributes −1.
fn oracle_product(a: Blade, b: Blade) -> (i64, Blade) {
    let mut word: Vec<usize> = a.indices().chain(b.indices()).collect();
    let mut sign = 1;
    for pass in 0..word.len() {
        for k in 0..word.len().saturating_sub(pass + 1) {
            if word[k] > word[k + 1] {
                word.swap(k, k + 1);
                sign = -sign;
            }
        }
    }
    let mut out = Vec::new();
    let mut k = 0;
    while k < word.len() {
        if k + 1 < word.len() && word[k] == word[k + 1] {
            sign = -sign;
            k += 2;
        } else {
            out.push(word[k]);
            k += 1;
        }
    }
    (sign, Blade::from_indices(&out))
}

fn parity_of(v: &[usize]) -> i64 {
    let inversions = (0..v.len())
        .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| v[i] > v[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn q(v: i64) -> Rational {
    rat(v, 1)
}

fn blade_mv(n: usize, b: Blade, s: i64) -> MultiVector<Rational> {
    MultiVector::from_blade(n, b, q(s))
}

/// Clifford relations and the volume action checked against sign oracles
/// that never call the library product or Hodge star.
fn fiber_oracles(max_dim: usize) -> Result<usize, String> {
    let mut cases = 0;
    for n in 2..=max_dim {
        for a in Blade::all(n) {
            for b in Blade::all(n) {
                let (s, c) = oracle_product(a, b);
                let lib = blade_mv(n, a, 1)
                    .geometric_product(&blade_mv(n, b, 1))
                    .unwrap();
                ensure(lib == blade_mv(n, c, s), || format!("n={n}: e{a:?}·e{b:?}"))?;
                cases += 1;
            }
        }
        let vol = MultiVector::<Rational>::volume(n);
        for phi in Blade::all(n) {
            let p = phi.grade() as i64;
            let comp = phi.complement(n);
            let word: Vec<usize> = phi.indices().chain(comp.indices()).collect();
            // ∗e_I = ε e_{I^c} with e_I ∧ e_{I^c} = ε vol
            let star = blade_mv(n, comp, parity_of(&word));
            let exponent = p * (n as i64 - p) + p * (p + 1) / 2;
            let expected = if exponent % 2 == 0 {
                star.clone()
            } else {
                -&star
            };
            let lhs = vol.geometric_product(&blade_mv(n, phi, 1)).unwrap();
            ensure(lhs == expected, || format!("n={n}: ∗1·e{phi:?}"))?;
            ensure(blade_mv(n, phi, 1).hodge() == star, || {
                format!("n={n}: ∗e{phi:?}")
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// `𝓡φ = Σ_{i<j} e_i·e_j·R(e_i,e_j)φ` with `R(e_i,e_j)` extended to forms
/// as a derivation of the wedge product.
fn oracle_weitzenboeck(rt: &CurvatureTensor<Rational>, phi: Blade) -> MultiVector<Rational> {
    let n = rt.dim();
    let mut total = MultiVector::zero(n);
    let idx: Vec<usize> = phi.indices().collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut deriv = MultiVector::zero(n);
            for slot in 0..idx.len() {
                let mut term = MultiVector::one(n);
                for (m, &k) in idx.iter().enumerate() {
                    let factor = if m == slot {
                        rt.apply_vector(i, j, &FrameVector::basis(n, k))
                            .to_multivector()
                    } else {
                        blade_mv(n, Blade::vector(k), 1)
                    };
                    term = term.wedge(&factor).unwrap();
                }
                deriv = &deriv + &term;
            }
            let eij = blade_mv(n, Blade::from_indices(&[i, j]), 1);
            total = &total + &eij.geometric_product(&deriv).unwrap();
        }
    }
    total
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

struct Shared {
    fiber: Vec<Record>,
    fiber_time: Duration,
    sphere_spectra: Vec<SpectrumResult>,
    torus_spectra: Vec<SpectrumResult>,
}

fn criterion_1(s: &Shared) -> Outcome {
    exact_pass(
        &s.fiber,
        &[
            "clifford_relations",
            "skew_adjointness",
            "norm_identity",
            "involution_laws",
            "dual_action",
            "commutator_cases",
            "volume_action_sign",
            "hodge_definition",
        ],
    )?;
    let cases = fiber_oracles(6)?;
    ensure(s.fiber_time < Duration::from_secs(30), || {
        format!("suite took {:?}", s.fiber_time)
    })?;
    Ok(format!(
        "8 exact records, {cases} oracle cases, suite {:.2?}",
        s.fiber_time
    ))
}

fn criterion_2(s: &Shared) -> Outcome {
    exact_pass(&s.fiber, &["weitzenboeck_closed_form"])?;
    let start = Instant::now();
    let mut blades = 0;
    for n in 2..=6 {
        for kappa in [-1, 0, 1, 2] {
            let rt = CurvatureTensor::constant_curvature(n, q(kappa));
            for phi in Blade::all(n) {
                let p = phi.grade() as i64;
                let want = blade_mv(n, phi, kappa * p * (n as i64 - p));
                let oracle = oracle_weitzenboeck(&rt, phi);
                let lib = weitzenboeck_apply(&rt, &blade_mv(n, phi, 1)).unwrap();
                ensure(oracle == want, || {
                    format!("oracle n={n} κ={kappa} e{phi:?}: {oracle:?}")
                })?;
                ensure(lib == want, || format!("library n={n} κ={kappa} e{phi:?}"))?;
                blades += 1;
            }
        }
    }
    let elapsed = start.elapsed() + s.fiber_time;
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{blades} blade/κ cases equal κp(n−p)φ, {elapsed:.2?}"
    ))
}

fn criterion_3(s: &Shared) -> Outcome {
    exact_pass(&s.fiber, &["trace_formulas"])?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tensors = 0;
    for n in 2..=5usize {
        for _ in 0..20 {
            let rt = CurvatureTensor::<Rational>::random(n, &mut rng);
            let sc = rt.scalar_curvature();
            let mut total = Rational::from_i64(0);
            for p in 0..=n {
                let mut tr = Rational::from_i64(0);
                for phi in Blade::of_grade(n, p) {
                    let img = weitzenboeck_apply(&rt, &blade_mv(n, phi, 1)).unwrap();
                    tr = tr + img.coeff(phi);
                }
                let want = sc.clone() * q(binomial(n as i64 - 2, p as i64 - 1));
                ensure(tr == want, || format!("n={n} p={p}: trace {tr} vs {want}"))?;
                total = total + tr;
            }
            let want = sc * q(1 << (n - 2));
            ensure(total == want, || format!("n={n}: total {total} vs {want}"))?;
            tensors += 1;
        }
    }
    let sphere = CurvatureTensor::constant_curvature(4, q(1)).scalar_curvature();
    ensure(sphere == q(12), || format!("s(S⁴) = {sphere}"))?;
    Ok(format!(
        "{tensors} random tensors, grade and total traces exact"
    ))
}

fn criterion_4(s: &Shared) -> Outcome {
    exact_pass(
        &s.fiber,
        &[
            "weitzenboeck_symmetric",
            "hodge_commutation",
            "ricci_one_forms",
        ],
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=5usize {
        for _ in 0..3 {
            let rt = CurvatureTensor::<Rational>::random(n, &mut rng);
            let w = weitzenboeck_matrix(&rt);
            ensure(w.is_symmetric(), || format!("n={n}: not symmetric"))?;
            for phi in Blade::all(n) {
                let x = blade_mv(n, phi, 1);
                let a = weitzenboeck_apply(&rt, &x.hodge()).unwrap();
                let b = weitzenboeck_apply(&rt, &x).unwrap().hodge();
                ensure(a == b, || format!("n={n}: ∗ fails to commute on e{phi:?}"))?;
            }
            for a in 0..n {
                for b in 0..n {
                    let ric: Rational = (0..n).fold(q(0), |acc, k| acc + rt.get(a, k, k, b));
                    let entry = w.entry(Blade::vector(a), Blade::vector(b));
                    ensure(entry == ric, || {
                        format!("n={n}: grade-1 ({a},{b}) {entry} vs {ric}")
                    })?;
                }
            }
        }
    }
    Ok("symmetric, ∗-commuting, grade-1 block = Ric for n ≤ 5".into())
}

fn criterion_5(s: &Shared) -> Outcome {
    exact_pass(
        &s.fiber,
        &[
            "derived_whitney",
            "derived_dual",
            "derived_tensor",
            "theta_vanishing",
        ],
    )?;
    let pos = find(&s.fiber, "flat_positivity")?;
    ensure(pos.status == Status::Pass, || {
        format!("flat_positivity: {}", pos.details)
    })?;
    let probes = pos.details["probes"].as_u64().unwrap_or(0);
    ensure(probes >= 1000, || {
        format!("only {probes} positivity probes")
    })?;
    Ok(format!(
        "derived identities exact, {probes} positivity probes ≥ 0"
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut probe_min = f64::INFINITY;
    for n in [2, 3] {
        let opts = SuiteOptions {
            n,
            samples: 100,
            tol: 1e-8,
            seed: 42,
        };
        let recs = verify_identity_suite(&opts).map_err(|e| e.to_string())?;
        for r in &recs {
            ensure(r.passed(), || format!("n={n} {}: {}", r.name, r.details))?;
        }
        let dim = find(&recs, "family_dimension")?;
        ensure(dim.details["dimension"] == 2 * n + 4, || {
            format!("n={n}: {}", dim.details)
        })?;
        let mut required = vec![
            "twistor_equation",
            "twistor_characterization",
            "pair_connection",
        ];
        if n == 3 {
            required.push("ricci_derivative");
        }
        for name in required {
            let r = find(&recs, name)?;
            let res = r
                .max_residual
                .ok_or_else(|| format!("{name} has no residual"))?;
            ensure(r.status == Status::Pass && res < 1e-8, || {
                format!("n={n} {name}: {res:e}")
            })?;
            worst = worst.max(res);
        }
        let probe = find(&recs, "non_twistor_probe")?;
        let res = probe.max_residual.unwrap_or(0.0);
        ensure(res > PROBE_THRESHOLD, || format!("probe residual {res}"))?;
        probe_min = probe_min.min(res);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "worst residual {worst:.1e}, probe {probe_min:.2}, {elapsed:.2?}"
    ))
}

fn criterion_7() -> Outcome {
    let mut strict = 0;
    for n in 2..=50usize {
        let table = eigenvalue_gap_table(n);
        ensure(
            table.len() == n + 1 && table.iter().all(|r| r.holds),
            || format!("n={n}"),
        )?;
        let ni = n as i128;
        for row in table.iter().filter(|r| r.p >= 2 && r.p + 2 <= n) {
            ensure(row.class == GapClass::Strict, || {
                format!("n={n} p={}: {:?}", row.p, row.class)
            })?;
            let p = row.p as i128;
            let calabi = (p * (ni - p + 1)).min((p + 1) * (ni - p));
            // n p(n−p) / (n−1) < calabi, cross-multiplied
            ensure(ni * p * (ni - p) < calabi * (ni - 1), || {
                format!("n={n} p={p}")
            })?;
            strict += 1;
        }
        ensure(strict_rows(&table) == n.saturating_sub(3), || {
            format!("n={n}: strict row count")
        })?;
    }
    Ok(format!("{strict} rows strict for 2 ≤ p ≤ n−2, n ≤ 50"))
}

fn strict_rows(table: &[GapRow]) -> usize {
    table.iter().filter(|r| r.class == GapClass::Strict).count()
}

fn criterion_8(s: &Shared) -> Outcome {
    let [s0, s1, s2] = [
        &s.sphere_spectra[0],
        &s.sphere_spectra[1],
        &s.sphere_spectra[2],
    ];
    let first = s0
        .first_positive(HARMONIC_TOL)
        .ok_or("no positive Δ₀ eigenvalue")?;
    ensure((first - 2.0).abs() / 2.0 < 0.02, || {
        format!("Δ₀ first positive {first}")
    })?;
    let m0 = s0.multiplicity_near(2.0, 0.1).map_err(|e| e.to_string())?;
    ensure(m0 == 3, || format!("Δ₀ multiplicity {m0}"))?;
    let m1 = s1
        .multiplicity_near(2.0, 0.05 * 2.0)
        .map_err(|e| e.to_string())?;
    ensure(m1 == 6, || format!("Δ₁ multiplicity {m1}"))?;
    let betti = [s0, s1, s2].map(|s| s.betti(HARMONIC_TOL));
    ensure(betti == [1, 0, 1], || format!("betti {betti:?}"))?;
    let count = betti[0] + m1 + betti[2];
    ensure(count == 2 * 4, || format!("dimension count {count}"))?;
    Ok(format!(
        "λ₁ = {first:.6}, mult 3, Δ₁ mult 6, betti {betti:?}, 1+6+1 = {count}"
    ))
}

fn criterion_9(s: &Shared) -> Outcome {
    let betti = [0, 1, 2].map(|p| s.torus_spectra[p].betti(HARMONIC_TOL));
    ensure(betti == [1, 2, 1], || format!("torus(32) betti {betti:?}"))?;
    let dec = build_dec(&flat_torus(48).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let sp = spectrum(&dec, 0, 6, 1e-8, 42).map_err(|e| e.to_string())?;
    let first = sp
        .first_positive(HARMONIC_TOL)
        .ok_or("no positive eigenvalue")?;
    let target = 4.0 * PI * PI;
    let rel = (first - target).abs() / target;
    ensure(rel < 0.02, || {
        format!("torus(48) λ₁ = {first}, rel err {rel}")
    })?;
    Ok(format!(
        "betti {betti:?} (4 parallel sections), torus(48) λ₁ = {first:.3} ({:.2}% off 4π²)",
        100.0 * rel
    ))
}

fn criterion_10(s: &Shared) -> Outcome {
    let tol = 1e-8;
    let sphere_r0 = r0(&CurvatureTensor::constant_curvature(2, 1.0));
    let torus_r0 = r0(&CurvatureTensor::constant_curvature(2, 0.0));
    let mut recs = inequality_checks(&s.sphere_spectra, 2, sphere_r0, Some(1.0), tol);
    recs.extend(inequality_checks(&s.torus_spectra, 2, torus_r0, None, tol));
    for r in &recs {
        ensure(r.passed(), || format!("{}: {}", r.name, r.details))?;
    }
    let mut count = 0;
    for (spectra, r0v) in [(&s.sphere_spectra, sphere_r0), (&s.torus_spectra, torus_r0)] {
        for m2 in spectra.iter().flat_map(|sp| sp.eigenvalues.iter().copied()) {
            ensure(m2 >= 2.0 * r0v - tol, || format!("μ² = {m2} below bound"))?;
            for t in [0.1, 1.0, 10.0] {
                ensure(m2 <= t * m2 * m2 + 1.0 / t, || {
                    format!("μ² = {m2}, t = {t}")
                })?;
            }
            count += 1;
        }
    }
    let positive_min = s
        .sphere_spectra
        .iter()
        .flat_map(|sp| sp.positive(HARMONIC_TOL))
        .fold(f64::INFINITY, f64::min);
    ensure(positive_min >= 1.0 - tol, || {
        format!("sphere min positive μ² {positive_min}")
    })?;
    Ok(format!(
        "{count} eigenvalues, R₀ = {sphere_r0}, min positive μ² on S² = {positive_min:.4}"
    ))
}

fn main() {
    let opts = FiberSuiteOptions {
        max_dim: 6,
        ..Default::default()
    };
    let start = Instant::now();
    let fiber = run_fiber_suite::<Rational>(&opts, true);
    let fiber_time = start.elapsed();

    let spectral_start = Instant::now();
    let ico = build_dec(&icosphere(4).expect("icosphere")).expect("dec");
    let sphere_spectra: Vec<SpectrumResult> = [(0, 10), (1, 12), (2, 6)]
        .iter()
        .map(|&(p, k)| spectrum(&ico, p, k, 1e-8, 42).expect("sphere spectrum"))
        .collect();
    let sphere_time = spectral_start.elapsed();
    let torus = build_dec(&flat_torus(32).expect("torus")).expect("dec");
    let torus_spectra: Vec<SpectrumResult> = [(0, 6), (1, 10), (2, 6)]
        .iter()
        .map(|&(p, k)| spectrum(&torus, p, k, 1e-8, 42).expect("torus spectrum"))
        .collect();
    let shared = Shared {
        fiber,
        fiber_time,
        sphere_spectra,
        torus_spectra,
    };

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (
            "fiber identity suite, n ≤ 6, exact",
            Box::new(|| criterion_1(&shared)),
        ),
        (
            "Weitzenböck closed form κp(n−p)",
            Box::new(|| criterion_2(&shared)),
        ),
        (
            "trace formulas C(n−2,p−1)s and 2^{n-2}s",
            Box::new(|| criterion_3(&shared)),
        ),
        (
            "Weitzenböck symmetry, Hodge commutation, Ricci block",
            Box::new(|| criterion_4(&shared)),
        ),
        (
            "derived-bundle formulas, Θ, flat positivity",
            Box::new(|| criterion_5(&shared)),
        ),
        ("sphere twistor suite n ∈ {2, 3}", Box::new(criterion_6)),
        ("eigenvalue gap table n ≤ 50", Box::new(criterion_7)),
        (
            "DEC sphere spectrum icosphere(4)",
            Box::new(|| {
                let out = criterion_8(&shared)?;
                ensure(sphere_time < Duration::from_secs(120), || {
                    format!("took {sphere_time:?}")
                })?;
                Ok(format!("{out}, {sphere_time:.2?}"))
            }),
        ),
        ("DEC flat torus", Box::new(|| criterion_9(&shared))),
        ("spectral inequalities", Box::new(|| criterion_10(&shared))),
    ];

    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS  [{:2}] {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  [{:2}] {title}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
