use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use dirac_lab::curvature::{r0, CurvatureTensor};
use dirac_lab::dec::{
    build_dec, flat_torus, icosphere, inequality_checks, load_off, spectrum, DecError,
    SimplicialSurface, SpectrumResult, HARMONIC_TOL,
};
use dirac_lab::fiber_suite::{run_fiber_suite, FiberSuiteOptions};
use dirac_lab::linalg::LanczosError;
use dirac_lab::report::{Record, Report, Status};
use dirac_lab::scalar::Rational;
use dirac_lab::sphere::{eigenvalue_gap_table, verify_identity_suite, SphereError, SuiteOptions};
use serde_json::json;

use crate::config::{MeshSpec, RunConfig};
use crate::CliError;

/// A finished run: the report, plus CSV text for commands that produce it.
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
    /// Set when the solver failed; the report then carries a failed `solver` record.
    pub solver_failed: bool,
}

fn report(cfg: &RunConfig, records: Vec<Record>) -> Report {
    let config = serde_json::to_value(cfg).expect("config is serializable");
    Report::new(&cfg.command, config, records)
}

pub fn verify_fiber(cfg: &RunConfig) -> Outcome {
    let opts = FiberSuiteOptions {
        max_dim: cfg.max_dim.expect("validated"),
        tol: cfg.tol,
        seed: cfg.seed,
        inject_volume_sign_flip: cfg.inject_sign_flip,
        ..Default::default()
    };
    let records = if cfg.exact == Some(true) {
        run_fiber_suite::<Rational>(&opts, true)
    } else {
        run_fiber_suite::<f64>(&opts, false)
    };
    Outcome {
        report: report(cfg, records),
        csv: None,
        solver_failed: false,
    }
}

pub fn twistor(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = cfg.n.expect("validated");
    let opts = SuiteOptions {
        n,
        samples: cfg.samples.expect("validated"),
        tol: cfg.tol,
        seed: cfg.seed,
    };
    let mut records = verify_identity_suite(&opts).map_err(|e| match e {
        SphereError::DimensionOutOfRange(_) => CliError::Usage(e.to_string()),
        other => CliError::Check(other.to_string()),
    })?;
    if cfg.eqtric {
        if let Some(r) = records.iter_mut().find(|r| r.name == "ricci_derivative") {
            if r.status == Status::Skipped {
                r.details = json!({
                    "reason": "unsupported: K_X has the factor n/(n−2) and is undefined for n = 2",
                    "forced": true,
                });
            } else if let Some(obj) = r.details.as_object_mut() {
                obj.insert("forced".into(), json!(true));
            }
        }
    }
    let rows = eigenvalue_gap_table(n);
    records.push(Record::exact(
        "gap_table",
        "(n/(n−1))p(n−p) < min{p(n−p+1), (p+1)(n−p)}",
        rows.iter().all(|r| r.holds),
        json!({ "rows": rows }),
    ));
    Ok(Outcome {
        report: report(cfg, records),
        csv: None,
        solver_failed: false,
    })
}

/// Connected components of the vertex–edge graph.
fn components(mesh: &SimplicialSurface) -> usize {
    let mut parent: Vec<usize> = (0..mesh.num_vertices()).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for &[a, b] in mesh.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    (0..parent.len())
        .map(|v| find(&mut parent, v))
        .collect::<BTreeSet<_>>()
        .len()
}

/// Betti numbers of a closed orientable surface from its combinatorics.
fn expected_betti(mesh: &SimplicialSurface) -> [usize; 3] {
    let c = components(mesh);
    let b1 = 2 * c as i64 - mesh.euler_characteristic();
    [c, b1.max(0) as usize, c]
}

struct KnownSpectrum {
    target: f64,
    anchor: &'static str,
    multiplicity: [usize; 3],
    kappa: f64,
}

fn known_spectrum(spec: &MeshSpec) -> Option<KnownSpectrum> {
    match spec {
        MeshSpec::Icosphere(_) => Some(KnownSpectrum {
            target: 2.0,
            anchor: "Δ f_i = n f_i",
            multiplicity: [3, 6, 3],
            kappa: 1.0,
        }),
        MeshSpec::Torus(_) => Some(KnownSpectrum {
            target: 4.0 * PI * PI,
            anchor: "Δ e^{2πi(kx+ly)} = 4π²(k²+l²) e^{2πi(kx+ly)}",
            multiplicity: [4, 8, 4],
            kappa: 0.0,
        }),
        MeshSpec::File(_) => None,
    }
}

fn load_mesh(spec: &MeshSpec) -> Result<SimplicialSurface, CliError> {
    let res = match spec {
        MeshSpec::Icosphere(k) => icosphere(*k),
        MeshSpec::Torus(m) => flat_torus(*m),
        MeshSpec::File(p) => load_off(p),
    };
    res.map_err(|e| {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    })
}

pub fn spectrum_csv(spec: &SpectrumResult) -> String {
    let mut s = String::from("degree,index,eigenvalue,residual\n");
    for (i, (l, r)) in spec.eigenvalues.iter().zip(&spec.residuals).enumerate() {
        writeln!(s, "{},{i},{l:e},{r:e}", spec.degree).unwrap();
    }
    s
}

pub fn mesh_spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = MeshSpec::parse(cfg.mesh.as_deref().expect("validated"))?;
    let p = cfg.degree.expect("validated");
    let num = cfg.num.expect("validated");
    let solver_tol = cfg.solver_tol.expect("validated");
    let spectral_tol = cfg.spectral_tol.expect("validated");

    let mesh = load_mesh(&spec)?;
    let dec = build_dec(&mesh).map_err(|e| CliError::Input(e.to_string()))?;
    let dim = dec.dimension(p);
    if num == 0 || num >= dim {
        return Err(CliError::Usage(format!(
            "--num must lie in 1..{dim} for degree {p} on this mesh"
        )));
    }
    let mesh_info = json!({
        "vertices": mesh.num_vertices(),
        "edges": mesh.num_edges(),
        "faces": mesh.num_faces(),
        "euler_characteristic": mesh.euler_characteristic(),
        "dual": dec.dual,
        "fallback_reason": dec.fallback_reason,
    });

    let result = match spectrum(&dec, p, num, solver_tol, cfg.seed) {
        Ok(r) => r,
        Err(DecError::Solver(LanczosError::TooMany { k, dim })) => {
            return Err(CliError::Usage(format!(
                "requested {k} eigenpairs of {dim}"
            )))
        }
        Err(e) => {
            let rec = Record::new(
                "solver",
                "Kx = λ ∗_p x",
                Status::Fail,
                None,
                json!({ "error": e.to_string(), "mesh": mesh_info }),
            );
            return Ok(Outcome {
                report: report(cfg, vec![rec]),
                csv: None,
                solver_failed: true,
            });
        }
    };

    let mut records = Vec::new();
    let worst_residual = result.residuals.iter().copied().fold(0.0, f64::max);
    records.push(Record::residual(
        "solver_residuals",
        "‖Kx − λ∗_p x‖ ≤ tol",
        worst_residual,
        solver_tol,
        json!({ "iterations": result.iterations, "basis_size": result.basis_size, "shift": result.shift }),
    ));

    let expected = expected_betti(&mesh)[p];
    let betti = result.betti(HARMONIC_TOL);
    let betti_details = json!({
        "degree": p,
        "betti": betti,
        "expected": expected,
        "harmonic_tol": HARMONIC_TOL,
        "mesh": mesh_info,
    });
    if betti == num && expected >= num {
        records.push(Record::new(
            "betti",
            "dim ker Δ_p = b_p",
            Status::Skipped,
            None,
            json!({ "reason": "every computed eigenvalue is harmonic; raise --num", "betti_lower_bound": betti }),
        ));
    } else {
        records.push(Record::exact(
            "betti",
            "dim ker Δ_p = b_p",
            betti == expected,
            betti_details,
        ));
    }

    match known_spectrum(&spec) {
        Some(known) => {
            match result.first_positive(HARMONIC_TOL) {
                Some(l) => records.push(Record::residual(
                    "first_positive_eigenvalue",
                    known.anchor,
                    (l - known.target).abs() / known.target,
                    spectral_tol,
                    json!({ "eigenvalue": l, "target": known.target, "relative_tol": spectral_tol }),
                )),
                None => records.push(Record::skipped(
                    "first_positive_eigenvalue",
                    known.anchor,
                    "no positive eigenvalue computed; raise --num",
                )),
            }
            let window = crate::config::DEFAULTS.multiplicity_window * known.target;
            let expected_mult = known.multiplicity[p];
            match result.multiplicity_near(known.target, window) {
                Ok(m) => records.push(Record::exact(
                    "multiplicity",
                    known.anchor,
                    m == expected_mult,
                    json!({ "count": m, "expected": expected_mult, "target": known.target, "window": window }),
                )),
                Err(e) => records.push(Record::skipped("multiplicity", known.anchor, &e.to_string())),
            }
            let rt = CurvatureTensor::constant_curvature(2, known.kappa);
            let kappa_min = (known.kappa > 0.0).then_some(known.kappa);
            records.extend(inequality_checks(
                std::slice::from_ref(&result),
                2,
                r0(&rt),
                kappa_min,
                cfg.tol,
            ));
        }
        None => {
            records.push(Record::skipped(
                "first_positive_eigenvalue",
                "Δ f_i = n f_i",
                "no reference spectrum for an OFF mesh",
            ));
            records.push(Record::skipped(
                "multiplicity",
                "Δ f_i = n f_i",
                "no reference spectrum for an OFF mesh",
            ));
            for rec in inequality_checks(std::slice::from_ref(&result), 2, 0.0, None, cfg.tol) {
                if rec.name == "dirac_lower_bound" {
                    records.push(Record::skipped(
                        &rec.name,
                        &rec.anchor,
                        "curvature of an OFF mesh is not known",
                    ));
                } else {
                    records.push(rec);
                }
            }
        }
    }
    records.push(Record::new(
        "spectrum",
        "Δ_p = dδ + δd",
        Status::Pass,
        Some(worst_residual),
        json!({ "eigenvalues": result.eigenvalues, "residuals": result.residuals }),
    ));

    Ok(Outcome {
        csv: Some(spectrum_csv(&result)),
        report: report(cfg, records),
        solver_failed: false,
    })
}
