use serde_json::json;

use super::{SpectrumResult, HARMONIC_TOL};
use crate::report::Record;

pub const FRIEDRICH_GRID: [f64; 3] = [0.1, 1.0, 10.0];

/// Checks on computed Hodge eigenvalues `μ²` of a surface (`n = 2`):
/// the curvature lower bound from `R₀`, the grid inequality
/// `μ² ≤ tμ⁴ + 1/t`, and on positively curved surfaces `μ² ≥ min κ` for
/// every positive eigenvalue.
pub fn inequality_checks(
    spectra: &[SpectrumResult],
    n: usize,
    r0: f64,
    kappa_min: Option<f64>,
    tol: f64,
) -> Vec<Record> {
    let all: Vec<f64> = spectra
        .iter()
        .flat_map(|s| s.eigenvalues.iter().copied())
        .collect();
    let nf = n as f64;
    let bound = nf / (nf - 1.0) * r0;
    let lower = all
        .iter()
        .map(|&m2| bound - m2)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out = vec![Record::residual(
        "dirac_lower_bound",
        "μ² ≥ (n/(n−1))R₀",
        lower.max(0.0),
        tol,
        json!({ "r0": r0, "bound": bound, "eigenvalues": all.len(), "worst_gap": lower }),
    )];

    let mut worst = f64::NEG_INFINITY;
    for &t in &FRIEDRICH_GRID {
        for &m2 in &all {
            worst = worst.max(m2 - (t * m2 * m2 + 1.0 / t));
        }
    }
    out.push(Record::residual(
        "friedrich_grid",
        "μ² ≤ tμ⁴ + 1/t",
        worst.max(0.0),
        tol,
        json!({ "t": FRIEDRICH_GRID, "worst_gap": worst }),
    ));

    match kappa_min {
        Some(k) => {
            let positive: Vec<f64> = spectra
                .iter()
                .flat_map(|s| s.positive(HARMONIC_TOL))
                .collect();
            let smallest = positive.iter().copied().fold(f64::INFINITY, f64::min);
            out.push(Record::residual(
                "positive_curvature_gap",
                "λ² ≥ min κ",
                (k - smallest).max(0.0),
                tol,
                json!({ "kappa_min": k, "smallest_positive": smallest }),
            ));
        }
        None => out.push(Record::skipped(
            "positive_curvature_gap",
            "λ² ≥ min κ",
            "surface is not positively curved",
        )),
    }
    out
}
