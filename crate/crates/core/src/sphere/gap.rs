use serde::Serialize;

use crate::scalar::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapClass {
    /// `p ∈ {0, n}`: the target is 0 and only constants solve it.
    Harmonic,
    /// `p ∈ {1, n−1}`: the target equals the first eigenvalue.
    Realized,
    /// `2 ≤ p ≤ n−2`: the target must lie strictly below the first eigenvalue.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub p: usize,
    /// `(n/(n−1)) p (n−p)`.
    #[serde(serialize_with = "ser_rational")]
    pub target: Rational,
    /// First positive eigenvalue of the Hodge laplacian on `p`-forms.
    #[serde(serialize_with = "ser_rational")]
    pub mu: Rational,
    pub class: GapClass,
    /// Whether the row satisfies the relation its class asks for.
    pub holds: bool,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `μ_{n,p} = min{p(n−p+1), (p+1)(n−p)}`, with `μ = n` on functions and
/// top forms where the formula degenerates to the harmonic value 0.
pub fn calabi_minimum(n: usize, p: usize) -> Rational {
    if p == 0 || p == n {
        return rat(n as i64, 1);
    }
    let (n, p) = (n as i64, p as i64);
    rat((p * (n - p + 1)).min((p + 1) * (n - p)), 1)
}

/// Exact comparison of `(n/(n−1)) p(n−p)` with `μ_{n,p}` for `p = 0..=n`.
pub fn eigenvalue_gap_table(n: usize) -> Vec<GapRow> {
    assert!(n >= 2, "gap table needs n >= 2");
    (0..=n)
        .map(|p| {
            let (ni, pi) = (n as i64, p as i64);
            let target = rat(ni * pi * (ni - pi), ni - 1);
            let mu = calabi_minimum(n, p);
            let class = if p == 0 || p == n {
                GapClass::Harmonic
            } else if p == 1 || p == n - 1 {
                GapClass::Realized
            } else {
                GapClass::Strict
            };
            let holds = match class {
                GapClass::Harmonic => target == rat(0, 1),
                GapClass::Realized => target == mu,
                GapClass::Strict => target < mu,
            };
            GapRow {
                n,
                p,
                target,
                mu,
                class,
                holds,
            }
        })
        .collect()
}
