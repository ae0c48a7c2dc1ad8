use serde::Serialize;

use super::{DecError, SimplicialSurface};
use crate::linalg::{CsrMatrix, TripletBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualKind {
    Circumcentric,
    Barycentric,
}

/// Signed incidence matrices and diagonal Hodge stars of a surface mesh.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub d0: CsrMatrix,
    pub d1: CsrMatrix,
    pub star0: Vec<f64>,
    pub star1: Vec<f64>,
    pub star2: Vec<f64>,
    pub dual: DualKind,
    /// Why the circumcentric dual was rejected, if it was.
    pub fallback_reason: Option<String>,
}

/// Smallest accepted circumcentric dual/primal length ratio.
const MIN_STAR1: f64 = 1e-10;

struct Stars {
    star0: Vec<f64>,
    star1: Vec<f64>,
}

/// `cot` of the angle opposite the side of length `c`.
fn cot_opposite(a: f64, b: f64, c: f64, area: f64) -> f64 {
    (a * a + b * b - c * c) / (4.0 * area)
}

fn circumcentric(mesh: &SimplicialSurface) -> Stars {
    let mut star0 = vec![0.0; mesh.num_vertices()];
    let mut star1 = vec![0.0; mesh.num_edges()];
    for f in 0..mesh.num_faces() {
        let area = mesh.face_area(f);
        let l = mesh.face_lengths(f);
        let fe = mesh.face_edges(f);
        let verts = mesh.faces()[f];
        // edge k joins verts[k] and verts[k+1]; its opposite corner is verts[k+2]
        let cot: [f64; 3] =
            [0, 1, 2].map(|k| cot_opposite(l[(k + 1) % 3], l[(k + 2) % 3], l[k], area));
        for k in 0..3 {
            star1[fe[k].0] += 0.5 * cot[k];
        }
        for k in 0..3 {
            let prev = (k + 2) % 3;
            star0[verts[k]] += (l[k] * l[k] * cot[k] + l[prev] * l[prev] * cot[prev]) / 8.0;
        }
    }
    Stars { star0, star1 }
}

fn barycentric(mesh: &SimplicialSurface) -> Stars {
    let mut star0 = vec![0.0; mesh.num_vertices()];
    let mut star1 = vec![0.0; mesh.num_edges()];
    for f in 0..mesh.num_faces() {
        let area = mesh.face_area(f);
        let l = mesh.face_lengths(f);
        let fe = mesh.face_edges(f);
        for &v in &mesh.faces()[f] {
            star0[v] += area / 3.0;
        }
        for k in 0..3 {
            let (a, b, c) = (l[(k + 1) % 3], l[(k + 2) % 3], l[k]);
            let median = 0.5 * (2.0 * a * a + 2.0 * b * b - c * c).max(0.0).sqrt();
            star1[fe[k].0] += median / 3.0 / c;
        }
    }
    Stars { star0, star1 }
}

/// Builds the complex with circumcentric stars, falling back to the
/// barycentric dual when a dual length or area is not positive.
pub fn build_dec(mesh: &SimplicialSurface) -> Result<CochainComplex, DecError> {
    build_dec_with(mesh, DualKind::Circumcentric)
}

pub fn build_dec_with(
    mesh: &SimplicialSurface,
    preferred: DualKind,
) -> Result<CochainComplex, DecError> {
    let (nv, ne, nf) = (mesh.num_vertices(), mesh.num_edges(), mesh.num_faces());
    let mut b0 = TripletBuilder::new(ne, nv);
    for (e, &[a, b]) in mesh.edges().iter().enumerate() {
        b0.push(e, a, -1.0);
        b0.push(e, b, 1.0);
    }
    let mut b1 = TripletBuilder::new(nf, ne);
    for f in 0..nf {
        for &(e, s) in mesh.face_edges(f) {
            b1.push(f, e, s);
        }
    }
    let mut star2 = Vec::with_capacity(nf);
    for f in 0..nf {
        let a = mesh.face_area(f);
        if !(a > 0.0) {
            return Err(DecError::DegenerateFace(f));
        }
        star2.push(1.0 / a);
    }

    let (stars, dual, fallback_reason) = match preferred {
        DualKind::Barycentric => (barycentric(mesh), DualKind::Barycentric, None),
        DualKind::Circumcentric => {
            let c = circumcentric(mesh);
            let bad_edge = c.star1.iter().position(|&s| !(s > MIN_STAR1));
            let bad_vertex = c.star0.iter().position(|&s| !(s > 0.0));
            match (bad_edge, bad_vertex) {
                (None, None) => (c, DualKind::Circumcentric, None),
                (Some(e), _) => (
                    barycentric(mesh),
                    DualKind::Barycentric,
                    Some(format!("dual length ratio {:e} on edge {e}", c.star1[e])),
                ),
                (None, Some(v)) => (
                    barycentric(mesh),
                    DualKind::Barycentric,
                    Some(format!("dual area {:e} at vertex {v}", c.star0[v])),
                ),
            }
        }
    };
    Ok(CochainComplex {
        d0: b0.build(),
        d1: b1.build(),
        star0: stars.star0,
        star1: stars.star1,
        star2,
        dual,
        fallback_reason,
    })
}

fn inverse(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| 1.0 / x).collect()
}

impl CochainComplex {
    pub fn dimension(&self, p: usize) -> usize {
        match p {
            0 => self.star0.len(),
            1 => self.star1.len(),
            _ => self.star2.len(),
        }
    }

    pub fn star(&self, p: usize) -> &[f64] {
        match p {
            0 => &self.star0,
            1 => &self.star1,
            _ => &self.star2,
        }
    }

    /// `(K, M)` with `M = ∗_p` and `M⁻¹K = Δ_p = dδ + δd`.
    pub fn laplacian(&self, p: usize) -> Result<(CsrMatrix, CsrMatrix), DecError> {
        let k = match p {
            0 => self.d0.transpose().scale_cols(&self.star1).matmul(&self.d0),
            1 => {
                let s1d0 = self.d0.scale_rows(&self.star1);
                let down = s1d0
                    .scale_cols(&inverse(&self.star0))
                    .matmul(&s1d0.transpose());
                let up = self.d1.transpose().scale_cols(&self.star2).matmul(&self.d1);
                down.add(&up)
            }
            2 => {
                let s2d1 = self.d1.scale_rows(&self.star2);
                s2d1.scale_cols(&inverse(&self.star1))
                    .matmul(&s2d1.transpose())
            }
            _ => return Err(DecError::BadDegree(p)),
        };
        Ok((k, CsrMatrix::diagonal(self.star(p))))
    }

    /// `Δ_p x = M⁻¹ K x`.
    pub fn apply_laplacian(&self, p: usize, x: &[f64]) -> Result<Vec<f64>, DecError> {
        let (k, _) = self.laplacian(p)?;
        Ok(k.matvec(x)
            .iter()
            .zip(self.star(p))
            .map(|(v, s)| v / s)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dec::{flat_torus, flat_torus_with, icosphere, TorusLayout};

    #[test]
    fn incidence_composes_to_zero() {
        let dec = build_dec(&icosphere(3).unwrap()).unwrap();
        let dd = dec.d1.matmul(&dec.d0);
        assert_eq!(dd.max_abs(), 0.0);
    }

    #[test]
    fn vertex_star_partitions_area() {
        let mesh = icosphere(3).unwrap();
        let dec = build_dec(&mesh).unwrap();
        assert_eq!(dec.dual, DualKind::Circumcentric);
        let total: f64 = dec.star0.iter().sum();
        assert!((total - mesh.total_area()).abs() < 1e-10);
    }

    #[test]
    fn torus_layouts() {
        let stag = build_dec(&flat_torus(8).unwrap()).unwrap();
        assert_eq!(stag.dual, DualKind::Circumcentric);
        assert!(stag.star1.iter().all(|&s| s > 0.0));
        let square = build_dec(&flat_torus_with(8, TorusLayout::Square).unwrap()).unwrap();
        assert_eq!(square.dual, DualKind::Barycentric);
        assert!(square.fallback_reason.is_some());
        assert!(square.star1.iter().all(|&s| s > 0.0));
    }

    #[test]
    fn constants_are_harmonic_and_laplacian_commutes_with_d() {
        let dec = build_dec(&icosphere(2).unwrap()).unwrap();
        let ones = vec![1.0; dec.dimension(0)];
        let l0 = dec.apply_laplacian(0, &ones).unwrap();
        assert!(l0.iter().all(|v| v.abs() < 1e-12));
        let f: Vec<f64> = (0..dec.dimension(0))
            .map(|i| ((i * 7) % 11) as f64 - 5.0)
            .collect();
        let lhs = dec.apply_laplacian(1, &dec.d0.matvec(&f)).unwrap();
        let rhs = dec.d0.matvec(&dec.apply_laplacian(0, &f).unwrap());
        let scale = rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn stiffness_is_symmetric() {
        let dec = build_dec(&icosphere(2).unwrap()).unwrap();
        for p in 0..3 {
            let (k, _) = dec.laplacian(p).unwrap();
            assert!(k.asymmetry() < 1e-12 * k.max_abs());
        }
        assert!(matches!(dec.laplacian(3), Err(DecError::BadDegree(3))));
    }
}
