use std::collections::HashMap;

use super::DecError;

/// Closed, consistently oriented triangle mesh with an edge-length metric.
///
/// Positions are ambient coordinates for embedded meshes and chart
/// coordinates for the flat torus; the stars only read `edge_lengths`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialSurface {
    positions: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    /// For each face, its edges `(v0v1, v1v2, v2v0)` with the sign of the
    /// traversal relative to the stored edge orientation `a < b`.
    face_edges: Vec<[(usize, f64); 3]>,
    edge_faces: Vec<[usize; 2]>,
    edge_lengths: Vec<f64>,
}

const MIN_AREA: f64 = 1e-12;

impl SimplicialSurface {
    /// Mesh embedded in `ℝ³`; lengths are Euclidean.
    pub fn embedded(positions: Vec<[f64; 3]>, faces: Vec<[usize; 3]>) -> Result<Self, DecError> {
        let pos = positions.clone();
        SimplicialSurface::with_metric(positions, faces, move |a, b| dist(&pos[a], &pos[b]))
    }

    /// Mesh whose edge lengths come from `length(a, b)`.
    pub fn with_metric(
        positions: Vec<[f64; 3]>,
        faces: Vec<[usize; 3]>,
        length: impl Fn(usize, usize) -> f64,
    ) -> Result<Self, DecError> {
        let nv = positions.len();
        let mut index: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut edge_faces: Vec<Vec<(usize, f64)>> = Vec::new();
        let mut face_edges = Vec::with_capacity(faces.len());
        for (fi, f) in faces.iter().enumerate() {
            if f.iter().any(|&v| v >= nv) || f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(DecError::DegenerateFace(fi));
            }
            let mut fe = [(0, 0.0); 3];
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let key = [a.min(b), a.max(b)];
                let sign = if a < b { 1.0 } else { -1.0 };
                let e = *index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edge_faces.push(Vec::new());
                    edges.len() - 1
                });
                edge_faces[e].push((fi, sign));
                fe[k] = (e, sign);
            }
            face_edges.push(fe);
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for (e, adj) in edge_faces.iter().enumerate() {
            if adj.len() != 2 {
                return Err(DecError::NonManifoldEdge {
                    a: edges[e][0],
                    b: edges[e][1],
                    faces: adj.len(),
                });
            }
            if adj[0].1 == adj[1].1 {
                return Err(DecError::NonOrientable);
            }
            pairs.push([adj[0].0, adj[1].0]);
        }
        let mut used = vec![false; nv];
        faces.iter().flatten().for_each(|&v| used[v] = true);
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(DecError::IsolatedVertex(v));
        }
        let edge_lengths: Vec<f64> = edges.iter().map(|&[a, b]| length(a, b)).collect();
        let mesh = SimplicialSurface {
            positions,
            faces,
            edges,
            face_edges,
            edge_faces: pairs,
            edge_lengths,
        };
        for f in 0..mesh.faces.len() {
            if !(mesh.face_area(f) > MIN_AREA) {
                return Err(DecError::DegenerateFace(f));
            }
        }
        Ok(mesh)
    }

    pub fn num_vertices(&self) -> usize {
        self.positions.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn face_edges(&self, f: usize) -> &[(usize, f64); 3] {
        &self.face_edges[f]
    }

    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        self.edge_lengths[e]
    }

    /// Lengths of the edges `(v0v1, v1v2, v2v0)` of face `f`.
    pub fn face_lengths(&self, f: usize) -> [f64; 3] {
        let fe = &self.face_edges[f];
        [0, 1, 2].map(|k| self.edge_lengths[fe[k].0])
    }

    /// Heron's formula on the face's edge lengths.
    pub fn face_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.face_lengths(f);
        let s = 0.5 * (a + b + c);
        (s * (s - a) * (s - b) * (s - c)).max(0.0).sqrt()
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_faces()).map(|f| self.face_area(f)).sum()
    }
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn normalize(p: [f64; 3]) -> [f64; 3] {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / r, p[1] / r, p[2] / r]
}

pub const ICOSPHERE_MAX_LEVEL: usize = 7;

/// `k`-fold 4-to-1 subdivision of the icosahedron, projected to the unit
/// sphere, faces oriented outward.
pub fn icosphere(k: usize) -> Result<SimplicialSurface, DecError> {
    if k > ICOSPHERE_MAX_LEVEL {
        return Err(DecError::LevelOutOfRange(k));
    }
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut positions: Vec<[f64; 3]> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalize)
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..k {
        let mut mid: HashMap<[usize; 2], usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, positions: &mut Vec<[f64; 3]>| -> usize {
            *mid.entry([a.min(b), a.max(b)]).or_insert_with(|| {
                let (p, q) = (positions[a], positions[b]);
                positions.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                positions.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * faces.len());
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut positions);
            let bc = midpoint(b, c, &mut positions);
            let ca = midpoint(c, a, &mut positions);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    SimplicialSurface::embedded(positions, faces)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusLayout {
    /// Rows shifted alternately by half a spacing; every triangle is acute.
    /// Needs an even number of rows.
    Staggered,
    /// Square grid split along one diagonal; triangles are right-angled so
    /// the circumcentric dual of each diagonal degenerates.
    Square,
}

/// Triangulated flat torus `ℝ²/ℤ²` with an `m × m` vertex lattice.
/// Staggered for even `m`, square otherwise.
pub fn flat_torus(m: usize) -> Result<SimplicialSurface, DecError> {
    let layout = if m % 2 == 0 {
        TorusLayout::Staggered
    } else {
        TorusLayout::Square
    };
    flat_torus_with(m, layout)
}

pub fn flat_torus_with(m: usize, layout: TorusLayout) -> Result<SimplicialSurface, DecError> {
    if m < 3 || (layout == TorusLayout::Staggered && m % 2 == 1) {
        return Err(DecError::TorusSize(m));
    }
    let h = 1.0 / m as f64;
    let id = |i: usize, j: usize| (j % m) * m + (i % m);
    let shift = |j: usize| match layout {
        TorusLayout::Staggered if j % 2 == 1 => 0.5,
        _ => 0.0,
    };
    let positions: Vec<[f64; 3]> = (0..m * m)
        .map(|v| {
            let (i, j) = (v % m, v / m);
            [(i as f64 + shift(j)) * h, j as f64 * h, 0.0]
        })
        .collect();
    let mut faces = Vec::with_capacity(2 * m * m);
    for j in 0..m {
        for i in 0..m {
            match layout {
                TorusLayout::Square => {
                    faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                    faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
                }
                TorusLayout::Staggered if j % 2 == 0 => {
                    faces.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
                    faces.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
                }
                TorusLayout::Staggered => {
                    faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
                    faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                }
            }
        }
    }
    let pos = positions.clone();
    SimplicialSurface::with_metric(positions, faces, move |a, b| {
        let d = torus_displacement(&pos[a], &pos[b]);
        (d[0] * d[0] + d[1] * d[1]).sqrt()
    })
}

/// Shortest displacement from `a` to `b` on `ℝ²/ℤ²`.
pub fn torus_displacement(a: &[f64; 3], b: &[f64; 3]) -> [f64; 2] {
    let wrap = |d: f64| d - d.round();
    [wrap(b[0] - a[0]), wrap(b[1] - a[1])]
}
