use std::f64::consts::PI;

use dirac_lab::dec::{
    build_dec, flat_torus, flat_torus_with, icosphere, load_off, spectrum, torus_displacement,
    write_off, DecError, DualKind, TorusLayout, HARMONIC_TOL,
};
use dirac_lab::linalg::{shift_invert_lanczos, CsrMatrix, LanczosOptions, TripletBuilder};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn path_laplacian(n: usize) -> CsrMatrix {
    let mut b = TripletBuilder::new(n, n);
    for i in 0..n - 1 {
        b.push(i, i, 1.0);
        b.push(i + 1, i + 1, 1.0);
        b.push(i, i + 1, -1.0);
        b.push(i + 1, i, -1.0);
    }
    b.build()
}

#[test]
fn path_graph_matches_closed_form() {
    let n = 200;
    let k = path_laplacian(n);
    let m = CsrMatrix::diagonal(&vec![1.0; n]);
    let opts = LanczosOptions {
        k: 8,
        ..Default::default()
    };
    let res = shift_invert_lanczos(&k, &m, &opts).unwrap();
    for (j, l) in res.eigenvalues.iter().enumerate() {
        let exact = 2.0 - 2.0 * (PI * j as f64 / n as f64).cos();
        assert!((l - exact).abs() < 1e-9, "j={j}: {l} vs {exact}");
    }
}

#[test]
fn weighted_path_matches_dense_solve() {
    let n = 60;
    let k = path_laplacian(n);
    let mass: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i * 37) % 11) as f64 / 11.0)
        .collect();
    let m = CsrMatrix::diagonal(&mass);
    let res = shift_invert_lanczos(
        &k,
        &m,
        &LanczosOptions {
            k: 6,
            ..Default::default()
        },
    )
    .unwrap();
    let kd = k.to_dense();
    let sym = DMatrix::from_fn(n, n, |r, c| kd[(r, c)] / (mass[r] * mass[c]).sqrt());
    let mut dense: Vec<f64> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    dense.sort_by(f64::total_cmp);
    for (a, b) in res.eigenvalues.iter().zip(&dense) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
    for (l, y) in res.eigenvalues.iter().zip(&res.eigenvectors) {
        let ky = k.matvec(y);
        let worst = ky
            .iter()
            .zip(y)
            .zip(&mass)
            .map(|((a, b), m)| (a - l * m * b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8);
    }
}

#[test]
fn icosphere_counts() {
    for k in 0..=4 {
        let m = icosphere(k).unwrap();
        let f = 20 * 4usize.pow(k as u32);
        assert_eq!(
            (m.num_vertices(), m.num_edges(), m.num_faces()),
            (f / 2 + 2, 3 * f / 2, f)
        );
        assert_eq!(m.euler_characteristic(), 2);
        for p in m.positions() {
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }
    assert!(matches!(icosphere(8), Err(DecError::LevelOutOfRange(8))));
}

#[test]
fn off_file_round_trip() {
    let mesh = icosphere(3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ico3.off");
    std::fs::write(&path, write_off(&mesh)).unwrap();
    assert_eq!(load_off(&path).unwrap(), mesh);
    assert!(matches!(
        load_off(&dir.path().join("none.off")),
        Err(DecError::Io { .. })
    ));
}

/// Harmonic 1-cochains on the flat torus are the edge integrals of
/// constant-coefficient forms `a dx + b dy`.
#[test]
fn torus_harmonic_forms_are_constant() {
    let mesh = flat_torus(32).unwrap();
    let dec = build_dec(&mesh).unwrap();
    let sp = spectrum(&dec, 1, 6, 1e-8, 42).unwrap();
    assert_eq!(sp.betti(HARMONIC_TOL), 2);
    let harmonic = &sp.eigenvectors[..2];
    let star1 = &dec.star1;
    let inner = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .zip(star1)
            .map(|((x, y), s)| x * y * s)
            .sum::<f64>()
    };
    let constant: Vec<Vec<f64>> = (0..2)
        .map(|c| {
            mesh.edges()
                .iter()
                .map(|&[a, b]| torus_displacement(&mesh.positions()[a], &mesh.positions()[b])[c])
                .collect()
        })
        .collect();
    // distance of each form from the span of the other family, both ways
    let deviation = |x: &[f64], basis: &[Vec<f64>]| {
        let g = DMatrix::from_fn(2, 2, |r, c| inner(&basis[r], &basis[c]));
        let rhs = nalgebra::DVector::from_fn(2, |r, _| inner(&basis[r], x));
        let coef = g.lu().solve(&rhs).unwrap();
        let resid: Vec<f64> = (0..x.len())
            .map(|e| x[e] - coef[0] * basis[0][e] - coef[1] * basis[1][e])
            .collect();
        (inner(&resid, &resid) / inner(x, x)).sqrt()
    };
    let harmonic_basis: Vec<Vec<f64>> = harmonic.to_vec();
    for c in &constant {
        let d = deviation(c, &harmonic_basis);
        assert!(d < 0.05, "constant form off harmonic span by {d}");
    }
    for h in harmonic {
        let d = deviation(h, &constant);
        assert!(d < 0.05, "harmonic form off constant span by {d}");
    }
}

#[test]
fn square_torus_falls_back_and_keeps_topology() {
    let dec = build_dec(&flat_torus_with(16, TorusLayout::Square).unwrap()).unwrap();
    assert_eq!(dec.dual, DualKind::Barycentric);
    let betti: Vec<usize> = (0..3)
        .map(|p| spectrum(&dec, p, 4, 1e-8, 1).unwrap().betti(HARMONIC_TOL))
        .collect();
    assert_eq!(betti, [1, 2, 1]);
}

/// Nonzero eigenvalues of Δ₀ reappear in Δ₁ through `d`.
#[test]
fn nonzero_function_spectrum_lives_in_one_forms() {
    let dec = build_dec(&icosphere(3).unwrap()).unwrap();
    let s0 = spectrum(&dec, 0, 9, 1e-10, 5).unwrap();
    let s1 = spectrum(&dec, 1, 20, 1e-10, 5).unwrap();
    for l in s0.positive(HARMONIC_TOL) {
        let nearest = s1
            .eigenvalues
            .iter()
            .map(|m| (m - l).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(
            nearest < 1e-7 * l,
            "Δ₀ eigenvalue {l} missing from Δ₁ ({nearest:e})"
        );
    }
}

#[test]
fn first_sphere_eigenvalue_converges() {
    let errors: Vec<f64> = (2..=4)
        .map(|k| {
            let dec = build_dec(&icosphere(k).unwrap()).unwrap();
            let sp = spectrum(&dec, 0, 5, 1e-10, 42).unwrap();
            (sp.first_positive(HARMONIC_TOL).unwrap() - 2.0).abs()
        })
        .collect();
    for w in errors.windows(2) {
        assert!(w[1] * 2.0 <= w[0], "errors {errors:?}");
    }
}

#[test]
fn spectra_are_deterministic() {
    let dec = build_dec(&flat_torus(12).unwrap()).unwrap();
    let a = spectrum(&dec, 1, 8, 1e-8, 9).unwrap();
    let b = spectrum(&dec, 1, 8, 1e-8, 9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn multiplicity_window_errors() {
    let dec = build_dec(&icosphere(2).unwrap()).unwrap();
    let sp = spectrum(&dec, 0, 4, 1e-8, 42).unwrap();
    assert!(matches!(
        sp.multiplicity_near(0.5, 0.6),
        Err(DecError::AmbiguousWindow { .. })
    ));
    assert!(matches!(
        sp.multiplicity_near(2.0, 0.1),
        Err(DecError::ClusterTruncated { .. })
    ));
    let more = spectrum(&dec, 0, 6, 1e-8, 42).unwrap();
    assert_eq!(more.multiplicity_near(2.0, 0.1).unwrap(), 3);
    assert!(matches!(
        spectrum(&dec, 3, 2, 1e-8, 42),
        Err(DecError::BadDegree(3))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn laplacians_are_nonnegative((p, x) in (0usize..=2).prop_flat_map(|p| {
        // icosphere(2) has 162 vertices, 480 edges and 320 faces
        (Just(p), prop::collection::vec(-1.0f64..1.0, [162, 480, 320][p]))
    })) {
        let dec = build_dec(&icosphere(2).unwrap()).unwrap();
        let (k, _) = dec.laplacian(p).unwrap();
        let energy: f64 = k.matvec(&x).iter().zip(&x).map(|(a, b)| a * b).sum();
        prop_assert!(energy >= -1e-10);
    }

    #[test]
    fn torus_layouts_preserve_area(m in 3usize..=12) {
        let layout = if m % 2 == 0 { TorusLayout::Staggered } else { TorusLayout::Square };
        let mesh = flat_torus_with(m, layout).unwrap();
        prop_assert!((mesh.total_area() - 1.0).abs() < 1e-12);
        prop_assert_eq!(mesh.euler_characteristic(), 0);
        let dec = build_dec(&mesh).unwrap();
        let dual_area: f64 = dec.star0.iter().sum();
        prop_assert!((dual_area - 1.0).abs() < 1e-10);
    }
}
