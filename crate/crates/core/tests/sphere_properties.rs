use dirac_lab::scalar::{rat, Rational};
use dirac_lab::sphere::{
    build_twistor_section, non_twistor_probe, sample_points, tangent_frame, SphereError,
    SpherePoint, TangentFrame, PROBE_THRESHOLD,
};
use proptest::prelude::*;

fn params(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-5i64..=5, 1i64..=3), 2 * n + 4)
        .prop_map(|v| v.into_iter().map(|(a, b)| rat(a, b)).collect())
}

fn family_member() -> impl Strategy<Value = (usize, Vec<Rational>, u64)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), params(n), any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn family_members_are_twistor((n, p, seed) in family_member()) {
        let s = build_twistor_section(n, &p[0], &p[1..n + 2], &p[n + 2..2 * n + 3], &p[2 * n + 3]).unwrap();
        for pt in sample_points(n, 5, seed) {
            prop_assert!(s.twistor_residual(&pt).unwrap() < 1e-8);
        }
    }

    #[test]
    fn dirac_is_frame_independent((n, p, seed) in family_member()) {
        let s = build_twistor_section(n, &p[0], &p[1..n + 2], &p[n + 2..2 * n + 3], &p[2 * n + 3]).unwrap();
        for pt in sample_points(n, 3, seed) {
            let frame = tangent_frame(&pt).unwrap();
            // reversing the frame order is an orthogonal change of frame
            let reversed: Vec<Vec<f64>> = (0..n).rev().map(|a| frame.vector(a).to_vec()).collect();
            let other = TangentFrame::from_vectors(&pt, reversed).unwrap();
            let a = frame.to_ambient(&s.dirac_in(&frame));
            let b = other.to_ambient(&s.dirac_in(&other));
            prop_assert!((&a - &b).max_abs() < 1e-10);
        }
    }

    #[test]
    fn sample_points_lie_on_sphere(n in 2usize..=6, seed in any::<u64>()) {
        for p in sample_points(n, 10, seed) {
            let r: f64 = p.coords().iter().map(|x| x * x).sum();
            prop_assert!((r - 1.0).abs() < 1e-12);
            prop_assert!(tangent_frame(&p).unwrap().orthonormality_defect() < 1e-12);
        }
    }
}

#[test]
fn constants_and_volume_are_parallel() {
    let n = 3;
    let z = vec![rat(0, 1); n + 1];
    let s = build_twistor_section(n, &rat(2, 1), &z, &z, &rat(-3, 1)).unwrap();
    for p in sample_points(n, 10, 1) {
        assert!(s.dirac(&p).unwrap().max_abs() < 1e-12);
        let frame = tangent_frame(&p).unwrap();
        for d in s.frame_derivatives(&frame) {
            assert!(d.max_abs() < 1e-12);
        }
    }
}

#[test]
fn probe_is_not_twistor() {
    for n in 2..=4 {
        let probe = non_twistor_probe(n).unwrap();
        let worst = sample_points(n, 50, 3)
            .iter()
            .map(|p| probe.twistor_residual(p).unwrap())
            .fold(0.0, f64::max);
        assert!(worst > PROBE_THRESHOLD, "n={n}: {worst}");
    }
}

#[test]
fn input_validation() {
    assert!(matches!(
        SpherePoint::new(vec![1.0, 1.0, 0.0]),
        Err(SphereError::NotOnSphere(_))
    ));
    let z = vec![rat(0, 1); 3];
    assert!(matches!(
        build_twistor_section(1, &rat(1, 1), &z, &z, &rat(1, 1)),
        Err(SphereError::DimensionOutOfRange(1))
    ));
    assert!(matches!(
        build_twistor_section(3, &rat(1, 1), &z, &z, &rat(1, 1)),
        Err(SphereError::ParameterLength { expected: 4, .. })
    ));
}
