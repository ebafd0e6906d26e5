use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geom::builtin_chart;
use crate::linalg::unit;

fn triple(name: &str) -> QuaternionicTriple {
    builtin_triple(name).unwrap()
}

fn random_points(n: usize, dim: usize, half: f64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::new((0..dim).map(|_| rng.gen_range(-half..half)).collect::<Vec<_>>())).collect()
}

#[test]
fn standard_triples_satisfy_axioms() {
    for name in ["standard_h1", "standard_h2"] {
        let t = triple(name);
        for p in random_points(5, t.chart.dim(), 2.0, 1) {
            let rep = check_structure_axioms(&t, &p).unwrap();
            assert!(rep.pass, "{name}");
            assert_eq!(rep.max_defect, 0.0);
        }
    }
}

#[test]
fn broken_triple_fails_axioms() {
    let rep = check_structure_axioms(&triple("broken_h1"), &Point::new([0.1, 0.2, 0.3, 0.4])).unwrap();
    assert!(!rep.pass);
    assert!(rep.algebra_defect >= 1.0);
}

#[test]
fn hp2_triple_satisfies_axioms() {
    let t = triple("hp2");
    for p in random_points(10, 8, 1.0, 7) {
        let rep = check_structure_axioms(&t, &p).unwrap();
        assert!(rep.max_defect < 1e-9, "defect {:e}", rep.max_defect);
    }
}

#[test]
fn twisted_triples() {
    // Skewed: quaternion algebra intact, Hermitian condition broken.
    let p = Point::new([0.9, 0.2, -0.3, 0.4]);
    let rep = check_structure_axioms(&triple("twisted_h1"), &p).unwrap();
    assert!(rep.algebra_defect < 1e-12);
    assert!(rep.hermitian_defect > 1e-3);
    // Rotated: a genuine almost quaternionic Hermitian structure.
    let p = Point::new([0.9, 0.2, -0.3, 0.4, 0.1, 0.0, 1.0, -1.0]);
    assert!(check_structure_axioms(&triple("twisted_h2"), &p).unwrap().pass);
}

#[test]
fn constant_triple_is_parallel() {
    let rep = check_parallelism(&triple("standard_h1"), &Point::new([0.5, -1.0, 2.0, 0.0])).unwrap();
    assert!(rep.residual < 1e-9);
    assert!(rep.omega.iter().flatten().all(|w| w.abs() < 1e-12));
}

#[test]
fn hp2_triple_is_quaternionic_kahler_not_hyperkahler() {
    let t = triple("hp2");
    let mut largest_omega = 0.0_f64;
    for p in random_points(10, 8, 1.0, 11) {
        let rep = check_parallelism(&t, &p).unwrap();
        assert!(rep.residual < 1e-6, "residual {:e}", rep.residual);
        largest_omega = rep.omega.iter().flatten().fold(largest_omega, |m, w| m.max(w.abs()));
    }
    assert!(largest_omega > 1e-2);
}

#[test]
fn non_kahler_counterexamples() {
    for name in ["twisted_h1", "twisted_h2"] {
        let t = triple(name);
        let worst = random_points(10, t.chart.dim(), 1.0, 3)
            .iter()
            .map(|p| check_parallelism(&t, p).unwrap().residual)
            .fold(0.0, f64::max);
        assert!(worst > 1e-3, "{name}: {worst:e}");
    }
}

#[test]
fn model_curvature_examples() {
    let g = Mat::identity(4);
    let js = TripleExpr::Standard { m: 1 }.eval::<f64>(&[0.0; 4]);
    let x = unit(4, 0);
    let jx = js[0].mul_vec(&x);
    let y = vec![1.0, 2.0, 0.0, -1.0];
    assert_eq!(model_curvature(SpaceFormModel { c: 0.0 }, &g, &js, &x, &jx, &y, &x), 0.0);
    assert!((model_curvature(SpaceFormModel { c: 4.0 }, &g, &js, &x, &jx, &jx, &x) - 4.0).abs() < 1e-15);

    let g8 = Mat::identity(8);
    let js8 = TripleExpr::Standard { m: 2 }.eval::<f64>(&[0.0; 8]);
    let e5 = unit(8, 4);
    let e1 = unit(8, 0);
    assert!((model_curvature(SpaceFormModel { c: 4.0 }, &g8, &js8, &e1, &e5, &e5, &e1) - 1.0).abs() < 1e-15);
}

#[test]
fn estimate_c_flat() {
    let t = triple("standard_h1");
    let est = estimate_c(&t.chart, &t, &random_points(10, 4, 2.0, 5), 10, 9).unwrap();
    assert_eq!(est.mean, 0.0);
    assert!(est.spread < 1e-9);
}

#[test]
fn estimate_c_hp2_is_constant() {
    let t = triple("hp2");
    let est = estimate_c(&t.chart, &t, &random_points(10, 8, 1.0, 5), 10, 9).unwrap();
    assert!(est.spread < 1e-5, "spread {:e}", est.spread);
    assert!((est.mean - 4.0).abs() < 1e-6, "mean {}", est.mean);
}

#[test]
fn estimate_c_needs_quaternionic_dimension() {
    let s2 = builtin_chart("sphere2").unwrap();
    let t = triple("standard_h1");
    let err = estimate_c(&s2, &t, &[Point::new([1.0, 0.0])], 1, 0).unwrap_err();
    assert!(matches!(err, GeomError::Precondition(_)));
    assert!(QuaternionicTriple::new("bad", s2, TripleExpr::Standard { m: 1 }).is_err());
}

#[test]
fn hp2_curvature_matches_space_form_model() {
    let t = triple("hp2");
    let pts = random_points(10, 8, 1.0, 21);
    let c_hat = estimate_c(&t.chart, &t, &pts, 10, 3).unwrap().mean;
    let model = SpaceFormModel { c: c_hat };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..200 {
        let p = &pts[k % pts.len()];
        let g = t.chart.metric_at(p).unwrap();
        let r = t.chart.curvature_at(p).unwrap();
        let js = t.at(p).unwrap();
        let v: Vec<Vec<f64>> = (0..4).map(|_| random_unit(&g, &mut rng)).collect();
        let exact = r.eval(&v[0], &v[1], &v[2], &v[3]);
        let modeled = model_curvature(model, &g, &js, &v[0], &v[1], &v[2], &v[3]);
        assert!((exact - modeled).abs() < 1e-4 * c_hat.abs().max(1.0), "{exact} vs {modeled}");
    }
}

#[test]
fn flat_curvature_matches_zero_model() {
    for name in ["standard_h1", "standard_h2"] {
        let t = triple(name);
        let n = t.chart.dim();
        let p = Point::new(vec![0.3; n]);
        let g = t.chart.metric_at(&p).unwrap();
        let r = t.chart.curvature_at(&p).unwrap();
        let js = t.at(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v: Vec<Vec<f64>> = (0..4).map(|_| random_unit(&g, &mut rng)).collect();
        let m = model_curvature(SpaceFormModel { c: 0.0 }, &g, &js, &v[0], &v[1], &v[2], &v[3]);
        assert_eq!(m, 0.0);
        assert!(r.eval(&v[0], &v[1], &v[2], &v[3]).abs() < 1e-15);
    }
}

fn hp2_point_and_vectors() -> impl Strategy<Value = (Vec<f64>, Vec<Vec<f64>>)> {
    (
        proptest::collection::vec(-1.0..1.0_f64, 8),
        proptest::collection::vec(proptest::collection::vec(-1.0..1.0_f64, 8), 4),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn model_curvature_symmetries((x, v) in hp2_point_and_vectors(), c in -5.0..5.0_f64) {
        let t = triple("hp2");
        let p = Point::new(x);
        let g = t.chart.metric_at(&p).unwrap();
        let js = t.at(&p).unwrap();
        let m = SpaceFormModel { c };
        let r = |a: &[f64], b: &[f64], cc: &[f64], d: &[f64]| model_curvature(m, &g, &js, a, b, cc, d);
        let (a, b, cc, d) = (&v[0], &v[1], &v[2], &v[3]);
        let base = r(a, b, cc, d);
        prop_assert!((base + r(b, a, cc, d)).abs() < 1e-12);
        prop_assert!((base + r(a, b, d, cc)).abs() < 1e-12);
        prop_assert!((base - r(cc, d, a, b)).abs() < 1e-12);
        prop_assert!((r(a, b, cc, d) + r(b, cc, a, d) + r(cc, a, b, d)).abs() < 1e-12);
    }

    #[test]
    fn j_is_skew_adjoint((x, v) in hp2_point_and_vectors()) {
        let t = triple("hp2");
        let p = Point::new(x);
        let g = t.chart.metric_at(&p).unwrap();
        for ja in t.at(&p).unwrap() {
            prop_assert!(g.bilinear(&ja.mul_vec(&v[0]), &v[0]).abs() < 1e-9);
        }
    }
}
