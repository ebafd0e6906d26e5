use std::f64::consts::FRAC_PI_3;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use super::*;
use crate::linalg::unit;

/// Central-difference Christoffel symbols; independent of the autodiff path.
fn fd_christoffel(metric: &MetricExpr, x: &[f64], h: f64) -> Vec<f64> {
    let n = x.len();
    let g = metric.eval(x);
    let g_inv = g.inverse().unwrap();
    let dg: Vec<Mat<f64>> = (0..n)
        .map(|l| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[l] += h;
            xm[l] -= h;
            metric.eval(&xp).sub(&metric.eval(&xm)).scaled(1.0 / (2.0 * h))
        })
        .collect();
    let mut out = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += 0.5 * g_inv[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
                }
                out[(k * n + i) * n + j] = acc;
            }
        }
    }
    out
}

/// Riemann tensor from nested central differences of the metric.
fn fd_riemann(metric: &MetricExpr, x: &[f64], h: f64) -> Vec<f64> {
    let n = x.len();
    let g = metric.eval(x);
    let gamma = fd_christoffel(metric, x, h);
    let ga = |k: usize, i: usize, j: usize| gamma[(k * n + i) * n + j];
    let dgamma: Vec<Vec<f64>> = (0..n)
        .map(|m| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[m] += h;
            xm[m] -= h;
            let p = fd_christoffel(metric, &xp, h);
            let q = fd_christoffel(metric, &xm, h);
            p.iter().zip(&q).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect();
    let mut out = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for w in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        let mut op = dgamma[i][(l * n + j) * n + k] - dgamma[j][(l * n + i) * n + k];
                        for m in 0..n {
                            op += ga(m, j, k) * ga(l, i, m) - ga(m, i, k) * ga(l, j, m);
                        }
                        acc += g[(w, l)] * op;
                    }
                    out[((i * n + j) * n + k) * n + w] = acc;
                }
            }
        }
    }
    out
}

fn chart(name: &str) -> MetricChart {
    builtin_chart(name).unwrap()
}

fn tv(p: &Point, c: &[f64]) -> TangentVector {
    TangentVector::new(p.clone(), c.to_vec())
}

#[test]
fn euclidean_metric_is_identity() {
    let c = chart("euclidean4");
    let g = c.metric_at(&Point::new([0.3, -1.0, 2.0, 5.0])).unwrap();
    assert_eq!(g, Mat::identity(4));
}

#[test]
fn sphere_metric_at_sixty_degrees() {
    let g = chart("sphere2").metric_at(&Point::new([FRAC_PI_3, 0.0])).unwrap();
    assert_abs_diff_eq!(g[(0, 0)], 1.0);
    assert_abs_diff_eq!(g[(1, 1)], 0.75, epsilon = 1e-15);
}

#[test]
fn out_of_box_point_is_rejected() {
    let err = chart("euclidean4").metric_at(&Point::new([0.0, 0.0, 0.0, 1e3])).unwrap_err();
    assert!(matches!(err, GeomError::OutOfDomain { .. }));
}

#[test]
fn degenerate_metric_is_rejected() {
    let c = MetricChart::new("degenerate", MetricExpr::Diagonal { diag: vec![1.0, 0.0] }, Domain::Everywhere);
    let err = c.metric_at(&Point::new([0.0, 0.0])).unwrap_err();
    assert!(matches!(err, GeomError::DegenerateMetric { .. }));
}

#[test]
fn flat_christoffels_vanish() {
    let gamma = chart("euclidean4").christoffel_at(&Point::new([1.0, 2.0, 3.0, 4.0])).unwrap();
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(gamma.get(k, i, j), 0.0);
            }
        }
    }
}

#[test]
fn sphere_christoffels_closed_form() {
    let t = FRAC_PI_3;
    let gamma = chart("sphere2").christoffel_at(&Point::new([t, 0.0])).unwrap();
    assert_abs_diff_eq!(gamma.get(0, 1, 1), -t.sin() * t.cos(), epsilon = 1e-14);
    assert_abs_diff_eq!(gamma.get(0, 1, 1), -0.433_012_701_892_219_3, epsilon = 1e-12);
    assert_abs_diff_eq!(gamma.get(1, 0, 1), 1.0 / t.tan(), epsilon = 1e-14);
    assert_abs_diff_eq!(gamma.get(1, 1, 0), 0.577_350_269_189_625_7, epsilon = 1e-12);
    assert_abs_diff_eq!(gamma.get(0, 0, 0), 0.0);
    assert_abs_diff_eq!(gamma.get(1, 1, 1), 0.0);
}

#[test]
fn conformal_christoffels() {
    // g = e^{2x₁}δ: Γ^k_ij = δ_ki ∂_j u + δ_kj ∂_i u − δ_ij ∂_k u with u = x₁.
    let gamma = chart("conformal2").christoffel_at(&Point::new([0.0, 0.0])).unwrap();
    assert_abs_diff_eq!(gamma.get(0, 0, 0), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(gamma.get(0, 1, 1), -1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(gamma.get(1, 0, 1), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(gamma.get(1, 1, 0), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(gamma.get(1, 0, 0), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(gamma.get(1, 1, 1), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(gamma.get(0, 0, 1), 0.0, epsilon = 1e-15);
}

#[test]
fn covariant_derivative_examples() {
    let c = chart("euclidean4");
    let p = Point::new([0.0; 4]);
    let d = c.covariant_derivative_at(&ConstantField(unit(4, 1)), &tv(&p, &unit(4, 0))).unwrap();
    assert_eq!(d.components, vec![0.0; 4]);

    // F(x) = x₂ e₁ differentiated along e₂
    let mut a = Mat::zeros(4, 4);
    a[(0, 1)] = 1.0;
    let field = AffineField { offset: vec![0.0; 4], linear: a };
    let d = c.covariant_derivative_at(&field, &tv(&p, &unit(4, 1))).unwrap();
    assert_eq!(d.components, unit(4, 0));

    let s = chart("sphere2");
    let p = Point::new([FRAC_PI_3, 0.3]);
    let d = s.covariant_derivative_at(&ConstantField(vec![0.0, 1.0]), &tv(&p, &[1.0, 0.0])).unwrap();
    assert_abs_diff_eq!(d.components[0], 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(d.components[1], 1.0 / FRAC_PI_3.tan(), epsilon = 1e-14);
}

#[test]
fn riemann_examples() {
    let c = chart("euclidean4");
    let p = Point::new([0.2, 0.1, -0.5, 1.0]);
    let v = [
        tv(&p, &[1.0, 2.0, 0.0, -1.0]),
        tv(&p, &[0.0, 1.0, 3.0, 0.5]),
        tv(&p, &[2.0, 0.0, 1.0, 1.0]),
        tv(&p, &[-1.0, 1.0, 1.0, 0.0]),
    ];
    assert_eq!(c.riemann_at(&p, &v[0], &v[1], &v[2], &v[3]).unwrap(), 0.0);

    let s = chart("sphere2_r2");
    let p = Point::new([1.1, 0.4]);
    let g = s.metric_at(&p).unwrap();
    let x = tv(&p, &[1.0 / g[(0, 0)].sqrt(), 0.0]);
    let y = tv(&p, &[0.0, 1.0 / g[(1, 1)].sqrt()]);
    assert_abs_diff_eq!(s.riemann_at(&p, &x, &y, &y, &x).unwrap(), 0.25, epsilon = 1e-12);
    assert_abs_diff_eq!(s.riemann_at(&p, &x, &x, &y, &x).unwrap(), 0.0, epsilon = 1e-15);
}

#[test]
fn sectional_examples() {
    let s = chart("sphere2");
    let p = Point::new([0.8, 2.0]);
    let x = tv(&p, &[0.3, 1.0]);
    let y = tv(&p, &[1.0, -0.2]);
    assert_abs_diff_eq!(s.sectional_at(&p, &x, &y).unwrap(), 1.0, epsilon = 1e-8);
    let y2 = tv(&p, &[0.6, 2.0]);
    assert!(matches!(s.sectional_at(&p, &x, &y2), Err(GeomError::DegeneratePlane { .. })));

    let e = chart("euclidean4");
    let q = Point::new([0.0; 4]);
    assert_eq!(e.sectional_at(&q, &tv(&q, &unit(4, 0)), &tv(&q, &unit(4, 2))).unwrap(), 0.0);
}

#[test]
fn gram_schmidt_examples() {
    let e = chart("euclidean4");
    let p = Point::new([0.0; 4]);
    let f = e.gram_schmidt(&p, &[tv(&p, &unit(4, 0)), tv(&p, &[1.0, 1.0, 0.0, 0.0])]).unwrap();
    assert_eq!(f.vectors, vec![unit(4, 0), unit(4, 1)]);

    let f = e.gram_schmidt(&p, &[tv(&p, &unit(4, 0)), tv(&p, &[2.0, 0.0, 0.0, 0.0])]).unwrap();
    assert_eq!(f.vectors, vec![unit(4, 0)]);

    let d = chart("diag_4_1");
    let q = Point::new([0.0, 0.0]);
    let f = d.gram_schmidt(&q, &[tv(&q, &[1.0, 0.0])]).unwrap();
    assert_eq!(f.vectors, vec![vec![0.5, 0.0]]);

    let f = e.gram_schmidt(&p, &[tv(&p, &[0.0; 4])]).unwrap();
    assert!(f.is_empty());
}

#[test]
fn pivoted_gram_schmidt_prefers_largest_residual() {
    let g = Mat::identity(3);
    let cands = vec![vec![0.1, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 2.0]];
    let basis = pivoted_gram_schmidt(&g, &cands, 2);
    assert_eq!(basis, vec![unit(3, 1), unit(3, 2)]);
}

// Random points inside each chart's interior.
fn chart_point(name: &'static str) -> impl Strategy<Value = (MetricChart, Vec<f64>)> {
    let c = chart(name);
    let n = c.dim();
    let ranges: Vec<(f64, f64)> = match name {
        "sphere2" | "sphere2_r2" => vec![(0.3, 2.8), (-3.0, 3.0)],
        "sphere3" => vec![(0.2, 1.37), (0.0, 6.0), (0.0, 6.0)],
        "hp2_chart" => vec![(-1.0, 1.0); 8],
        "conformal2" => vec![(-1.0, 1.0); 2],
        _ => vec![(-2.0, 2.0); n],
    };
    ranges
        .into_iter()
        .map(|(lo, hi)| lo..hi)
        .collect::<Vec<_>>()
        .prop_map(move |x| (c.clone(), x))
}

fn any_chart_point() -> impl Strategy<Value = (MetricChart, Vec<f64>)> {
    prop_oneof![
        chart_point("euclidean4"),
        chart_point("sphere2"),
        chart_point("sphere2_r2"),
        chart_point("sphere3"),
        chart_point("conformal2"),
        chart_point("hp2_chart"),
    ]
}

fn vectors(n: usize, count: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(-1.0..1.0_f64, n), count)
}

fn chart_point_vectors(count: usize) -> impl Strategy<Value = (MetricChart, Vec<f64>, Vec<Vec<f64>>)> {
    any_chart_point().prop_flat_map(move |(c, x)| {
        let n = c.dim();
        (Just(c), Just(x), vectors(n, count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn christoffels_are_symmetric((c, x) in any_chart_point()) {
        let gamma = c.christoffel_at(&Point::new(x)).unwrap();
        let n = c.dim();
        for k in 0..n { for i in 0..n { for j in 0..n {
            prop_assert_eq!(gamma.get(k, i, j), gamma.get(k, j, i));
        }}}
    }

    #[test]
    fn curvature_symmetries_and_bianchi((c, x, v) in chart_point_vectors(4)) {
        let r = c.curvature_at(&Point::new(x)).unwrap();
        let (a, b, cc, d) = (&v[0], &v[1], &v[2], &v[3]);
        let base = r.eval(a, b, cc, d);
        let scale = 1e-7 * r.max_abs().max(1.0);
        prop_assert!((base + r.eval(b, a, cc, d)).abs() < scale);
        prop_assert!((base + r.eval(a, b, d, cc)).abs() < scale);
        prop_assert!((base - r.eval(cc, d, a, b)).abs() < scale);
        let bianchi = r.eval(a, b, cc, d) + r.eval(b, cc, a, d) + r.eval(cc, a, b, d);
        prop_assert!(bianchi.abs() < scale);
    }

    #[test]
    fn connection_is_metric_compatible((c, x, v) in chart_point_vectors(5)) {
        let n = c.dim();
        let lin = |k: usize| Mat::from_fn(n, n, |i, j| v[k][(i * 3 + j) % n] * 0.5);
        let f = AffineField { offset: v[0].clone(), linear: lin(1) };
        let h = AffineField { offset: v[2].clone(), linear: lin(3) };
        let dir = &v[4];
        // X(g(F,H)) via autodiff of the scalar function
        let xd = crate::autodiff::seed(&x, dir);
        let gd = c.metric.eval(&xd);
        let lhs = gd.bilinear(&f.eval(&xd), &h.eval(&xd)).eps;
        let g = c.metric.eval(&x);
        let nf = covariant_derivative(&c.metric, &f, &x, dir).unwrap();
        let nh = covariant_derivative(&c.metric, &h, &x, dir).unwrap();
        let rhs = g.bilinear(&nf, &h.eval(&x)) + g.bilinear(&f.eval(&x), &nh);
        prop_assert!((lhs - rhs).abs() < 1e-7 * lhs.abs().max(1.0));
    }

    #[test]
    fn autodiff_matches_finite_differences((c, x) in any_chart_point()) {
        let n = c.dim();
        let gamma = christoffel(&c.metric, &x).unwrap();
        let fd = fd_christoffel(&c.metric, &x, 1e-5);
        for k in 0..n { for i in 0..n { for j in 0..n {
            prop_assert!((gamma.get(k, i, j) - fd[(k * n + i) * n + j]).abs() < 1e-4);
        }}}
        let r = RiemannTensor::compute(&c.metric, &x).unwrap();
        let fdr = fd_riemann(&c.metric, &x, 1e-5);
        for i in 0..n { for j in 0..n { for k in 0..n { for l in 0..n {
            prop_assert!((r.component(i, j, k, l) - fdr[((i * n + j) * n + k) * n + l]).abs() < 1e-4);
        }}}}
    }

    #[test]
    fn riemann_is_multilinear((c, x, v) in chart_point_vectors(5), s in -2.0..2.0_f64, t in -2.0..2.0_f64) {
        let r = c.curvature_at(&Point::new(x)).unwrap();
        let mix: Vec<f64> = v[0].iter().zip(&v[4]).map(|(a, b)| s * a + t * b).collect();
        let lhs = r.eval(&mix, &v[1], &v[2], &v[3]);
        let rhs = s * r.eval(&v[0], &v[1], &v[2], &v[3]) + t * r.eval(&v[4], &v[1], &v[2], &v[3]);
        prop_assert!((lhs - rhs).abs() < 1e-9 * r.max_abs().max(1.0));
        let lhs = r.eval(&v[1], &v[2], &v[3], &mix);
        let rhs = s * r.eval(&v[1], &v[2], &v[3], &v[0]) + t * r.eval(&v[1], &v[2], &v[3], &v[4]);
        prop_assert!((lhs - rhs).abs() < 1e-9 * r.max_abs().max(1.0));
    }

    #[test]
    fn sectional_is_basis_invariant((c, x, v) in chart_point_vectors(2), a in 0.5..2.0_f64, b in -1.0..1.0_f64) {
        let p = Point::new(x);
        let g = c.metric_at(&p).unwrap();
        let r = c.curvature_at(&p).unwrap();
        let Ok(k1) = sectional(&g, &r, &v[0], &v[1]) else { return Ok(()) };
        let y2: Vec<f64> = v[0].iter().zip(&v[1]).map(|(p, q)| b * p + a * q).collect();
        let k2 = sectional(&g, &r, &v[0], &y2).unwrap();
        prop_assert!((k1 - k2).abs() < 1e-7 * k1.abs().max(1.0));
    }
}
