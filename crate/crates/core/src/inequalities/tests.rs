use approx::assert_abs_diff_eq;

use super::*;
use crate::error::GeomError;
use crate::geom::Point;
use crate::submersion::{assemble_sample, builtin_scenario, SubmersionScenario};

fn scenario(name: &str) -> SubmersionScenario {
    builtin_scenario(name).unwrap()
}

fn rho(p: &[f64]) -> f64 {
    p[0].hypot(p[1])
}

#[test]
fn catalog_lists_every_id_once() {
    let cat = TheoremCatalog::standard();
    assert_eq!(cat.entries.len(), TheoremId::ALL.len());
    for id in TheoremId::ALL {
        assert_eq!(cat.entries.iter().filter(|e| e.id == id).count(), 1, "{id}");
        assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
    }
    assert_eq!("t8A".parse::<TheoremId>().unwrap(), TheoremId::T8a);
    assert!(matches!("T99".parse::<TheoremId>(), Err(GeomError::UnknownTheorem(_))));
    let json = serde_json::to_string(&TheoremId::C2b).unwrap();
    assert_eq!(json, "\"C2b\"");
}

#[test]
fn flat_t1_example() {
    let s = scenario("flat_linear_r1");
    let v = evaluate_theorem(TheoremId::T1, &s, &Point::new(vec![0.3, -1.0, 0.5, 1.2]), 0).unwrap();
    assert_eq!(v.lhs, 0.0);
    assert_abs_diff_eq!(v.rhs, 0.0);
    assert!(v.equality && v.holds && v.flags.totally_geodesic && v.equality_consistent);
}

#[test]
fn polar_t2_example_at_rho_two() {
    let s = scenario("polar_circles");
    let v = evaluate_theorem(TheoremId::T2, &s, &Point::new(vec![2.0, 0.0, 0.3, -0.4]), 0).unwrap();
    assert_abs_diff_eq!(v.lhs, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(v.rhs, -0.25, epsilon = 1e-10);
    assert_abs_diff_eq!(v.slack, 0.25, epsilon = 1e-10);
    assert!(!v.equality && !v.flags.totally_geodesic && v.equality_consistent);
}

#[test]
fn polar_hand_slacks() {
    let s = scenario("polar_circles");
    let report = scenario_report(&s, 12, 7, &TheoremId::ALL, None).unwrap();
    for v in report.verdicts() {
        let inv = 1.0 / rho(&v.point).powi(2);
        let expected = match v.id {
            TheoremId::T1 | TheoremId::T2 | TheoremId::T9a | TheoremId::C2a | TheoremId::T10 => inv,
            TheoremId::T5 | TheoremId::T7 => 0.25 * inv,
            TheoremId::T9b | TheoremId::C2b | TheoremId::T11 => 2.0 * inv,
            _ => 0.0,
        };
        assert_abs_diff_eq!(v.slack, expected, epsilon = 1e-6);
        assert!(v.holds, "{} at {:?}", v.id, v.point);
        assert!(v.equality_consistent, "{} at {:?}: {:?}", v.id, v.point, v.flags);
    }
    for id in [TheoremId::C1a, TheoremId::C1b, TheoremId::C3] {
        let sum = report.summary_for(id).unwrap();
        assert_eq!(sum.evaluated, 0);
        assert_eq!(sum.not_applicable, 12);
    }
}

#[test]
fn flat_scenarios_are_equality_everywhere() {
    for name in ["flat_linear_r1", "flat_linear_r2"] {
        let s = scenario(name);
        let report = scenario_report(&s, 10, 3, &TheoremId::ALL, Some(3)).unwrap();
        for sum in &report.summary {
            assert_eq!(sum.not_applicable, 0, "{name} {}", sum.id);
            assert_eq!(sum.violations, 0);
            assert_eq!(sum.equality_points, sum.evaluated);
            assert_eq!(sum.consistency_rate, Some(1.0));
        }
    }
}

#[test]
fn hopf_is_not_applicable() {
    let s = scenario("hopf");
    let report = scenario_report(&s, 5, 1, &TheoremId::ALL, None).unwrap();
    assert_eq!(report.verdicts().count(), 0);
    assert!(report.summary.iter().all(|x| x.not_applicable == 5));
    let err = evaluate_theorem(TheoremId::T4, &s, &Point::new(report.points[0].point.clone()), 0).unwrap_err();
    assert!(matches!(err, GeomError::NotApplicable { ref theorem, .. } if theorem == "T4"));
}

#[test]
fn missing_c_is_an_error() {
    let mut s = scenario("flat_linear_r1");
    s.space_form_c = None;
    let err = evaluate_theorem(TheoremId::T2, &s, &Point::new(vec![0.0; 4]), 0).unwrap_err();
    assert!(matches!(err, GeomError::MissingC { .. }));
}

#[test]
fn scale_covariance_of_t1_t2() {
    let s = scenario("polar_circles");
    let points = s.sample_points(8, 11).unwrap();
    for lambda in [0.5_f64, 2.0] {
        let scaled = s.scaled(lambda * lambda);
        for p in &points {
            for id in [TheoremId::T1, TheoremId::T2] {
                let a = evaluate_theorem(id, &s, p, 0).unwrap();
                let b = evaluate_theorem(id, &scaled, p, 0).unwrap();
                let k = 1.0 / (lambda * lambda);
                assert_abs_diff_eq!(b.lhs, k * a.lhs, epsilon = 1e-9);
                assert_abs_diff_eq!(b.rhs, k * a.rhs, epsilon = 1e-9);
                assert_eq!((a.holds, a.equality), (b.holds, b.equality));
            }
        }
    }
}

#[test]
fn am_gm_weakens_the_t8_bounds() {
    for name in ["flat_linear_r1", "flat_linear_r2", "polar_circles"] {
        let s = scenario(name);
        let report = scenario_report(&s, 10, 5, &[TheoremId::T8a, TheoremId::T8b, TheoremId::T10, TheoremId::T11], None)
            .unwrap();
        for pt in &report.points {
            let slack = |id| pt.verdicts.iter().find(|v| v.id == id).unwrap().slack;
            assert!(slack(TheoremId::T10) >= slack(TheoremId::T8a) - 1e-7, "{name}");
            assert!(slack(TheoremId::T11) >= slack(TheoremId::T8b) - 1e-7, "{name}");
        }
    }
}

#[test]
fn equality_biconditionals_on_polar() {
    let s = scenario("polar_circles");
    let ids = [TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4, TheoremId::T6];
    let report = scenario_report(&s, 20, 9, &ids, Some(4)).unwrap();
    for v in report.verdicts() {
        let cond = v.flags.condition(v.equality_condition);
        assert_eq!(v.equality, cond, "{} at {:?}", v.id, v.point);
        match v.id {
            TheoremId::T1 | TheoremId::T2 => assert!(!v.equality && v.slack > 0.0),
            _ => assert!(v.equality),
        }
    }
}

#[test]
fn unit_sweep_covers_frames_and_random_units() {
    let units = unit_choices(2, 6, Some(20), 4);
    assert_eq!(units.len(), 26);
    assert_eq!(units[5], UnitChoice::Frame(5));
    assert_eq!(unit_choices(2, 6, Some(20), 4), units);
    assert_eq!(unit_choices(2, 6, None, 4), vec![UnitChoice::Frame(0)]);
    let s = scenario("flat_linear_r2");
    let p = s.sample_points(1, 2).unwrap().remove(0);
    let out = evaluate_point(&s, 0, &p, &[TheoremId::T3, TheoremId::T4], &units);
    assert_eq!(out.verdicts.iter().filter(|v| v.id == TheoremId::T3).count(), 26);
    assert_eq!(out.verdicts.iter().filter(|v| v.id == TheoremId::T4).count(), 1);
}

#[test]
fn flags_on_catalog_samples() {
    let flat = scenario("flat_linear_r1");
    let f = equality_flags_at(&assemble_sample(&flat, &Point::new(vec![1.0, 0.2, -0.3, 0.4])).unwrap());
    assert!(f.totally_geodesic && f.umbilical && f.horizontal_integrable);
    assert!(f.chen_vertical && f.chen_horizontal && f.umbilical_diag && f.norm_balance_th && f.norm_balance_tv);

    let polar = scenario("polar_circles");
    let f = equality_flags_at(&assemble_sample(&polar, &Point::new(vec![1.0, 1.0, 0.0, 0.0])).unwrap());
    assert!(!f.totally_geodesic && f.umbilical && !f.chen_vertical && f.umbilical_diag);

    let hopf = scenario("hopf");
    let f = equality_flags_at(&assemble_sample(&hopf, &Point::new(vec![0.7, 1.0, 2.0])).unwrap());
    assert!(!f.horizontal_integrable);
}

#[test]
fn alternative_readings_are_reported() {
    let s = scenario("polar_circles");
    let p = Point::new(vec![1.5, 0.5, 0.0, 0.0]);
    let t13 = evaluate_theorem(TheoremId::T13, &s, &p, 0).unwrap();
    let readings: Vec<&str> = t13.alternatives.iter().map(|a| a.reading.as_str()).collect();
    assert_eq!(readings, ["squared_norm_a_v", "c_term_summed_over_frame"]);
    let t6 = evaluate_theorem(TheoremId::T6, &s, &p, 0).unwrap();
    assert_eq!(t6.alternatives.len(), 3);
}
