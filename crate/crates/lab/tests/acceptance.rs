//! Acceptance run. Prints one `criterion N: PASS|FAIL` line per criterion
//! and fails if any criterion fails.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use oneill_core::geom::{builtin_chart, random_unit, Point, TangentVector};
use oneill_core::identities::synthetic::synthetic_cases;
use oneill_core::identities::{
    base_projection_residual, chen_frame_identity, chen_frame_identity_as_printed, distribution_scalars,
    gauss_vertical_residual, horizontal_residual, mixed_codazzi_residual, star_curvature_at, PointGeometry,
};
use oneill_core::inequalities::{scenario_report, TheoremId};
use oneill_core::quat::{builtin_triple, estimate_c, model_curvature, SpaceFormModel};
use oneill_core::submersion::{builtin_scenario, SubmersionScenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SUBMERSIONS: [&str; 5] = ["flat_linear_r1", "flat_linear_r2", "polar_circles", "hopf", "radial_spheres"];
const WITH_C: [&str; 3] = ["flat_linear_r1", "flat_linear_r2", "polar_circles"];
const BUDGET: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;

fn scenario(name: &str) -> SubmersionScenario {
    builtin_scenario(name).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn box_points(dim: usize, lo: f64, hi: f64, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::new((0..dim).map(|_| rng.gen_range(lo..hi)).collect::<Vec<_>>())).collect()
}

/// Sectional curvature of a random plane at each point.
fn sectional_range(chart: &str, points: &[Point], seed: u64) -> Result<(f64, f64), String> {
    let chart = builtin_chart(chart).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        let g = chart.metric_at(p).map_err(|e| e.to_string())?;
        let x = TangentVector::new(p.clone(), random_unit(&g, &mut rng));
        let y = TangentVector::new(p.clone(), random_unit(&g, &mut rng));
        let k = chart.sectional_at(p, &x, &y).map_err(|e| e.to_string())?;
        lo = lo.min(k);
        hi = hi.max(k);
    }
    Ok((lo, hi))
}

fn criterion_1() -> Outcome {
    let flat = builtin_chart("euclidean4").unwrap();
    let mut worst: f64 = 0.0;
    for p in box_points(4, -5.0, 5.0, 100, 1) {
        worst = worst.max(flat.curvature_at(&p).map_err(|e| e.to_string())?.max_abs());
    }
    ensure(worst < 1e-8, || format!("flat |R| = {worst:e}"))?;

    let sphere_points = box_points(2, 0.2, 2.9, 100, 2);
    let (lo, hi) = sectional_range("sphere2", &sphere_points, 3)?;
    ensure((lo - 1.0).abs() < 1e-6 && (hi - 1.0).abs() < 1e-6, || format!("unit sphere K in [{lo}, {hi}]"))?;
    let (lo2, hi2) = sectional_range("sphere2_r2", &sphere_points, 4)?;
    ensure((lo2 - 0.25).abs() < 1e-6 && (hi2 - 0.25).abs() < 1e-6, || format!("radius 2 sphere K in [{lo2}, {hi2}]"))?;
    Ok(format!("flat |R| ≤ {worst:.1e}, unit S² K ∈ [{lo:.9}, {hi:.9}], radius-2 S² K ∈ [{lo2:.9}, {hi2:.9}]"))
}

fn criterion_2() -> Outcome {
    let t = builtin_triple("hp2").unwrap();
    let points = box_points(8, -0.5, 0.5, 10, 5);
    let est = estimate_c(&t.chart, &t, &points, 10, 6).map_err(|e| e.to_string())?;
    ensure(est.spread < 1e-5, || format!("c spread {:e}", est.spread))?;
    let model = SpaceFormModel { c: est.mean };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let p = &points[k % points.len()];
        let g = t.chart.metric_at(p).map_err(|e| e.to_string())?;
        let r = t.chart.curvature_at(p).map_err(|e| e.to_string())?;
        let js = t.at(p).map_err(|e| e.to_string())?;
        let v: Vec<Vec<f64>> = (0..4).map(|_| random_unit(&g, &mut rng)).collect();
        let exact = r.eval(&v[0], &v[1], &v[2], &v[3]);
        let modeled = model_curvature(model, &g, &js, &v[0], &v[1], &v[2], &v[3]);
        worst = worst.max((exact - modeled).abs() / est.mean.abs().max(1.0));
    }
    ensure(worst < 1e-4, || format!("model mismatch {worst:e}"))?;
    Ok(format!("ĉ = {:.9}, spread {:.1e}, model relative error ≤ {worst:.1e} on 200 tuples", est.mean, est.spread))
}

fn criterion_3() -> Outcome {
    let mut gauss: f64 = 0.0;
    let mut codazzi: f64 = 0.0;
    let mut hopf_star: f64 = 0.0;
    for name in SUBMERSIONS {
        let s = scenario(name);
        for p in s.sample_points(100, 11).map_err(|e| e.to_string())? {
            let geo = PointGeometry::new(&s, &p).map_err(|e| format!("{name}: {e}"))?;
            let err = |e: oneill_core::GeomError| format!("{name} at {:?}: {e}", p.coords());
            gauss = gauss.max(gauss_vertical_residual(&s, &geo).map_err(err)?);
            gauss = gauss.max(horizontal_residual(&s, &geo).map_err(err)?);
            codazzi = codazzi.max(mixed_codazzi_residual(&s, &geo).map_err(err)?);
            codazzi = codazzi.max(base_projection_residual(&s, &geo).map_err(err)?);
            if name == "hopf" {
                let k = star_curvature_at(&geo, 0, 1, 1, 0).map_err(err)?;
                hopf_star = hopf_star.max((k - 4.0).abs());
            }
        }
    }
    ensure(gauss < 1e-7, || format!("Gauss residual {gauss:e}"))?;
    ensure(codazzi < 1e-4, || format!("Codazzi residual {codazzi:e}"))?;
    ensure(hopf_star < 1e-6, || format!("Hopf R* off by {hopf_star:e}"))?;
    Ok(format!(
        "Gauss/horizontal ≤ {gauss:.1e}, Codazzi/base ≤ {codazzi:.1e} over 5 scenarios × 100 points, |R* − 4| ≤ {hopf_star:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let r = rng.gen_range(1..=5);
        let ell = rng.gen_range(1..=4);
        let mut t = vec![vec![vec![0.0; ell]; r]; r];
        for i in 0..r {
            for j in 0..=i {
                for s in 0..ell {
                    let v = rng.gen_range(-3.0..3.0);
                    t[i][j][s] = v;
                    t[j][i][s] = v;
                }
            }
        }
        worst = worst.max(chen_frame_identity(&t).map_err(|e| e.to_string())?);
    }
    ensure(worst < 1e-10, || format!("corrected form residual {worst:e}"))?;
    let id3: Vec<Vec<Vec<f64>>> =
        (0..3).map(|i| (0..3).map(|j| vec![if i == j { 1.0 } else { 0.0 }]).collect()).collect();
    let printed = chen_frame_identity_as_printed(&id3).map_err(|e| e.to_string())?;
    ensure((printed - 0.5).abs() < 1e-12, || format!("printed form gives {printed}"))?;
    Ok(format!("corrected form ≤ {worst:.1e} on 1000 arrays, printed form gives {printed} on diag(1,1,1)"))
}

fn criterion_5() -> Outcome {
    let mut evaluated = 0;
    let mut min_slack = f64::INFINITY;
    let mut t2_err: f64 = 0.0;
    for name in WITH_C {
        let s = scenario(name);
        let report = scenario_report(&s, 100, 21, &TheoremId::ALL, None).map_err(|e| e.to_string())?;
        for v in report.verdicts() {
            evaluated += 1;
            min_slack = min_slack.min(v.slack);
            ensure(v.holds, || format!("{name}: {} fails at {:?} with slack {:e}", v.id, v.point, v.slack))?;
            if name == "polar_circles" && v.id == TheoremId::T2 {
                let inv = 1.0 / (v.point[0] * v.point[0] + v.point[1] * v.point[1]);
                t2_err = t2_err.max((v.slack - inv).abs());
            }
        }
        for o in &report.points {
            ensure(o.error.is_none(), || format!("{name}: {:?}", o.error))?;
        }
    }
    ensure(t2_err < 1e-6, || format!("polar T2 slack off 1/ρ² by {t2_err:e}"))?;
    Ok(format!("{evaluated} verdicts hold (min slack {min_slack:.1e}), polar T2 slack = 1/ρ² within {t2_err:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut strict = 0;
    for name in WITH_C {
        let s = scenario(name);
        let report = scenario_report(&s, 100, 22, &TheoremId::ALL, Some(3)).map_err(|e| e.to_string())?;
        let flat = name != "polar_circles";
        for v in report.verdicts() {
            checked += 1;
            let cond = v.flags.condition(v.equality_condition);
            ensure(v.equality == cond && v.equality_consistent, || {
                format!("{name}: {} equality {} but {:?} is {cond}", v.id, v.equality, v.equality_condition)
            })?;
            let first_four = matches!(v.id, TheoremId::T1 | TheoremId::T2 | TheoremId::T3 | TheoremId::T4);
            if flat && first_four {
                ensure(v.equality, || format!("{name}: {} strict at {:?}", v.id, v.point))?;
            }
            if !flat && matches!(v.id, TheoremId::T1 | TheoremId::T2) {
                ensure(!v.equality && !v.flags.totally_geodesic && v.slack > 0.0, || {
                    format!("{name}: {} not strict at {:?}", v.id, v.point)
                })?;
            }
            if !v.equality {
                strict += 1;
            }
        }
    }
    Ok(format!("{checked} verdicts, equality ⇔ condition at every one ({strict} strict)"))
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in WITH_C {
        let s = scenario(name);
        for p in s.sample_points(100, 31).map_err(|e| e.to_string())? {
            let geo = PointGeometry::new(&s, &p).map_err(|e| e.to_string())?;
            let d = distribution_scalars(&s, &geo).map_err(|e| e.to_string())?;
            worst = worst.max(d.route_discrepancy);
        }
    }
    ensure(worst < 1e-6, || format!("route discrepancy {worst:e}"))?;
    Ok(format!("route discrepancy ≤ {worst:.1e} over 3 scenarios × 100 points"))
}

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    for case in synthetic_cases(200, 41) {
        let f = &case.frame;
        worst = worst
            .max(f.anti_invariance_defect())
            .max(f.vertical_block_residual(case.c))
            .max(f.horizontal_block_residual(case.c, case.ell))
            .max(f.tau_residual(case.c));
    }
    ensure(worst < 1e-9, || format!("synthetic residual {worst:e}"))?;
    Ok(format!("200 synthetic configurations, worst residual {worst:.1e}"))
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run_lab(args: &[&str], threads: &str) -> Result<(Option<i32>, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_oneill-lab"))
        .args(args)
        .env("ONEILL_LAB_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code(), out.stdout))
}

fn criterion_9(started: Instant) -> Outcome {
    let polar = fixture("polar_small.json");
    let (code_a, a) = run_lab(&["verify", "-s", &polar], "1")?;
    let (code_b, b) = run_lab(&["verify", "-s", &polar], "2")?;
    ensure(code_a == Some(0) && code_b == Some(0), || format!("polar exit {code_a:?}/{code_b:?}"))?;
    ensure(a == b, || "reports differ between runs".into())?;
    let expected = [("broken_triple.json", 1), ("zero_points.json", 2), ("malformed.json", 2)];
    for (name, want) in expected {
        let (code, _) = run_lab(&["verify", "-s", &fixture(name)], "1")?;
        ensure(code == Some(want), || format!("{name}: exit {code:?}, expected {want}"))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("identical reports across thread counts, exit codes 0/1/2/2, {:.1}s total", elapsed.as_secs_f64()))
}

#[test]
fn acceptance_criteria() {
    let started = Instant::now();
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: Vec<(u32, Option<Duration>, Box<dyn Fn() -> Outcome>)> = vec![
        (1, secs(10), Box::new(criterion_1)),
        (2, secs(60), Box::new(criterion_2)),
        (3, None, Box::new(criterion_3)),
        (4, None, Box::new(criterion_4)),
        (5, None, Box::new(criterion_5)),
        (6, None, Box::new(criterion_6)),
        (7, None, Box::new(criterion_7)),
        (8, None, Box::new(criterion_8)),
        (9, None, Box::new(move || criterion_9(started))),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for (n, budget, check) in &criteria {
        let t0 = Instant::now();
        let mut outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = t0.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, budget) {
            if took > *limit {
                outcome = Err(format!("took {took:?}, budget {limit:?}"));
            }
        }
        let line = match &outcome {
            Ok(detail) => format!("criterion {n}: PASS {detail}"),
            Err(detail) => {
                failed.push(*n);
                format!("criterion {n}: FAIL {detail}")
            }
        };
        writeln!(stdout, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
