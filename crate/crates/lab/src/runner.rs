//! Orchestration: sampling, per-point evaluation in parallel, and a
//! deterministic reduction in point order.

use std::collections::BTreeMap;

use oneill_core::geom::{sample_in_box, Point};
use oneill_core::identities::{
    distribution_curvatures, identity_residual, master_identity, CReading, IdentityId, IdentityResidualReport,
    PointGeometry,
};
use oneill_core::inequalities::{
    evaluate_point, point_seed, summarize, unit_choices, PointOutcome, Skipped, TheoremCatalog, TheoremId,
};
use oneill_core::quat::{check_parallelism, check_structure_axioms, estimate_c, QuaternionicTriple};
use oneill_core::submersion::{check_anti_invariant, SubmersionScenario};
use oneill_core::tolerances;
use rayon::prelude::*;

use crate::config::{ManifoldScenario, ScenarioConfig, ScenarioSource, Tolerances};
use crate::error::{LabError, LabResult};
use crate::report::{
    Diagnostic, Metadata, PointError, ReportDocument, SkippedCheck, StructureReport, VerdictRecord, CONVENTIONS,
};

/// Environment variable capping the worker count; `0` or unset means auto.
pub const THREADS_ENV: &str = "ONEILL_LAB_THREADS";
/// Parallelism fit residual below which a triple counts as parallel.
const PARALLELISM_TOL: f64 = 1e-7;
/// Allowed spread of the quaternionic sectional curvature estimate.
const C_SPREAD_TOL: f64 = 1e-5;

fn thread_count() -> usize {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

fn in_pool<T: Send>(f: impl FnOnce() -> T + Send) -> LabResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| LabError::Io { path: "<thread pool>".into(), message: e.to_string() })?;
    Ok(pool.install(f))
}

#[derive(Debug)]
struct PointRecord {
    index: usize,
    point: Vec<f64>,
    axioms: Option<f64>,
    parallelism: Option<f64>,
    anti_invariance: Option<f64>,
    residuals: Vec<(IdentityId, f64)>,
    master_summed: Option<f64>,
    outcome: Option<PointOutcome>,
    errors: Vec<String>,
}

impl PointRecord {
    fn new(index: usize, p: &Point) -> Self {
        Self {
            index,
            point: p.coords().to_vec(),
            axioms: None,
            parallelism: None,
            anti_invariance: None,
            residuals: Vec::new(),
            master_summed: None,
            outcome: None,
            errors: Vec::new(),
        }
    }
}

/// Identities that can run on `s`, and the skipped ones with reasons.
fn runnable_identities(s: &SubmersionScenario, wanted: &[IdentityId]) -> (Vec<IdentityId>, Vec<SkippedCheck>) {
    let mut run = Vec::new();
    let mut skipped = Vec::new();
    for &id in wanted {
        if id.needs_c() && (s.space_form_c.is_none() || s.triple.is_none()) {
            skipped.push(SkippedCheck {
                name: id.to_string(),
                reason: "needs a space-form constant and a quaternionic triple".into(),
            });
        } else {
            run.push(id);
        }
    }
    (run, skipped)
}

fn evaluate_submersion_point(
    s: &SubmersionScenario,
    triple: Option<&QuaternionicTriple>,
    cfg: &ScenarioConfig,
    identities: &[IdentityId],
    index: usize,
    p: &Point,
) -> PointRecord {
    let mut rec = PointRecord::new(index, p);
    let geo = match PointGeometry::new(s, p) {
        Ok(g) => g,
        Err(e) => {
            rec.errors.push(e.to_string());
            return rec;
        }
    };
    if let Some(t) = triple {
        match check_structure_axioms(t, p) {
            Ok(a) => rec.axioms = Some(a.max_defect),
            Err(e) => rec.errors.push(format!("structure axioms: {e}")),
        }
        match check_parallelism(t, p) {
            Ok(k) => rec.parallelism = Some(k.residual),
            Err(e) => rec.errors.push(format!("parallelism: {e}")),
        }
        if s.declared.anti_invariant {
            match check_anti_invariant(s, p, &geo.sample.frames) {
                Ok(a) => rec.anti_invariance = Some(a.defect),
                Err(e) => rec.errors.push(format!("anti-invariance: {e}")),
            }
        }
    }
    for &id in identities {
        match identity_residual(id, s, &geo) {
            Ok(r) => rec.residuals.push((id, r)),
            Err(e) => rec.errors.push(format!("{id}: {e}")),
        }
        if id == IdentityId::Master347 {
            let dc = distribution_curvatures(&geo, |x, y, z, w| geo.ambient(x, y, z, w));
            if let Ok(m) = master_identity(s, &geo, &dc) {
                rec.master_summed = Some(m.residual(CReading::SummedOverFrame));
            }
        }
    }
    if !cfg.theorems.is_empty() {
        let units = unit_choices(s.r(), s.ell(), cfg.random_units, point_seed(cfg.seed, index));
        let mut outcome = evaluate_point(s, index, p, &cfg.theorems, &units);
        if let Some(e) = outcome.error.take() {
            rec.errors.push(format!("theorems: {e}"));
        }
        rec.outcome = Some(outcome);
    }
    rec
}

fn apply_slack_tolerances(outcome: &mut PointOutcome, tol: &Tolerances, catalog: &TheoremCatalog) {
    for v in &mut outcome.verdicts {
        v.tolerance = if catalog.get(v.id).uses_delta { tol.slack_field } else { tol.slack_algebraic };
        v.holds = v.slack >= -v.tolerance;
    }
}

fn metadata(cfg: &ScenarioConfig) -> Metadata {
    let (kind, r, ell, c) = match &cfg.scenario {
        ScenarioSource::Submersion(s) => ("submersion", Some(s.r()), Some(s.ell()), s.space_form_c),
        ScenarioSource::Manifold(_) => ("manifold", None, None, None),
    };
    Metadata {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: cfg.scenario.name().to_string(),
        kind: kind.to_string(),
        seed: cfg.seed,
        points: cfg.points,
        r,
        ell,
        space_form_c: c,
        theorems: cfg.theorems.clone(),
        identities: cfg.identities.clone(),
        random_units: cfg.random_units,
        tolerances: cfg.tolerances.clone(),
        conventions: CONVENTIONS.to_string(),
    }
}

fn max_of(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0_f64, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

fn exit_status(doc: &ReportDocument) -> u8 {
    let structure_ok = doc.structure.as_ref().map_or(true, StructureReport::pass);
    let identities_ok = doc.identity_reports.iter().all(|r| r.pass);
    let verdicts_ok = doc.verdicts.iter().all(|v| v.verdict.holds && v.verdict.equality_consistent);
    u8::from(!(structure_ok && identities_ok && verdicts_ok))
}

fn run_submersion(cfg: &ScenarioConfig, s: &SubmersionScenario) -> LabResult<ReportDocument> {
    let points = s.sample_points(cfg.points, cfg.seed)?;
    let triple = match &s.triple {
        Some(_) => Some(s.quaternionic_triple()?),
        None => None,
    };
    let (identities, skipped) = runnable_identities(s, &cfg.identities);
    let records: Vec<PointRecord> = in_pool(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(k, p)| evaluate_submersion_point(s, triple.as_ref(), cfg, &identities, k, p))
            .collect()
    })?;

    let failed = |r: &PointRecord| r.residuals.is_empty() && r.outcome.is_none() && !r.errors.is_empty();
    if records.iter().all(failed) {
        let first = records.first().and_then(|r| r.errors.first()).cloned().unwrap_or_default();
        return Err(LabError::AllPointsFailed { scenario: s.name.clone(), first });
    }

    let structure = triple.as_ref().map(|t| {
        let axioms = max_of(records.iter().filter_map(|r| r.axioms));
        let parallel = max_of(records.iter().filter_map(|r| r.parallelism));
        let anti = s.declared.anti_invariant.then(|| max_of(records.iter().filter_map(|r| r.anti_invariance)));
        StructureReport {
            triple: t.name.clone(),
            axioms_max_defect: axioms,
            axioms_pass: axioms < tolerances::STRUCTURE,
            parallelism_max_residual: parallel,
            parallelism_pass: parallel < PARALLELISM_TOL,
            anti_invariance_max_defect: anti,
            anti_invariance_pass: anti.map(|d| d < tolerances::STRUCTURE),
            c_estimate: None,
            c_estimate_pass: None,
        }
    });

    let mut identity_reports = Vec::new();
    let mut diagnostics = Vec::new();
    for &id in &identities {
        let tol = cfg.tolerances.identity(id);
        let residuals: Vec<f64> =
            records.iter().flat_map(|r| r.residuals.iter().filter(|(i, _)| *i == id).map(|(_, v)| *v)).collect();
        let report = IdentityResidualReport::from_residuals(id, tol, &residuals);
        if id.is_diagnostic() {
            let summed: Vec<f64> = records.iter().filter_map(|r| r.master_summed).collect();
            for (reading, values) in [(CReading::FixedX1, residuals.clone()), (CReading::SummedOverFrame, summed)] {
                let max_residual = max_of(values.iter().copied());
                diagnostics.push(Diagnostic {
                    identity_id: id,
                    reading,
                    max_residual,
                    samples: values.len(),
                    tolerance: tol,
                    within_tolerance: max_residual < tol,
                });
            }
        } else {
            identity_reports.push(report);
        }
    }

    let catalog = TheoremCatalog::standard();
    let mut outcomes: Vec<PointOutcome> = Vec::new();
    let mut point_errors = Vec::new();
    for mut r in records {
        for e in r.errors.drain(..) {
            point_errors.push(PointError { index: r.index, point: r.point.clone(), error: e });
        }
        if let Some(mut o) = r.outcome.take() {
            apply_slack_tolerances(&mut o, &cfg.tolerances, &catalog);
            outcomes.push(o);
        }
    }
    let summary = summarize(&cfg.theorems, &outcomes);
    let mut not_applicable = BTreeMap::new();
    let mut verdicts = Vec::new();
    for o in outcomes {
        for na in o.not_applicable {
            not_applicable.entry(na.id).or_insert(na.reason);
        }
        verdicts.extend(o.verdicts.into_iter().map(|verdict| VerdictRecord { point_index: o.index, verdict }));
    }

    let mut doc = ReportDocument {
        metadata: metadata(cfg),
        structure,
        identity_reports,
        diagnostics,
        skipped,
        verdicts,
        not_applicable,
        point_errors,
        summary,
        exit_status: 0,
    };
    doc.exit_status = exit_status(&doc);
    Ok(doc)
}

fn run_manifold(cfg: &ScenarioConfig, m: &ManifoldScenario) -> LabResult<ReportDocument> {
    let points = sample_in_box(&m.name, &m.sampling_box, cfg.points, cfg.seed, |x| m.chart.domain.contains(x))?;
    let checks: Vec<(f64, f64)> = in_pool(|| {
        points
            .par_iter()
            .map(|p| {
                let a = check_structure_axioms(&m.triple, p).map_or(f64::INFINITY, |a| a.max_defect);
                let k = check_parallelism(&m.triple, p).map_or(f64::INFINITY, |k| k.residual);
                (a, k)
            })
            .collect()
    })?;
    let axioms = max_of(checks.iter().map(|c| c.0));
    let parallel = max_of(checks.iter().map(|c| c.1));
    let subset = &points[..points.len().min(10)];
    let (c_estimate, c_pass) = match estimate_c(&m.chart, &m.triple, subset, 10, cfg.seed) {
        Ok(est) => {
            let pass = est.spread < C_SPREAD_TOL;
            (Some(est), Some(pass))
        }
        Err(_) => (None, Some(false)),
    };
    let structure = StructureReport {
        triple: m.triple.name.clone(),
        axioms_max_defect: axioms,
        axioms_pass: axioms < tolerances::STRUCTURE,
        parallelism_max_residual: parallel,
        parallelism_pass: parallel < PARALLELISM_TOL,
        anti_invariance_max_defect: None,
        anti_invariance_pass: None,
        c_estimate,
        c_estimate_pass: c_pass,
    };
    let reason = format!("`{}` has no submersion", m.name);
    let skipped = cfg
        .identities
        .iter()
        .map(|id| SkippedCheck { name: id.to_string(), reason: reason.clone() })
        .collect();
    let not_applicable: BTreeMap<TheoremId, String> = cfg.theorems.iter().map(|&id| (id, reason.clone())).collect();
    let outcomes: Vec<PointOutcome> = points
        .iter()
        .enumerate()
        .map(|(index, p)| PointOutcome {
            index,
            point: p.coords().to_vec(),
            verdicts: Vec::new(),
            not_applicable: cfg
                .theorems
                .iter()
                .map(|&id| Skipped { id, reason: reason.clone() })
                .collect(),
            error: None,
        })
        .collect();
    let mut doc = ReportDocument {
        metadata: metadata(cfg),
        structure: Some(structure),
        identity_reports: Vec::new(),
        diagnostics: Vec::new(),
        skipped,
        verdicts: Vec::new(),
        not_applicable,
        point_errors: Vec::new(),
        summary: summarize(&cfg.theorems, &outcomes),
        exit_status: 0,
    };
    doc.exit_status = exit_status(&doc);
    Ok(doc)
}

/// Runs structure checks, identity residuals and theorem verdicts.
pub fn run_verify(cfg: &ScenarioConfig) -> LabResult<ReportDocument> {
    match &cfg.scenario {
        ScenarioSource::Submersion(s) => run_submersion(cfg, s),
        ScenarioSource::Manifold(m) => run_manifold(cfg, m),
    }
}

/// Runs everything except the theorem verdicts.
pub fn run_identities(cfg: &ScenarioConfig) -> LabResult<ReportDocument> {
    let mut cfg = cfg.clone();
    cfg.theorems.clear();
    run_verify(&cfg)
}
