use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use oneill_core::identities::{CReading, IdentityId, IdentityResidualReport};
use oneill_core::inequalities::{EqualityFlags, TheoremId, TheoremSummary, TheoremVerdict};
use oneill_core::quat::CEstimate;
use serde::Serialize;

use crate::config::{OutputFormat, Tolerances};
use crate::error::{LabError, LabResult};

pub const CONVENTIONS: &str = "R(X,Y)Z = ∇_X∇_YZ − ∇_Y∇_XZ − ∇_[X,Y]Z, R(X,Y,Z,W) = g(R(X,Y)Z,W), unit sphere R(X,Y,Y,X) = +1; \
slack ≥ 0 means the inequality holds; τ̂, τ*, Ric sums run over ordered frame pairs";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub artifact_version: String,
    pub scenario: String,
    pub kind: String,
    pub seed: u64,
    pub points: usize,
    pub r: Option<usize>,
    pub ell: Option<usize>,
    pub space_form_c: Option<f64>,
    pub theorems: Vec<TheoremId>,
    pub identities: Vec<IdentityId>,
    pub random_units: Option<usize>,
    pub tolerances: Tolerances,
    pub conventions: String,
}

/// Quaternionic structure checks over the sampled points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub triple: String,
    pub axioms_max_defect: f64,
    pub axioms_pass: bool,
    pub parallelism_max_residual: f64,
    pub parallelism_pass: bool,
    /// Only for submersions declared anti-invariant.
    pub anti_invariance_max_defect: Option<f64>,
    pub anti_invariance_pass: Option<bool>,
    /// Only for manifold scenarios.
    pub c_estimate: Option<CEstimate>,
    pub c_estimate_pass: Option<bool>,
}

impl StructureReport {
    pub fn pass(&self) -> bool {
        self.axioms_pass
            && self.parallelism_pass
            && self.anti_invariance_pass.unwrap_or(true)
            && self.c_estimate_pass.unwrap_or(true)
    }
}

/// A reported quantity that does not decide the exit status.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub identity_id: IdentityId,
    pub reading: CReading,
    pub max_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedCheck {
    pub name: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointError {
    pub index: usize,
    pub point: Vec<f64>,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub point_index: usize,
    #[serde(flatten)]
    pub verdict: TheoremVerdict,
}

/// The full outcome of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub metadata: Metadata,
    pub structure: Option<StructureReport>,
    pub identity_reports: Vec<IdentityResidualReport>,
    pub diagnostics: Vec<Diagnostic>,
    pub skipped: Vec<SkippedCheck>,
    pub verdicts: Vec<VerdictRecord>,
    /// Reason per theorem that was not applicable at some point.
    pub not_applicable: BTreeMap<TheoremId, String>,
    pub point_errors: Vec<PointError>,
    pub summary: Vec<TheoremSummary>,
    pub exit_status: u8,
}

impl ReportDocument {
    pub fn summary_for(&self, id: TheoremId) -> Option<&TheoremSummary> {
        self.summary.iter().find(|s| s.id == id)
    }

    pub fn identity(&self, id: IdentityId) -> Option<&IdentityResidualReport> {
        self.identity_reports.iter().find(|r| r.identity_id == id)
    }
}

pub const CSV_HEADER: &[&str] = &[
    "id",
    "point_index",
    "point",
    "unit",
    "lhs",
    "rhs",
    "slack",
    "tolerance",
    "holds",
    "equality",
    "equality_consistent",
    "totally_geodesic",
    "umbilical",
    "horizontal_integrable",
    "chen_vertical",
    "chen_horizontal",
    "umbilical_diag",
    "norm_balance_th",
    "norm_balance_tv",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn flag_cells(f: &EqualityFlags) -> [bool; 8] {
    [
        f.totally_geodesic,
        f.umbilical,
        f.horizontal_integrable,
        f.chen_vertical,
        f.chen_horizontal,
        f.umbilical_diag,
        f.norm_balance_th,
        f.norm_balance_tv,
    ]
}

fn csv_error(e: impl std::fmt::Display) -> LabError {
    LabError::Io { path: "<csv>".into(), message: e.to_string() }
}

/// One row per verdict.
pub fn to_csv(doc: &ReportDocument) -> LabResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for rec in &doc.verdicts {
        let v = &rec.verdict;
        let point = v.point.iter().map(|x| fmt_float(*x)).collect::<Vec<_>>().join(" ");
        let unit = serde_json::to_string(&v.unit).map_err(csv_error)?;
        let mut row = vec![
            v.id.to_string(),
            rec.point_index.to_string(),
            point,
            unit,
            fmt_float(v.lhs),
            fmt_float(v.rhs),
            fmt_float(v.slack),
            fmt_float(v.tolerance),
            v.holds.to_string(),
            v.equality.to_string(),
            v.equality_consistent.to_string(),
        ];
        row.extend(flag_cells(&v.flags).iter().map(bool::to_string));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.into_inner().map_err(csv_error)
}

pub fn to_json(doc: &ReportDocument) -> LabResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(doc).map_err(|e| LabError::Io { path: "<json>".into(), message: e.to_string() })?;
    out.push(b'\n');
    Ok(out)
}

pub fn emit_report(doc: &ReportDocument, format: OutputFormat) -> LabResult<Vec<u8>> {
    match format {
        OutputFormat::Json => to_json(doc),
        OutputFormat::Csv => to_csv(doc),
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn write_report(bytes: &[u8], path: Option<&Path>) -> LabResult<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| LabError::Io { path: dir.into(), message: e.to_string() })?;
            }
            std::fs::write(p, bytes).map_err(|e| LabError::Io { path: p.into(), message: e.to_string() })
        }
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| LabError::Io { path: "<stdout>".into(), message: e.to_string() }),
    }
}
