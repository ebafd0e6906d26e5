use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, GeomResult};
use crate::geom::Point;
use crate::submersion::SubmersionScenario;

use super::catalog::{TheoremCatalog, TheoremId};
use super::evaluate::{verdict_from_terms, TheoremContext, TheoremVerdict, UnitChoice};

/// A theorem that was skipped at a point, with the reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub id: TheoremId,
    pub reason: String,
}

/// Every verdict at one sampled point, or the error that stopped it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointOutcome {
    pub index: usize,
    pub point: Vec<f64>,
    pub verdicts: Vec<TheoremVerdict>,
    pub not_applicable: Vec<Skipped>,
    pub error: Option<String>,
}

/// `Frame(0)` alone, or every frame index up to `max(r, ℓ)` followed by
/// `random` random unit pairs drawn from `seed`.
pub fn unit_choices(r: usize, ell: usize, random: Option<usize>, seed: u64) -> Vec<UnitChoice> {
    let Some(count) = random else {
        return vec![UnitChoice::Frame(0)];
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = |n: usize| loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (0.1..=1.0).contains(&len) {
            return v.into_iter().map(|x| x / len).collect::<Vec<f64>>();
        }
    };
    let mut out: Vec<UnitChoice> = (0..r.max(ell)).map(UnitChoice::Frame).collect();
    for _ in 0..count {
        let vertical = unit(r);
        let horizontal = unit(ell);
        out.push(UnitChoice::Random { vertical, horizontal });
    }
    out
}

fn not_applicable_all(ids: &[TheoremId], reason: &str) -> Vec<Skipped> {
    ids.iter().map(|&id| Skipped { id, reason: reason.to_string() }).collect()
}

/// Evaluates `ids` at one point. Single-vector theorems run once per unit
/// choice; the rest use the first choice only.
pub fn evaluate_point(
    s: &SubmersionScenario,
    index: usize,
    p: &Point,
    ids: &[TheoremId],
    units: &[UnitChoice],
) -> PointOutcome {
    let mut out = PointOutcome {
        index,
        point: p.coords().to_vec(),
        verdicts: Vec::new(),
        not_applicable: Vec::new(),
        error: None,
    };
    let ctx = match TheoremContext::new(s, p) {
        Ok(ctx) => ctx,
        Err(GeomError::NotApplicable { reason, .. }) => {
            out.not_applicable = not_applicable_all(ids, &reason);
            return out;
        }
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    let catalog = TheoremCatalog::standard();
    let default_unit = [UnitChoice::default()];
    let units = if units.is_empty() { &default_unit[..] } else { units };
    for (k, unit) in units.iter().enumerate() {
        let terms = match ctx.terms(unit) {
            Ok(t) => t,
            Err(e) => {
                out.error = Some(e.to_string());
                return out;
            }
        };
        for &id in ids {
            if k > 0 && !id.is_single_vector() {
                continue;
            }
            let entry = catalog.get(id);
            if !ctx.requirement_met(entry.requires) {
                if k == 0 {
                    out.not_applicable.push(Skipped { id, reason: format!("requires {:?}", entry.requires) });
                }
                continue;
            }
            out.verdicts.push(verdict_from_terms(entry, &terms, p.coords(), unit));
        }
    }
    out
}

/// Per-theorem aggregate over a set of point outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremSummary {
    pub id: TheoremId,
    pub evaluated: usize,
    pub not_applicable: usize,
    pub min_slack: Option<f64>,
    pub max_slack: Option<f64>,
    pub violations: usize,
    pub equality_points: usize,
    pub equality_consistent_points: usize,
    pub consistency_rate: Option<f64>,
}

pub fn summarize(ids: &[TheoremId], outcomes: &[PointOutcome]) -> Vec<TheoremSummary> {
    ids.iter()
        .map(|&id| {
            let verdicts: Vec<&TheoremVerdict> =
                outcomes.iter().flat_map(|o| o.verdicts.iter()).filter(|v| v.id == id).collect();
            let not_applicable =
                outcomes.iter().flat_map(|o| o.not_applicable.iter()).filter(|n| n.id == id).count();
            let slacks = verdicts.iter().map(|v| v.slack);
            let consistent = verdicts.iter().filter(|v| v.equality_consistent).count();
            TheoremSummary {
                id,
                evaluated: verdicts.len(),
                not_applicable,
                min_slack: slacks.clone().reduce(f64::min),
                max_slack: slacks.reduce(f64::max),
                violations: verdicts.iter().filter(|v| !v.holds).count(),
                equality_points: verdicts.iter().filter(|v| v.equality).count(),
                equality_consistent_points: consistent,
                consistency_rate: (!verdicts.is_empty()).then(|| consistent as f64 / verdicts.len() as f64),
            }
        })
        .collect()
}

/// Verdicts and summaries for one scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub seed: u64,
    pub points: Vec<PointOutcome>,
    pub summary: Vec<TheoremSummary>,
}

impl ScenarioReport {
    pub fn verdicts(&self) -> impl Iterator<Item = &TheoremVerdict> {
        self.points.iter().flat_map(|p| p.verdicts.iter())
    }

    pub fn summary_for(&self, id: TheoremId) -> Option<&TheoremSummary> {
        self.summary.iter().find(|s| s.id == id)
    }
}

/// Seed for the random unit choices at point `index`.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Samples `count` points with `seed` and evaluates `ids` at each, in
/// point order. `random_units` enables the unit sweep.
pub fn scenario_report(
    s: &SubmersionScenario,
    count: usize,
    seed: u64,
    ids: &[TheoremId],
    random_units: Option<usize>,
) -> GeomResult<ScenarioReport> {
    let points = s.sample_points(count, seed)?;
    let outcomes: Vec<PointOutcome> = points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let units = unit_choices(s.r(), s.ell(), random_units, point_seed(seed, k));
            evaluate_point(s, k, p, ids, &units)
        })
        .collect();
    Ok(ScenarioReport { scenario: s.name.clone(), seed, summary: summarize(ids, &outcomes), points: outcomes })
}
