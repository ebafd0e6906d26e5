//! JSON run configuration.
//!
//! A config names a built-in scenario or defines one inline, and selects
//! the sample size, seed, checks and output. See `schema/config.schema.json`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use oneill_core::geom::{builtin_chart, Domain, MetricChart};
use oneill_core::identities::IdentityId;
use oneill_core::inequalities::TheoremId;
use oneill_core::quat::{builtin_triple, QuaternionicTriple};
use oneill_core::submersion::{builtin_scenario, builtin_scenario_names, MapExpr, ScenarioFlags, SubmersionScenario};
use oneill_core::tolerances;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{LabError, LabResult};

pub const DEFAULT_POINTS: usize = 100;
pub const DEFAULT_SEED: u64 = 42;
/// Random unit pairs per point when the unit sweep is on.
pub const DEFAULT_RANDOM_UNITS: usize = 20;

/// Manifold-only scenarios: a chart with a quaternionic triple but no
/// submersion. Only the structure checks apply.
const MANIFOLD_SCENARIOS: &[(&str, &str, &str, f64)] = &[("hp2_chart", "hp2_chart", "hp2", 0.5)];

/// Every name `load_scenario` accepts.
pub fn scenario_names() -> Vec<&'static str> {
    builtin_scenario_names().iter().copied().chain(MANIFOLD_SCENARIOS.iter().map(|m| m.0)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub format: OutputFormat,
    pub path: Option<PathBuf>,
}

/// A chart with a triple and a sampling box, checked without a submersion.
#[derive(Clone, Debug)]
pub struct ManifoldScenario {
    pub name: String,
    pub chart: MetricChart,
    pub triple: QuaternionicTriple,
    pub sampling_box: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub enum ScenarioSource {
    Submersion(SubmersionScenario),
    Manifold(ManifoldScenario),
}

impl ScenarioSource {
    pub fn name(&self) -> &str {
        match self {
            Self::Submersion(s) => &s.name,
            Self::Manifold(m) => &m.name,
        }
    }
}

/// Tolerances after applying overrides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub slack_algebraic: f64,
    pub slack_field: f64,
    pub identities: BTreeMap<IdentityId, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            slack_algebraic: tolerances::TAU_SLACK_ALGEBRAIC,
            slack_field: tolerances::TAU_SLACK_FIELD,
            identities: IdentityId::ALL.iter().map(|&id| (id, id.tolerance())).collect(),
        }
    }
}

impl Tolerances {
    pub fn identity(&self, id: IdentityId) -> f64 {
        self.identities.get(&id).copied().unwrap_or_else(|| id.tolerance())
    }
}

/// A validated run configuration.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub scenario: ScenarioSource,
    pub points: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub theorems: Vec<TheoremId>,
    pub identities: Vec<IdentityId>,
    /// Random unit pairs per point for single-vector theorems, or `None`
    /// for frame vector 1 only.
    pub random_units: Option<usize>,
    pub output: OutputSpec,
}

impl ScenarioConfig {
    /// Defaults around a scenario.
    pub fn with_scenario(scenario: ScenarioSource) -> Self {
        Self {
            scenario,
            points: DEFAULT_POINTS,
            seed: DEFAULT_SEED,
            tolerances: Tolerances::default(),
            theorems: TheoremId::ALL.to_vec(),
            identities: IdentityId::ALL.to_vec(),
            random_units: None,
            output: OutputSpec { format: OutputFormat::Json, path: None },
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InlineScenario {
    name: String,
    total_chart: String,
    base_chart: String,
    map: MapExpr,
    #[serde(default)]
    triple: Option<String>,
    #[serde(default)]
    space_form_c: Option<f64>,
    sampling_box: Vec<(f64, f64)>,
    #[serde(default)]
    sampling_filter: Option<Domain>,
    #[serde(default)]
    flags: ScenarioFlags,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceOverrides {
    slack_algebraic: Option<f64>,
    slack_field: Option<f64>,
    #[serde(default)]
    identities: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default)]
    format: Option<OutputFormat>,
    #[serde(default)]
    path: Option<PathBuf>,
}

/// Resolves a built-in scenario name.
pub fn builtin_source(name: &str) -> LabResult<ScenarioSource> {
    if let Some(s) = builtin_scenario(name) {
        return Ok(ScenarioSource::Submersion(s));
    }
    if let Some(&(name, chart, triple, half_width)) = MANIFOLD_SCENARIOS.iter().find(|m| m.0 == name) {
        let chart = builtin_chart(chart).ok_or(LabError::UnknownName { kind: "chart", name: chart.into() })?;
        let triple = builtin_triple(triple).ok_or(LabError::UnknownName { kind: "triple", name: triple.into() })?;
        let sampling_box = vec![(-half_width, half_width); chart.dim()];
        return Ok(ScenarioSource::Manifold(ManifoldScenario { name: name.into(), chart, triple, sampling_box }));
    }
    Err(LabError::UnknownName { kind: "scenario", name: name.into() })
}

fn inline_source(raw: InlineScenario) -> LabResult<ScenarioSource> {
    let chart = |name: &str| builtin_chart(name).ok_or(LabError::UnknownName { kind: "chart", name: name.into() });
    let total = chart(&raw.total_chart)?;
    let base = chart(&raw.base_chart)?;
    let triple = match raw.triple {
        Some(name) => {
            let t = builtin_triple(&name).ok_or(LabError::UnknownName { kind: "triple", name: name.clone() })?;
            Some((t.name, t.expr))
        }
        None => None,
    };
    let s = SubmersionScenario::new(raw.name, total, base, raw.map, triple, raw.sampling_box, raw.flags, raw.space_form_c)
        .map_err(|e| LabError::schema("scenario", e.to_string()))?;
    Ok(ScenarioSource::Submersion(match raw.sampling_filter {
        Some(f) => s.with_filter(f),
        None => s,
    }))
}

fn field<T: for<'de> Deserialize<'de>>(obj: &serde_json::Map<String, Value>, key: &str) -> LabResult<Option<T>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => T::deserialize(v).map(Some).map_err(|e| LabError::schema(key, e.to_string())),
    }
}

fn selection<T>(obj: &serde_json::Map<String, Value>, key: &str, all: &[T], parse: impl Fn(&str) -> Option<T>) -> LabResult<Vec<T>>
where
    T: Copy,
{
    match obj.get(key) {
        None | Some(Value::Null) => Ok(all.to_vec()),
        Some(Value::String(s)) if s == "all" => Ok(all.to_vec()),
        Some(Value::Array(items)) => items
            .iter()
            .map(|item| {
                let name = item.as_str().ok_or_else(|| LabError::schema(key, "entries must be strings"))?;
                parse(name).ok_or_else(|| LabError::UnknownName {
                    kind: if key == "theorems" { "theorem" } else { "identity" },
                    name: name.into(),
                })
            })
            .collect(),
        Some(_) => Err(LabError::schema(key, "expected \"all\" or a list of names")),
    }
}

const KNOWN_KEYS: &[&str] =
    &["scenario", "points", "seed", "tolerances", "theorems", "identities", "unit_sweep", "random_units", "output"];

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> LabResult<ScenarioConfig> {
    let doc: Value = serde_json::from_str(text).map_err(|e| LabError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = doc.as_object().ok_or_else(|| LabError::schema("$", "top level must be an object"))?;
    if let Some(key) = obj.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(LabError::schema(key.clone(), "unknown field"));
    }

    let scenario = match obj.get("scenario") {
        Some(Value::String(name)) => builtin_source(name)?,
        Some(v @ Value::Object(_)) => {
            inline_source(InlineScenario::deserialize(v).map_err(|e| LabError::schema("scenario", e.to_string()))?)?
        }
        Some(_) => return Err(LabError::schema("scenario", "expected a name or an inline definition")),
        None => return Err(LabError::schema("scenario", "missing")),
    };
    let mut cfg = ScenarioConfig::with_scenario(scenario);

    if let Some(points) = obj.get("points") {
        cfg.points = match points.as_u64() {
            Some(n) if n >= 1 => n as usize,
            _ => return Err(LabError::schema("points", "must be an integer ≥ 1")),
        };
    }
    if let Some(seed) = obj.get("seed") {
        cfg.seed = seed.as_u64().ok_or_else(|| LabError::schema("seed", "must be an unsigned integer"))?;
    }
    if let Some(t) = field::<ToleranceOverrides>(obj, "tolerances")? {
        for (name, value) in [("slack_algebraic", t.slack_algebraic), ("slack_field", t.slack_field)] {
            if value.is_some_and(|v| !(v.is_finite() && v >= 0.0)) {
                return Err(LabError::schema(format!("tolerances.{name}"), "must be a finite number ≥ 0"));
            }
        }
        cfg.tolerances.slack_algebraic = t.slack_algebraic.unwrap_or(cfg.tolerances.slack_algebraic);
        cfg.tolerances.slack_field = t.slack_field.unwrap_or(cfg.tolerances.slack_field);
        for (name, value) in t.identities {
            let id = IdentityId::parse(&name).ok_or(LabError::UnknownName { kind: "identity", name: name.clone() })?;
            if !(value.is_finite() && value > 0.0) {
                return Err(LabError::schema(format!("tolerances.identities.{name}"), "must be a finite number > 0"));
            }
            cfg.tolerances.identities.insert(id, value);
        }
    }
    cfg.theorems = selection(obj, "theorems", &TheoremId::ALL, |s| s.parse().ok())?;
    cfg.identities = selection(obj, "identities", &IdentityId::ALL, IdentityId::parse)?;

    let sweep = field::<bool>(obj, "unit_sweep")?.unwrap_or(false);
    let random_units = field::<usize>(obj, "random_units")?;
    cfg.random_units = (sweep || random_units.is_some()).then(|| random_units.unwrap_or(DEFAULT_RANDOM_UNITS));

    if let Some(out) = field::<RawOutput>(obj, "output")? {
        cfg.output = OutputSpec { format: out.format.unwrap_or(OutputFormat::Json), path: out.path };
    }
    Ok(cfg)
}

/// Loads a config from a JSON file, or builds the default config of a
/// built-in scenario when `arg` is a scenario name.
pub fn load_scenario(arg: &str) -> LabResult<ScenarioConfig> {
    let path = Path::new(arg);
    if path.extension().is_some_and(|e| e == "json") || path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        return parse_config(&text);
    }
    Ok(ScenarioConfig::with_scenario(builtin_source(arg)?))
}
