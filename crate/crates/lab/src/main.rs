use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oneill_core::identities::IdentityId;
use oneill_core::inequalities::{TheoremCatalog, TheoremId};
use oneill_lab::config::{builtin_source, scenario_names, DEFAULT_RANDOM_UNITS};
use oneill_lab::report::write_report;
use oneill_lab::{emit_report, load_scenario, run_identities, run_verify, LabError, LabResult, OutputFormat, ScenarioConfig, ScenarioSource};

#[derive(Parser)]
#[command(name = "oneill-lab", version, about = "Verify curvature identities and Chen-Ricci inequalities on Riemannian submersions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run structure checks, identity residuals and theorem verdicts.
    Verify(RunArgs),
    /// List the built-in scenarios and the theorem catalog.
    Catalog {
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run only the structure checks and identity residuals.
    Identities(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in scenario name or path to a JSON config.
    #[arg(long, short)]
    scenario: String,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides both slack tolerances.
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated theorem ids, or `all`.
    #[arg(long)]
    theorems: Option<String>,
    /// Comma-separated identity ids, or `all`.
    #[arg(long)]
    identities: Option<String>,
    /// Sweep every frame index and random unit vectors for single-vector theorems.
    #[arg(long)]
    unit_sweep: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_list<T: Copy>(text: &str, all: &[T], parse: impl Fn(&str) -> Option<T>, kind: &'static str) -> LabResult<Vec<T>> {
    if text.trim() == "all" {
        return Ok(all.to_vec());
    }
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| parse(name).ok_or_else(|| LabError::UnknownName { kind, name: name.into() }))
        .collect()
}

fn build_config(args: &RunArgs) -> LabResult<ScenarioConfig> {
    let mut cfg = load_scenario(&args.scenario)?;
    if let Some(n) = args.points {
        if n == 0 {
            return Err(LabError::schema("points", "must be an integer ≥ 1"));
        }
        cfg.points = n;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(LabError::schema("tol", "must be a finite number ≥ 0"));
        }
        cfg.tolerances.slack_algebraic = tol;
        cfg.tolerances.slack_field = tol;
    }
    if let Some(list) = &args.theorems {
        cfg.theorems = parse_list(list, &TheoremId::ALL, |s| s.parse().ok(), "theorem")?;
    }
    if let Some(list) = &args.identities {
        cfg.identities = parse_list(list, &IdentityId::ALL, IdentityId::parse, "identity")?;
    }
    if args.unit_sweep && cfg.random_units.is_none() {
        cfg.random_units = Some(DEFAULT_RANDOM_UNITS);
    }
    if let Some(f) = args.format {
        cfg.output.format = match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        };
    }
    if let Some(out) = &args.out {
        cfg.output.path = Some(out.clone());
    }
    Ok(cfg)
}

fn run(args: &RunArgs, identities_only: bool) -> LabResult<u8> {
    let cfg = build_config(args)?;
    let doc = if identities_only { run_identities(&cfg)? } else { run_verify(&cfg)? };
    let bytes = emit_report(&doc, cfg.output.format)?;
    write_report(&bytes, cfg.output.path.as_deref())?;
    Ok(doc.exit_status)
}

fn catalog(json: bool) -> LabResult<u8> {
    let mut rows = Vec::new();
    for name in scenario_names() {
        let row = match builtin_source(name)? {
            ScenarioSource::Submersion(s) => serde_json::json!({
                "name": name,
                "kind": "submersion",
                "r": s.r(),
                "ell": s.ell(),
                "c": s.space_form_c,
                "triple": s.triple.as_ref().map(|t| t.0.clone()),
                "flags": s.declared,
            }),
            ScenarioSource::Manifold(m) => serde_json::json!({
                "name": name,
                "kind": "manifold",
                "dim": m.chart.dim(),
                "triple": m.triple.name,
            }),
        };
        rows.push(row);
    }
    let theorems = TheoremCatalog::standard();
    if json {
        let doc = serde_json::json!({ "scenarios": rows, "theorems": theorems.entries });
        println!("{}", serde_json::to_string_pretty(&doc).expect("catalog serializes"));
        return Ok(0);
    }
    println!("{:<16} {:<11} {:>2} {:>2} {:>5}  flags", "scenario", "kind", "r", "ℓ", "c");
    for row in &rows {
        let num = |k: &str| row.get(k).and_then(|v| v.as_f64()).map_or("-".to_string(), |v| v.to_string());
        let flags = row.get("flags").map_or(String::new(), |f| {
            f.as_object()
                .into_iter()
                .flatten()
                .filter(|(_, v)| v.as_bool() == Some(true))
                .map(|(k, _)| k.as_str())
                .collect::<Vec<_>>()
                .join(",")
        });
        println!(
            "{:<16} {:<11} {:>2} {:>2} {:>5}  {}",
            row["name"].as_str().unwrap_or_default(),
            row["kind"].as_str().unwrap_or_default(),
            num("r"),
            num("ell"),
            num("c"),
            flags
        );
    }
    println!();
    for e in &theorems.entries {
        println!("{:<4} {}", e.id.as_str(), e.statement);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => run(args, false),
        Command::Identities(args) => run(args, true),
        Command::Catalog { json } => catalog(*json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
