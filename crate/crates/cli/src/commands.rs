//! Batch subcommands: `run`, `demo` and `equilibrium`.

use std::io::Write;
use std::path::{Path, PathBuf};

use droopvessel::engine::step_of_time;
use droopvessel::scenario::LoadError;
use droopvessel::{
    builtin_scenario, export_csv, export_markers, run_with_engine, validate, Domain, Engine, RunError, Scenario,
};
use serde_json::Value;

use crate::report::{equilibrium_summary, level_timeline, sharing_summary};
use crate::{exit, CliError};

fn load_error(path: &Path, e: LoadError) -> CliError {
    let code = if e.is_semantic() { exit::VALIDATION } else { exit::PARSE };
    CliError::new(code, format!("{}: {e}", path.display()))
}

fn check_valid(scenario: &Scenario) -> Result<(), CliError> {
    let violations = validate(scenario);
    if violations.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = violations.iter().map(|v| format!("invalid scenario: {v}")).collect();
    Err(CliError::new(exit::VALIDATION, lines.join("\n")))
}

fn run_error(e: RunError) -> CliError {
    match e {
        RunError::Invalid(_) => CliError::new(exit::VALIDATION, e.to_string()),
        other => CliError::new(exit::RUNTIME, format!("simulation failed: {other}")),
    }
}

/// Reads, overrides and validates a scenario file, returning it together
/// with the domain it declares.
pub fn load_scenario(path: &Path, overrides: &[String]) -> Result<(Scenario, Domain), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(exit::PARSE, format!("{}: cannot read: {e}", path.display())))?;
    let declared = serde_json::from_str::<Value>(&text)
        .ok()
        .and_then(|v| v.get("domain").and_then(Value::as_str).map(str::to_owned));
    let scenario = Scenario::from_json_with_overrides(&text, overrides).map_err(|e| load_error(path, e))?;
    check_valid(&scenario)?;
    let domain = match declared.as_deref() {
        Some("electrical") => Domain::Electrical,
        _ => Domain::Hydraulic,
    };
    Ok((scenario, domain))
}

/// `out.csv` gets its event list in `out.events.csv`.
pub fn markers_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.events.csv"))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::new(exit::RUNTIME, format!("{}: cannot write: {e}", path.display())))
}

pub struct RunArgs<'a> {
    pub file: &'a Path,
    pub out: Option<&'a Path>,
    pub domain: Option<Domain>,
    pub overrides: &'a [String],
}

/// Runs a scenario file. The CSV goes to `--out` (with an event sidecar) or
/// to `stdout`; the equilibrium summary goes to `stdout` after a file
/// export and to `stderr` otherwise.
pub fn run_file(args: RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let (scenario, declared) = load_scenario(args.file, args.overrides)?;
    let domain = args.domain.unwrap_or(declared);
    let (series, engine) = run_with_engine(&scenario).map_err(run_error)?;
    let csv = export_csv(&series, domain);
    let result = engine
        .equilibrium()
        .map_err(|e| CliError::new(exit::RUNTIME, format!("equilibrium: {e}")))?;
    let summary = format!(
        "final equilibrium at t = {}\n{}",
        series.last().t,
        equilibrium_summary(engine.network(), &result, &scenario.unit_map)
    );
    let io = |e: std::io::Error| CliError::new(exit::RUNTIME, e.to_string());
    match args.out {
        Some(out) => {
            write_file(out, &csv)?;
            write_file(&markers_path(out), &export_markers(&series))?;
            writeln!(stdout, "wrote {} ({} rows)", out.display(), series.samples.len()).map_err(io)?;
            stdout.write_all(summary.as_bytes()).map_err(io)?;
        }
        None => {
            stdout.write_all(csv.as_bytes()).map_err(io)?;
            stderr.write_all(summary.as_bytes()).map_err(io)?;
        }
    }
    Ok(())
}

/// Runs a builtin demonstration and prints its summary table.
pub fn demo(name: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let scenario = builtin_scenario(name).map_err(|e| CliError::new(exit::PARSE, e.to_string()))?;
    let (series, engine) = run_with_engine(&scenario).map_err(run_error)?;
    let result = engine
        .equilibrium()
        .map_err(|e| CliError::new(exit::RUNTIME, format!("equilibrium: {e}")))?;
    if let Some(out) = out {
        write_file(out, &export_csv(&series, Domain::Hydraulic))?;
        write_file(&markers_path(out), &export_markers(&series))?;
    }
    let mut text = format!("demo {name}: {} s at dt = {} s\n", scenario.duration, scenario.timestep);
    for m in &series.markers {
        text.push_str(&format!("  t = {:>5}: {}\n", m.time, m.description));
    }
    text.push_str(&level_timeline(&series));
    text.push_str(&equilibrium_summary(engine.network(), &result, &scenario.unit_map));
    text.push_str(&sharing_summary(engine.network(), &result, &series));
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::new(exit::RUNTIME, e.to_string()))
}

/// Settled state predicted from the topology, elevations and volumes in
/// force at time `at` (events scheduled at `at` included).
pub fn equilibrium_at(file: &Path, at: f64, overrides: &[String], stdout: &mut dyn Write) -> Result<(), CliError> {
    if !(at.is_finite() && at >= 0.0) {
        return Err(CliError::new(exit::PARSE, format!("--at must be a non-negative time, got {at}")));
    }
    let (scenario, _) = load_scenario(file, overrides)?;
    let mut engine = Engine::new(&scenario).map_err(run_error)?;
    let target = step_of_time(at, scenario.timestep);
    while engine.step_index() < target {
        engine.advance().map_err(run_error)?;
    }
    engine.apply_due_events().map_err(run_error)?;
    let result = engine
        .equilibrium()
        .map_err(|e| CliError::new(exit::VALIDATION, format!("equilibrium: {e}")))?;
    let text = format!(
        "equilibrium as of t = {}: {} component(s)\n{}",
        engine.time(),
        result.components.len(),
        equilibrium_summary(engine.network(), &result, &scenario.unit_map)
    );
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::new(exit::RUNTIME, e.to_string()))
}
