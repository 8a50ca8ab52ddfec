//! Scenario runner for the slhnet models: TOML scenario files in, CSV out.

pub mod config;
pub mod error;
pub mod output;
pub mod sweep;
pub mod validate;

use std::io::Write;
use std::path::Path;

pub use config::{parse_config, parse_config_with, ScenarioConfig, Task};
pub use error::{CliError, CliResult};
pub use output::{csv_body, emit_csv, write_csv};
pub use sweep::{run_sweep, SweepResult};

/// Runs `task` and writes its table to `out`, or stdout. The validation
/// report goes to stdout in either case; any failed check is an error.
pub fn run(task: Task, cfg: &ScenarioConfig, workers: usize, out: Option<&Path>) -> CliResult<()> {
    let out = out.or(cfg.output.as_deref());
    let result = if task == Task::Validate {
        let checks = validate::validate(cfg);
        let mut stdout = std::io::stdout().lock();
        for k in &checks {
            writeln!(stdout, "{k}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
        let failed = checks.iter().filter(|k| !k.passed()).count();
        let manifest = sweep::Manifest {
            task: task.name().into(),
            device: cfg.device.kind.name().into(),
            config_hash: cfg.hash.clone(),
            version: env!("CARGO_PKG_VERSION").into(),
            created: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            rel_tol: cfg.solver.options.rel_tol,
            abs_tol: cfg.solver.options.abs_tol,
            points: checks.len(),
            failed,
            ..Default::default()
        };
        if let Some(path) = out {
            emit_csv(&validate::as_table(&checks, manifest), path)?;
        }
        if failed > 0 {
            return Err(CliError::Validation { failed, total: checks.len() });
        }
        return Ok(());
    } else {
        run_sweep(cfg, task, workers)?
    };
    match out {
        Some(path) => emit_csv(&result, path),
        None => write_csv(&result, std::io::stdout().lock())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}
