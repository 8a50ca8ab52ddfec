use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slhnet_cli::{parse_config_with, run, CliError, CliResult, Task};

#[derive(Parser)]
#[command(name = "slhnet", version, about = "Giant-atom / JQF waveguide-QED scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario file (TOML); defaults apply without one.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override a config entry, e.g. `--set device.kappa_r=2.31` or `--set sweep.phi2=linspace(0,0.1pi,5)`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Purcell-limited T1 and the dispersive estimate.
    Purcell,
    /// Dark states of the network and their residuals.
    DarkState,
    /// Qubit T1 over the sweep grid.
    T1Sweep,
    /// Population trajectories from an excited emitter.
    Dynamics,
    /// Weak-probe transmission.
    Transmission,
    /// Dip depth versus probe photon number.
    Saturation,
    /// Analytic cross-checks; nonzero exit on any failure.
    Validate,
}

impl From<Command> for Task {
    fn from(c: Command) -> Task {
        match c {
            Command::Purcell => Task::Purcell,
            Command::DarkState => Task::DarkState,
            Command::T1Sweep => Task::T1Sweep,
            Command::Dynamics => Task::Dynamics,
            Command::Transmission => Task::Transmission,
            Command::Saturation => Task::Saturation,
            Command::Validate => Task::Validate,
        }
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => String::new(),
    };
    let cfg = parse_config_with(&text, &cli.set)?;
    let task = Task::from(cli.command);
    if let Some(declared) = cfg.task {
        if declared != task {
            return Err(CliError::Config(format!("config declares task `{declared}` but `{task}` was requested")));
        }
    }
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    run(task, &cfg, workers, cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.to_string().replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
