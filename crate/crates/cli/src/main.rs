//! `majorana`: verification suites, evolution and transforms for real
//! Majorana spinor fields.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 configuration or I/O error.

mod config;
mod evolve;
mod fields;
mod output;
mod transform;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, RunConfig};
use output::Sink;

#[derive(Parser)]
#[command(name = "majorana", version, about = "Real Majorana spinor transforms and checks")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

enum Failure {
    Checks,
    Config(String),
}

fn init_threads() -> Result<(), String> {
    let threads = match std::env::var("MAJORANA_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("MAJORANA_THREADS must be a non-negative integer, got {v:?}"))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    init_threads().map_err(Failure::Config)?;
    let cfg = RunConfig::load(&cli.config).map_err(Failure::Config)?;
    if let Some(c) = cfg.command {
        if c != cli.command {
            return Err(Failure::Config(format!(
                "config is for {c:?} but {:?} was requested",
                cli.command
            )));
        }
    }
    verify::validate_overrides(&cfg.tolerances).map_err(Failure::Config)?;
    let dir = cli.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    let sink = Sink::new(&cfg, &dir).map_err(Failure::Config)?;
    let say = |msg: &str| {
        if !cli.quiet {
            eprintln!("{msg}");
        }
    };

    let pass = match cli.command {
        Command::Verify => {
            let report = verify::run(&cfg, |suite| say(&format!("running {suite} checks")))
                .map_err(Failure::Config)?;
            for c in &report.checks {
                let mark = if c.pass { "PASS" } else { "FAIL" };
                say(&format!("{mark} {:<36} {:.3e} (tol {:.1e}) {}", c.id, c.measured, c.tolerance, c.detail));
            }
            say(&format!("{} passed, {} failed", report.passed, report.failed));
            sink.json("verify_report.json", &report).map_err(Failure::Config)?;
            report.pass
        }
        Command::Evolve => {
            let report = evolve::run(&cfg, &sink).map_err(Failure::Config)?;
            say(&format!(
                "norm drift {:.3e}, velocity error {}",
                report.norm_drift,
                report.velocity_rel_error.map_or("n/a".into(), |v| format!("{v:.3e}"))
            ));
            sink.json("evolve_report.json", &report).map_err(Failure::Config)?;
            report.pass
        }
        Command::Transform => {
            let report = transform::run_transform(&cfg, &sink).map_err(Failure::Config)?;
            say(&format!("round trip error {:.3e} (tol {:.1e})", report.error, report.tolerance));
            if report.tail_warning {
                say("warning: field mass near rmax exceeds the tail tolerance");
            }
            sink.json("transform_report.json", &report).map_err(Failure::Config)?;
            report.pass
        }
        Command::Spectrum => {
            let report = transform::run_spectrum(&cfg, &sink).map_err(Failure::Config)?;
            say(&format!(
                "{} of {} entries significant",
                report.sparsity.significant_entries, report.sparsity.entries
            ));
            sink.json("spectrum_report.json", &report).map_err(Failure::Config)?;
            true
        }
    };
    if pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
