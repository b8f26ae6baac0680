use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use loxodrome_cli::commands::{cmd_figure, cmd_loxodrome, cmd_surface, cmd_verify, Format, RunOptions};
use loxodrome_cli::config::SceneConfig;
use loxodrome_cli::export::json_text;
use loxodrome_cli::CliError;

#[derive(Parser)]
#[command(name = "loxodrome", version, about = "Loxodromes on rotational surfaces")]
struct Cli {
    /// Scene description (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance of the closed-form vs numerical curvature and torsion check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Polyline samples, or verification samples for `verify`.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Surface mesh as OBJ plus a CSV grid.
    Surface,
    /// Polylines with curvature, torsion and normal curvature per sample.
    Loxodrome,
    /// Numerical checks and characterization verdicts.
    Verify,
    /// Complete bundle for one of fig1..fig4.
    Figure { name: String },
}

fn scene_config(path: &Option<PathBuf>) -> Result<SceneConfig, CliError> {
    match path {
        Some(p) => SceneConfig::load(p),
        None => Err(CliError::Invalid("--config is required for this command".into())),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let opts = RunOptions {
        out: cli.out.clone(),
        tol: cli.tol,
        samples: cli.samples,
        format: cli.format,
    };
    match &cli.command {
        Command::Surface => {
            for f in cmd_surface(&scene_config(&cli.config)?, &opts)? {
                println!("{}", f.display());
            }
        }
        Command::Loxodrome => {
            for f in cmd_loxodrome(&scene_config(&cli.config)?, &opts)? {
                println!("{}", f.display());
            }
        }
        Command::Verify => {
            let report = cmd_verify(&scene_config(&cli.config)?, &opts)?;
            if opts.out.is_none() {
                print!("{}", json_text(&report)?);
            }
            if !report.passed() {
                return Err(CliError::VerificationFailed {
                    failed: report.summary.failed,
                    total: report.summary.total,
                });
            }
        }
        Command::Figure { name } => {
            let bundle = cmd_figure(name, &opts)?;
            for f in &bundle.files {
                println!("{}", f.display());
            }
            if !bundle.report.passed() {
                return Err(CliError::VerificationFailed {
                    failed: bundle.report.summary.failed,
                    total: bundle.report.summary.total,
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
