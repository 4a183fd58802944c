use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use dbi_cli::{resolve_output_dir, run_to_dir, ExperimentConfig, RunError};
use dbi_core::generators::{GD_FAMILIES, PRESET_NAMES};

#[derive(Parser)]
#[command(name = "dbi", version, about = "Double-bracket iteration experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more experiment configs.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// List generator presets, GD families and policies.
    Presets,
}

fn output_dir(config: &ExperimentConfig, path: &Path, several: bool) -> PathBuf {
    let dir = resolve_output_dir(config);
    let overridden = std::env::var_os(dbi_cli::OUTPUT_DIR_ENV).is_some_and(|v| !v.is_empty());
    match (several && overridden, path.file_stem()) {
        (true, Some(stem)) => dir.join(stem),
        _ => dir,
    }
}

fn run_one(path: &Path, several: bool) -> Result<PathBuf, RunError> {
    let config = ExperimentConfig::from_path(path)?;
    config.validate()?;
    let dir = output_dir(&config, path, several);
    run_to_dir(&config, &dir)?;
    Ok(dir)
}

fn write_presets(out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "generator presets:")?;
    for name in PRESET_NAMES {
        writeln!(out, "  {name}")?;
    }
    writeln!(out, "gradient-descent families:")?;
    for name in GD_FAMILIES {
        writeln!(out, "  {name}")?;
    }
    writeln!(out, "policies: gww, hamming, bhmm:<preset>, gd:<family>")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { configs } => {
            let several = configs.len() > 1;
            let results: Vec<_> = configs.par_iter().map(|p| (p, run_one(p, several))).collect();
            let mut code = 0;
            for (path, result) in results {
                match result {
                    Ok(dir) => println!("{}: wrote {}", path.display(), dir.display()),
                    Err(e) => {
                        eprintln!("{}: {e}", path.display());
                        code = code.max(e.exit_code());
                    }
                }
            }
            ExitCode::from(code as u8)
        }
        Command::Validate { config } => {
            match ExperimentConfig::from_path(&config).and_then(|c| c.validate().map(|_| c)) {
                Ok(c) => {
                    println!("{}: ok ({})", config.display(), c.experiment.name());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}: {e}", config.display());
                    ExitCode::from(2)
                }
            }
        }
        Command::Presets => {
            // a closed pipe (e.g. `| head`) is not an error here
            let _ = write_presets(&mut std::io::stdout().lock());
            ExitCode::SUCCESS
        }
    }
}
