use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lzs_cli::{list_presets_json, list_presets_text, run_file, validate_file, CliError};

#[derive(Parser)]
#[command(
    name = "lzs",
    version,
    about = "Driven two-level dynamics and CZ gate simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// List built-in parameter sets.
    ListPresets {
        #[arg(long)]
        json: bool,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => match run_file(&config) {
            Ok(report) => {
                for p in &report.outputs {
                    println!("wrote {}", p.display());
                }
                println!("{}", report.summary);
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::ListPresets { json } => {
            if json {
                println!("{}", list_presets_json());
            } else {
                print!("{}", list_presets_text());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match validate_file(&config) {
            Ok(r) => {
                println!("ok: {:?} -> {}", r.kind, r.output.display());
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
    }
}
