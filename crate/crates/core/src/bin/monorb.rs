use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use monorb::cli::{execute, Command, RunConfig};

/// Build, verify and classify monomial Rota-Baxter and averaging operators.
#[derive(Parser)]
#[command(name = "monorb", version)]
struct Args {
    command: Command,
    /// JSON config file.
    config: PathBuf,
    /// Degree bound for tables and sweeps (default 10; overrides the config).
    #[arg(long)]
    max_degree: Option<u32>,
    /// Output path (overrides the config; stdout if neither is given).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the pair sweeps.
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = execute(&RunConfig {
        command: args.command,
        config_path: args.config,
        max_degree: args.max_degree,
        out: args.out,
        jobs: args.jobs,
    });
    if let Some(msg) = outcome.diagnostic {
        eprintln!("monorb: {msg}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
