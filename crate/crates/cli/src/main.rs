use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gamma_lcm::config::{self, Command, Overrides};
use gamma_lcm::{execute, EXIT_INPUT};

/// Decide logarithmic complete monotonicity of gamma ratios and verify their
/// representing measures.
#[derive(Debug, Parser)]
#[command(name = "gamma-lcm", version)]
struct Args {
    /// JSON job file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the job file.
    #[arg(long, value_name = "DIR")]
    output: Option<PathBuf>,
    /// Monte-Carlo seed; overrides `seed` in the job file.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Multiplies every check tolerance.
    #[arg(long, value_name = "F")]
    tol_scale: Option<f64>,
    /// Command to run; repeatable, replaces the job file's list.
    #[arg(long = "command", value_name = "NAME", value_enum)]
    commands: Vec<Command>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let overrides =
        Overrides { output: args.output, seed: args.seed, tol_scale: args.tol_scale, commands: args.commands };
    let job = match config::load(&args.config, &overrides) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("gamma-lcm: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match execute(&job, &args.config) {
        Ok(summary) => {
            for o in &summary.outcomes {
                let r = &o.report;
                let status =
                    serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                match &r.reason {
                    Some(reason) => println!("{:<24} {:<15} {status} ({reason})", r.spec_name, r.command.as_str()),
                    None => println!("{:<24} {:<15} {status}", r.spec_name, r.command.as_str()),
                }
            }
            ExitCode::from(summary.exit_code)
        }
        Err(e) => {
            eprintln!("gamma-lcm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
