use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qmor::presentation::DEFAULT_BUDGET;
use qmor::workspace::{parse_workspace, Report, RunOptions};

const USAGE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "qmor", version, about = "Build Mor presentations and check their structure maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every statement of a workspace file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a single check, e.g. `qmor check explaw C2 C2 C2`.
    Check {
        /// Workspace file whose bindings the check may use.
        #[arg(long = "with")]
        with: Option<PathBuf>,
        kind: String,
        args: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Rewrite steps per identity.
    #[arg(long, env = "QMOR_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Emit the report as JSON instead of key: value text.
    #[arg(long)]
    json: bool,
    /// Record wall time per entry (reports are then not reproducible).
    #[arg(long)]
    timings: bool,
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(text: &str, common: &Common) -> Result<Report, String> {
    let ws = parse_workspace(text).map_err(|d| d.to_string())?;
    let opts = RunOptions { budget: common.budget, seed: common.seed, timings: common.timings };
    ws.run(&opts).map_err(|d| d.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (text, common) = match &cli.command {
        Command::Run { file, common } => (read(file), common),
        Command::Check { with, kind, args, common } => {
            let line = format!("check {kind} {}\n", args.join(" "));
            let text = match with {
                Some(path) => read(path).map(|p| format!("{p}\n{line}")),
                None => Ok(line),
            };
            (text, common)
        }
    };
    let report = match text.and_then(|t| execute(&t, common)) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    let rendered = if common.json { report.to_json() } else { report.to_text() };
    print!("{rendered}");
    if let Some(path) = &common.report {
        if let Err(e) = std::fs::write(path, &rendered) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(USAGE_ERROR);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
