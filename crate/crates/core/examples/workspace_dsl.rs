//! Runs a workspace file and prints the report.
//!
//! cargo run --example workspace_dsl [path/to/file.qm]

use qmor::workspace::{parse_workspace, RunOptions};

fn main() {
    let path = std::env::args().nth(1);
    let text = match &path {
        Some(p) => std::fs::read_to_string(p).unwrap(),
        None => include_str!("workspaces/tour.qm").to_string(),
    };
    let ws = match parse_workspace(&text) {
        Ok(ws) => ws,
        Err(d) => {
            eprintln!("{d}");
            std::process::exit(3);
        }
    };
    match ws.run(&RunOptions::default()) {
        Ok(report) => print!("{}", report.to_text()),
        Err(d) => eprintln!("{d}"),
    }
}
