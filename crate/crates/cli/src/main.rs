mod args;
mod commands;
mod report;

use args::{Cli, Command, ConstructCmd, ReportFormat};
use clap::Parser;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(j) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let report = match commands::run(&cli.command, &cli.common) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let body = match cli.common.report {
        ReportFormat::Json => report.json(&argv[1..], cli.common.seed, start.elapsed()),
        ReportFormat::Text => report.plain(),
    };
    // `construct --out` writes the bare structure file; the report still goes to stdout.
    let structure_out = matches!(cli.command, Command::Construct(ConstructCmd::Cm { .. } | ConstructCmd::Cmvee { .. } | ConstructCmd::Fig2 { .. }));
    let written = match &cli.common.out {
        Some(path) if structure_out => {
            let text = serde_json::to_string_pretty(&report.result["structure"]).expect("json") + "\n";
            std::fs::write(path, text).and_then(|_| std::io::stdout().write_all(body.as_bytes()))
        }
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.status.exit_code())
}
