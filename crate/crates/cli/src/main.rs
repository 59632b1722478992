mod args;
mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use hpfg_core::Error;
use serde_json::json;

use args::Cli;

const EXIT_CONFIG: u8 = 2;
const EXIT_CHECK: u8 = 3;
const EXIT_GUARD: u8 = 4;

fn fail(code: u8, kind: &str, message: String) -> ExitCode {
    eprintln!("{}", json!({"error": kind, "message": message, "exit_code": code}));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build_global()
        {
            return fail(EXIT_CONFIG, "invalid_config", e.to_string());
        }
    }

    let report = match commands::run(&cli.command, &cli.global) {
        Ok(r) => r,
        Err(e @ Error::GuardExceeded { .. }) => return fail(EXIT_GUARD, "guard_exceeded", e.to_string()),
        Err(e) => return fail(EXIT_CONFIG, "invalid_config", e.to_string()),
    };

    let written = match &cli.global.output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            report.render(cli.global.format, &mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            report.render(cli.global.format, &mut lock).and_then(|_| lock.flush())
        }
    };
    if let Err(e) = written {
        return fail(EXIT_CONFIG, "unwritable_output", e.to_string());
    }

    let failed = report.failed();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "{}",
            json!({
                "error": "check_failed",
                "command": report.command,
                "failed": failed.iter().map(|c| json!({"name": c.name, "detail": c.detail})).collect::<Vec<_>>(),
                "exit_code": EXIT_CHECK,
            })
        );
        ExitCode::from(EXIT_CHECK)
    }
}
