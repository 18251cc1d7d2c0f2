//! `hchain`: command-line front end writing curves as CSV or JSON.
//!
//! Exit status is 0 on success, 2 for usage or validation errors and 1 for
//! failures during computation or output. `HCHAIN_THREADS` overrides the
//! worker count.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};
use commands::{CliError, Report};

const THREADS_ENV: &str = "HCHAIN_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Compute(e.to_string()))
}

fn write_report(report: &Report, format: Format, out: impl Write) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    match format {
        Format::Csv => report.table.write_csv(&mut out).map_err(io::Error::other)?,
        Format::Json => {
            serde_json::to_writer(&mut out, &report.table.to_json(report.meta.clone()))?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let report = commands::run(&cli.command)?;
    let written = match &cli.output {
        Some(path) => File::create(path)
            .and_then(|f| write_report(&report, cli.format, f))
            .map_err(|e| format!("{}: {e}", path.display())),
        None => write_report(&report, cli.format, io::stdout().lock()).map_err(|e| e.to_string()),
    };
    written.map_err(CliError::Compute)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("hchain: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hchain: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
