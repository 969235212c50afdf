//! `w3`: one entry point for every check, with JSON reports and exit codes
//! 0 (all pass), 1 (a check failed) and 2 (usage or input error).

pub mod cli;
pub mod commands;
pub mod report;
pub mod suite;

use std::io::Write;
use std::time::Instant;

use clap::Parser;

pub use cli::{Cli, Command, Format};
pub use commands::{execute, CliError, Output};
pub use report::{CheckResult, RunReport, Status};
pub use suite::{run_suite, SuiteOptions, REGISTRY};

pub const EXIT_USAGE: i32 = 2;

/// Caps the global rayon pool from `W3_THREADS`; unset means rayon's default.
pub fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("W3_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("W3_THREADS must be a positive integer, got {v:?}"))?;
    // a second call in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => EXIT_USAGE,
            };
        }
    };
    if let Err(e) = init_threads() {
        let _ = writeln!(stderr, "w3: {e}");
        return EXIT_USAGE;
    }
    let start = Instant::now();
    let mut out = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "w3: {e}");
            return EXIT_USAGE;
        }
    };
    out.report.wall_time_s = start.elapsed().as_secs_f64();
    let rendered = match cli.common.format {
        Format::Json => {
            serde_json::to_string_pretty(&out.report.to_json()).expect("plain data") + "\n"
        }
        Format::Text => out.report.to_text(),
    };
    // CSV, when present, is the primary output; the report then goes to stderr
    let (primary, secondary) = match out.csv.take() {
        Some(csv) => (csv, Some(rendered)),
        None => (rendered, None),
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &primary)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(primary.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "w3: {e}");
        return EXIT_USAGE;
    }
    if let Some(s) = secondary {
        let _ = stderr.write_all(s.as_bytes());
    }
    out.report.exit_code()
}
