//! Command-line front end for `supercohom-core`.
//!
//! Exit codes: 0 on success, 1 when a mathematical check or precondition
//! fails, 2 on usage and input errors. `SUPERCOHOM_THREADS` caps the worker
//! thread count.

pub mod any;
pub mod commands;
pub mod error;
pub mod report;
pub mod reproduce;
pub mod spec_file;

use clap::Parser;

pub use any::AnyAlgebra;
pub use error::CliError;

/// Environment variable holding the worker thread count.
pub const THREADS_VAR: &str = "SUPERCOHOM_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {value:?}")))?;
    // A pool may already exist when `run` is called twice in one process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match commands::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = configure_threads().and_then(|()| commands::dispatch(&cli)).and_then(|out| {
        report::emit_text(&out.text, cli.emit.as_deref())?;
        Ok(out.success)
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
