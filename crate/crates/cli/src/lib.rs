//! Script language, command runner and JSON reports for `adic-core`.

pub mod dsl;
pub mod report;
pub mod runner;
pub mod selftest;
pub mod session;

use dsl::ParseError;
use report::{Bounds, Report};

/// Parses, resolves and runs a script.
pub fn run_script(src: &str, bounds: Bounds) -> Result<Vec<Report>, ParseError> {
    let script = dsl::parse(src)?;
    let session = session::resolve(&script)?;
    Ok(runner::run_session(&session, bounds))
}
