//! Structure-definition language, check runner and report emitter on top of
//! `gcverify-core`.

pub mod catalog;
pub mod checks;
pub mod print;
pub mod report;
pub mod syntax;

use std::time::Instant;

use rayon::prelude::*;

pub use checks::{check_spec, plan, Job, CHECKS};
pub use print::print;
pub use report::{CheckReport, Report};
pub use syntax::{parse, ErrorKind, ParseError, StructureFile};

/// Environment variable holding the number of worker threads.
pub const THREADS_VAR: &str = "GVERIFY_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Plan(String),
}

/// Runs the planned checks of a parsed file. Structures are built in
/// declaration order; checks run concurrently and are reported in plan order.
pub fn run(file: &StructureFile, filter: &[String]) -> Result<Report, RunError> {
    let jobs = plan(file, filter).map_err(RunError::Plan)?;
    let ws = checks::Workspace::build(file);
    let exec = || {
        jobs.par_iter()
            .map(|job| {
                let start = Instant::now();
                let outcome = checks::run_job(&ws, job);
                let ms = start.elapsed().as_millis() as u64;
                CheckReport::new(
                    job.check.id,
                    &job.structure,
                    job.method,
                    job.check.op,
                    outcome,
                    ms,
                )
            })
            .collect::<Vec<_>>()
    };
    let threads = std::env::var(THREADS_VAR)
        .ok()
        .and_then(|s| s.parse::<usize>().ok());
    let checks = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Plan(format!("{THREADS_VAR}: {e}")))?
            .install(exec),
        None => exec(),
    };
    Ok(Report {
        engine: report::ENGINE.to_string(),
        checks,
    })
}

/// Parses and runs structure-file text.
pub fn run_text(text: &str, filter: &[String]) -> Result<Report, RunError> {
    run(&parse(text)?, filter)
}
