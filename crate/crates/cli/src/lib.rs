//! Configuration-driven front end for `qbsc-core`: runs protocols, attacks
//! and sweeps and writes JSON reports (plus CSV tables for sweeps).

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::time::Instant;

pub use commands::{run, Output, COMMANDS};
pub use config::ExperimentConfig;
pub use report::{CheckRecord, CsvTable, ReportEnvelope};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qbsc_core::Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            // a numerical breakdown is a failed check, not a bad invocation
            CliError::Core(qbsc_core::Error::Numerical(_)) => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

/// Run `command`, fill in the timing if requested and write the outputs.
///
/// Returns the report so callers can inspect it; the JSON goes to
/// `cfg.output_path` (stdout when unset) and the CSV next to it.
pub fn execute(command: &str, cfg: &ExperimentConfig) -> Result<ReportEnvelope, CliError> {
    let start = Instant::now();
    let mut out = run(command, cfg)?;
    if cfg.timing {
        out.envelope.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    let json = out.envelope.to_json()?;
    match &cfg.output_path {
        Some(path) => {
            report::write_atomic(path, &json)?;
            log::info!("wrote {}", path.display());
            if let Some(csv) = &out.csv {
                let p = report::csv_path(path);
                report::write_atomic(&p, &csv.render())?;
                log::info!("wrote {}", p.display());
            }
        }
        None => {
            print!("{json}");
            if out.csv.is_some() {
                log::info!("no --out given; CSV table not written");
            }
        }
    }
    for r in out.envelope.records.iter().filter(|r| !r.pass) {
        log::error!("check {} failed: lhs {} rhs {} ({} of {} cases)", r.name, r.lhs, r.rhs, r.failures, r.cases);
    }
    Ok(out.envelope)
}
