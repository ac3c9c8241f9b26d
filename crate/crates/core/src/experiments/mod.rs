//! Seeded Monte Carlo experiments with CSV output.

mod config;
mod identities;
mod runners;

use serde::Serialize;
use thiserror::Error;

use crate::error::{GameError, GraphError, NumericsError};

pub use config::{ExperimentConfig, FirstPlayer, BREAKERS, MAKERS};
pub use identities::{run_identity_suite, IdentityCheck, IdentityReport, CK_TABLE};
pub use runners::{
    build_breaker, build_maker, log3n, run_core_stats, run_histogram, run_phase_transition, run_shattering, run_stabilization,
    stabilization_bound, CoreStatsRow, HistogramRow, PhaseRow, ShatteringRow, StabilizationRow, LINEAR_FRACTION,
    BREAKER_SEED_OFFSET, MAKER_SEED_OFFSET,
};

pub const EXPERIMENTS: [&str; 6] = ["phase-transition", "shattering", "stabilization", "histogram", "core-stats", "identities"];

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("refused: {0}")]
    Refused(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// CSV text of a finished run, with the number of invariant violations and
/// failed checks it contains.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub csv: String,
    pub rows: usize,
    pub violations: usize,
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs the experiment named in the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput, ExperimentError> {
    fn out<T: Serialize>(rows: &[T], violations: usize) -> Result<ExperimentOutput, ExperimentError> {
        Ok(ExperimentOutput { csv: to_csv(rows)?, rows: rows.len(), violations })
    }
    match cfg.experiment.as_str() {
        "phase-transition" => {
            let rows = run_phase_transition(cfg)?;
            out(&rows, rows.iter().map(|r| r.violations).sum())
        }
        "shattering" => out(&run_shattering(cfg)?, 0),
        "stabilization" => out(&run_stabilization(cfg)?, 0),
        "histogram" => out(&run_histogram(cfg)?, 0),
        "core-stats" => out(&run_core_stats(cfg)?, 0),
        "identities" => {
            let report = run_identity_suite();
            out(&report.checks, report.checks.iter().filter(|c| !c.passed).count())
        }
        other => Err(ExperimentError::Config {
            line: 0,
            msg: format!("unknown experiment '{other}' (known: {})", EXPERIMENTS.join(", ")),
        }),
    }
}
