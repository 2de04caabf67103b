//! Experiment orchestration: JSON configs in, CSV/JSON reports out.
//!
//! Exit codes: 0 success, 1 config error, 2 tolerance failure in a compare
//! run. Progress goes to stderr; data only to files.

mod config;
mod run;

pub use config::{
    resolve, AsymptoteConfig, CompareTolerances, ExperimentConfig, ExperimentKind, ModelConfig,
    RegimeConfig, RegimeKind, ResolvedConfig,
};
pub use run::{
    beta_laws, infty_laws, run, simulate_pooled, BetaLaws, CompareRow, InftyLaws, EXIT_TOLERANCE,
};

use thiserror::Error;

use crate::analytic::AnalyticError;
use crate::genmodel::ModelError;
use crate::stats::StatsError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        1
    }
}
