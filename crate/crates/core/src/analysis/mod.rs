//! Post-solve electrical quantities and α-sweep diagnostics.

mod branch;
mod sweep;
mod timing;

use thiserror::Error;

pub use branch::{
    branch_report, potentials_table, BranchReport, LoadFlow, ResistorFlow, SourceFlow,
};
pub use sweep::{alpha_sweep, alpha_sweep_with, uniform_grid, SweepMode, SweepRecord, SweepReport};
pub use timing::{timing_harness, TimingSummary};

use crate::network::{EvalError, NetworkError};
use crate::search::SearchError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("potentials are not a solution: residual {residual:e} is not below {tolerance:e}")]
    NotConverged { residual: f64, tolerance: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("invalid alpha grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("search is not deterministic: alpha {first} then {later}")]
    NonDeterministic { first: f64, later: f64 },
    #[error("at least one repetition is required")]
    ZeroRepetitions,
}
