use rayon::prelude::*;
use serde::Serialize;

use super::AnalysisError;
use crate::linsolve::condition_estimate_with;
use crate::network::MnaSystem;
use crate::newton::{initial_guess_with, newton_solve, NrConfig, NrOutcome};
use crate::report::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// Each point starts from the previous converged solution.
    #[default]
    WarmSequential,
    /// Every point starts from the linearized initial guess; points run in
    /// parallel.
    ColdParallel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub alpha: f64,
    pub converged: bool,
    pub residual_norm: f64,
    pub iterations: usize,
    /// Jacobian condition number at the solution; absent when not converged.
    pub condition: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
}

/// `n + 1` points `k / n` for `k = 0..=n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

/// Newton at every grid α with condition numbers at each solution, warm
/// started and sequential.
pub fn alpha_sweep(
    sys: &MnaSystem,
    grid: &[f64],
    cfg: &NrConfig,
) -> Result<SweepReport, AnalysisError> {
    alpha_sweep_with(sys, grid, cfg, SweepMode::WarmSequential)
}

pub fn alpha_sweep_with(
    sys: &MnaSystem,
    grid: &[f64],
    cfg: &NrConfig,
    mode: SweepMode,
) -> Result<SweepReport, AnalysisError> {
    validate_grid(grid)?;
    let guess = initial_guess_with(sys, cfg.linear_solver.as_ref())
        .map_err(|e| AnalysisError::InvalidGrid(e.to_string()))?;
    let record = |alpha: f64, out: &NrOutcome| SweepRecord {
        alpha,
        converged: out.converged,
        residual_norm: out.final_residual_norm,
        iterations: out.iterations,
        condition: out.converged.then(|| {
            let jac = sys
                .jacobian(&out.phi, alpha)
                .expect("converged iterate has nonzero load potentials");
            condition_estimate_with(cfg.linear_solver.as_ref(), &jac)
        }),
    };

    let records = match mode {
        SweepMode::WarmSequential => {
            let mut start = guess;
            grid.iter()
                .map(|&alpha| {
                    let out = newton_solve(sys, alpha, &start, cfg);
                    let rec = record(alpha, &out);
                    if out.converged {
                        start = out.phi;
                    }
                    rec
                })
                .collect()
        }
        SweepMode::ColdParallel => grid
            .par_iter()
            .map(|&alpha| record(alpha, &newton_solve(sys, alpha, &guess, cfg)))
            .collect(),
    };
    Ok(SweepReport { records })
}

fn validate_grid(grid: &[f64]) -> Result<(), AnalysisError> {
    if let Some(a) = grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(AnalysisError::InvalidGrid(format!("{a} is outside [0, 1]")));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(AnalysisError::InvalidGrid("values are not sorted".into()));
    }
    Ok(())
}

impl SweepReport {
    /// True when the converged records form a prefix of the grid.
    pub fn converged_is_prefix(&self) -> bool {
        let n = self.records.iter().take_while(|r| r.converged).count();
        self.records[n..].iter().all(|r| !r.converged)
    }

    pub fn last_converged(&self) -> Option<&SweepRecord> {
        self.records.iter().rev().find(|r| r.converged)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(vec![
            "alpha",
            "converged",
            "residual_norm",
            "iterations",
            "condition",
        ]);
        for r in &self.records {
            t.push(vec![
                Cell::Alpha(r.alpha),
                Cell::Bool(r.converged),
                Cell::Float(r.residual_norm),
                Cell::Int(r.iterations as u64),
                Cell::opt_float(r.condition),
            ]);
        }
        t
    }
}
