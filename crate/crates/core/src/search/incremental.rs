use super::{AlphaSearch, SearchConfig, SearchError, SearchResult, TraceEntry};
use crate::network::MnaSystem;
use crate::newton::{initial_guess_with, newton_solve, unloaded_solution};

/// Uniform grid `0, Δα, 2Δα, …` capped at 1; the final point is exactly 1
/// even when 1 is not a multiple of `delta_alpha`.
pub fn alpha_grid(delta_alpha: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut k = 0_u64;
    loop {
        let a = k as f64 * delta_alpha;
        if a >= 1.0 - 1e-12 {
            break;
        }
        grid.push(a);
        k += 1;
    }
    grid.push(1.0);
    grid
}

/// Walks [`alpha_grid`] upwards, warm-starting each Newton call from the
/// previous solution, and stops at the first failure. The result is the
/// last converged grid point, accurate to within `delta_alpha`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IncrementalSearch;

impl AlphaSearch for IncrementalSearch {
    fn name(&self) -> &'static str {
        "basic"
    }

    fn description(&self) -> &'static str {
        "incremental alpha grid walk, stop at the first Newton failure"
    }

    fn search(&self, sys: &MnaSystem, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
        cfg.validate()?;
        let solver = cfg.nr.linear_solver.as_ref();
        let mut start = initial_guess_with(sys, solver)?;
        let mut phi_hat = unloaded_solution(sys, solver)?;
        let mut alpha_hat = 0.0;
        let mut trace = Vec::new();
        let mut failed = Vec::new();

        for alpha in alpha_grid(cfg.delta_alpha) {
            let out = newton_solve(sys, alpha, &start, &cfg.nr);
            trace.push(TraceEntry::record(alpha, cfg.nr.max_iters, &out));
            if !out.converged {
                failed.push(alpha);
                break;
            }
            alpha_hat = alpha;
            phi_hat = out.phi;
            start = phi_hat.clone();
        }

        Ok(SearchResult {
            strategy: "basic",
            alpha_hat,
            phi_hat,
            fully_supplied: alpha_hat == 1.0,
            outer_iterations: trace.len(),
            trace,
            failed_buffer: failed,
            bisections: 0,
            adaptations: 0,
            final_nr_budget: cfg.nr.max_iters,
        })
    }
}
