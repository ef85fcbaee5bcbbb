use super::{AlphaSearch, SearchConfig, SearchError, SearchResult, TraceEntry};
use crate::network::MnaSystem;
use crate::newton::{initial_guess_with, newton_solve, unloaded_solution};

/// Bisection against a stack of failed α values, starting from α = 1.
///
/// After each Newton call: a success raises the lower bound α̂; a failure is
/// pushed onto the buffer. An empty buffer ends the search. Otherwise, while
/// the gap between α̂ and the most recent failure is at least the active
/// tolerance, the next trial is `α̂ + c_bi (last − α̂)`. Once the gap closes,
/// the Newton budget doubles, the active tolerance shrinks tenfold and the
/// most recent failure is popped and retried. The search returns when the
/// active tolerance drops below `delta_opt`.
///
/// The bracket is always measured against the most recent failure, which is
/// also the smallest one since trials stay strictly inside the bracket.
///
/// Each Newton call starts from the last converged potentials, or from the
/// linearized initial guess until the first success.
#[derive(Debug, Clone, Copy, Default)]
pub struct BufferedBisection;

impl AlphaSearch for BufferedBisection {
    fn name(&self) -> &'static str {
        "efficient"
    }

    fn description(&self) -> &'static str {
        "bisection from alpha = 1 with a failure buffer and adaptive Newton budget"
    }

    fn search(&self, sys: &MnaSystem, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
        cfg.validate()?;
        let solver = cfg.nr.linear_solver.as_ref();
        let phi0 = initial_guess_with(sys, solver)?;
        let mut phi_hat = unloaded_solution(sys, solver)?;
        let mut alpha_hat = 0.0;
        let mut have_success = false;

        let mut alpha_try = 1.0;
        let mut buffer: Vec<f64> = Vec::new();
        let mut budget = cfg.nr.max_iters;
        let mut delta_act = cfg.delta_act;
        let mut trace = Vec::new();
        let (mut bisections, mut adaptations) = (0, 0);

        macro_rules! finish {
            ($outer:expr) => {
                Ok(SearchResult {
                    strategy: "efficient",
                    alpha_hat,
                    fully_supplied: alpha_hat == 1.0,
                    phi_hat,
                    trace,
                    failed_buffer: buffer,
                    outer_iterations: $outer,
                    bisections,
                    adaptations,
                    final_nr_budget: budget,
                })
            };
        }

        for outer in 1..=cfg.max_outer {
            let start = if have_success { &phi_hat } else { &phi0 };
            let out = newton_solve(sys, alpha_try, start, &cfg.nr.with_max_iters(budget));
            trace.push(TraceEntry::record(alpha_try, budget, &out));
            if out.converged {
                alpha_hat = alpha_try;
                phi_hat = out.phi;
                have_success = true;
            } else {
                buffer.push(alpha_try);
            }

            let Some(&last) = buffer.last() else {
                return finish!(outer);
            };
            if (alpha_hat - last).abs() >= delta_act {
                alpha_try = alpha_hat + cfg.c_bi * (last - alpha_hat);
                bisections += 1;
            } else {
                budget *= 2;
                delta_act /= 10.0;
                adaptations += 1;
                if delta_act < cfg.delta_opt {
                    return finish!(outer);
                }
                alpha_try = buffer.pop().expect("buffer checked non-empty");
            }
        }
        Err(SearchError::MaxOuterExceeded {
            max_outer: cfg.max_outer,
            trace,
        })
    }
}
