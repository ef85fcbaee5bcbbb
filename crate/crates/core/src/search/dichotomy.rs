use crate::network::MnaSystem;
use crate::newton::{initial_guess_with, newton_solve, NewtonError, NrConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyCheck {
    pub holds: bool,
    /// First grid α at which Newton failed.
    pub offending_alpha: Option<f64>,
    pub points_checked: usize,
}

/// `grid_size` uniformly spaced points on `[0, alpha_hat]`, endpoints
/// included. A single point means just `alpha_hat`.
pub fn dichotomy_grid(alpha_hat: f64, grid_size: usize) -> Vec<f64> {
    match grid_size {
        0 => Vec::new(),
        1 => vec![alpha_hat],
        n => (0..n)
            .map(|k| alpha_hat * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Confirms that Newton converges at every point of a uniform grid on
/// `[0, alpha_hat]`, i.e. that the solvable set is an interval containing
/// the reported α̂.
///
/// Points are visited in increasing order, each warm-started from the
/// previous solution. Near the boundary Newton may need more than the
/// default budget; pass the search's final budget in `nr`.
pub fn verify_dichotomy(
    sys: &MnaSystem,
    alpha_hat: f64,
    grid_size: usize,
    nr: &NrConfig,
) -> Result<DichotomyCheck, NewtonError> {
    let mut start = initial_guess_with(sys, nr.linear_solver.as_ref())?;
    let mut checked = 0;
    for alpha in dichotomy_grid(alpha_hat, grid_size) {
        let out = newton_solve(sys, alpha, &start, nr);
        checked += 1;
        if !out.converged {
            return Ok(DichotomyCheck {
                holds: false,
                offending_alpha: Some(alpha),
                points_checked: checked,
            });
        }
        start = out.phi;
    }
    Ok(DichotomyCheck {
        holds: true,
        offending_alpha: None,
        points_checked: checked,
    })
}
