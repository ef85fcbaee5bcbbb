//! Newton-Raphson solver for the scaled DC power flow system at fixed α.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::linsolve::{default_linear_solver, LinearSolver};
use crate::network::{euclidean_norm, EvalError, MnaSystem, Potentials};

pub const DEFAULT_DELTA_CON: f64 = 1e-8;
pub const DEFAULT_MAX_NR_ITERS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{field} = {value} is out of range ({rule})")]
    OutOfRange {
        field: &'static str,
        value: f64,
        rule: &'static str,
    },
}

/// Newton iteration budget and tolerance.
#[derive(Clone)]
pub struct NrConfig {
    /// Converged when the Euclidean residual norm drops below this.
    pub delta_con: f64,
    pub max_iters: usize,
    pub linear_solver: Arc<dyn LinearSolver>,
}

impl Default for NrConfig {
    fn default() -> Self {
        Self {
            delta_con: DEFAULT_DELTA_CON,
            max_iters: DEFAULT_MAX_NR_ITERS,
            linear_solver: default_linear_solver(),
        }
    }
}

impl fmt::Debug for NrConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NrConfig")
            .field("delta_con", &self.delta_con)
            .field("max_iters", &self.max_iters)
            .field("linear_solver", &self.linear_solver.name())
            .finish()
    }
}

impl NrConfig {
    pub fn with_max_iters(&self, max_iters: usize) -> Self {
        Self {
            max_iters,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.delta_con > 0.0 && self.delta_con.is_finite()) {
            return Err(ConfigError::OutOfRange {
                field: "delta_con",
                value: self.delta_con,
                rule: "must be > 0",
            });
        }
        if self.max_iters < 1 {
            return Err(ConfigError::OutOfRange {
                field: "max_iters",
                value: self.max_iters as f64,
                rule: "must be >= 1",
            });
        }
        Ok(())
    }
}

/// Why a Newton run stopped without converging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NrFailure {
    IterationLimit,
    SingularJacobian,
    /// An iterate overflowed or a load potential crossed the zero guard.
    NonFiniteIterate,
}

impl NrFailure {
    pub fn label(self) -> &'static str {
        match self {
            NrFailure::IterationLimit => "iteration-limit",
            NrFailure::SingularJacobian => "singular-jacobian",
            NrFailure::NonFiniteIterate => "non-finite-iterate",
        }
    }
}

#[derive(Debug, Clone)]
pub struct NrOutcome {
    pub converged: bool,
    pub phi: Potentials,
    /// Newton updates performed.
    pub iterations: usize,
    pub final_residual_norm: f64,
    pub failure: Option<NrFailure>,
    /// Residual norm before the first update and after each update.
    pub residual_history: Vec<f64>,
    /// `ln |det J|` at the last factored iterate.
    pub log_abs_det: Option<f64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NewtonError {
    #[error("source voltage level is zero; cannot linearize the loads")]
    ZeroSourceLevel,
    #[error("system matrix is singular")]
    SingularSystem,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Starting point for Newton: solves `A φ₀ = b(U, 1)`, i.e. the load
/// currents linearized at the nominal source voltage. With several source
/// levels the mean level is used.
pub fn initial_guess(sys: &MnaSystem) -> Result<Potentials, NewtonError> {
    initial_guess_with(sys, default_linear_solver().as_ref())
}

pub fn initial_guess_with(
    sys: &MnaSystem,
    solver: &dyn LinearSolver,
) -> Result<Potentials, NewtonError> {
    let level = sys.mean_source_level();
    if level == 0.0 || !level.is_finite() {
        return Err(NewtonError::ZeroSourceLevel);
    }
    let frozen = Potentials::filled(sys.dim(), level);
    let b = sys.rhs(&frozen, 1.0)?;
    solve_exact(sys, solver, b)
}

/// Exact solution of the unloaded (α = 0) problem.
pub fn unloaded_solution(
    sys: &MnaSystem,
    solver: &dyn LinearSolver,
) -> Result<Potentials, NewtonError> {
    solve_exact(sys, solver, sys.unloaded_rhs())
}

fn solve_exact(
    sys: &MnaSystem,
    solver: &dyn LinearSolver,
    mut b: Vec<f64>,
) -> Result<Potentials, NewtonError> {
    let lu = solver.factor(sys.matrix());
    if lu.is_singular() {
        return Err(NewtonError::SingularSystem);
    }
    lu.solve_in_place(&mut b);
    pin_sources(sys, &mut b);
    Ok(Potentials::new(b))
}

fn pin_sources(sys: &MnaSystem, phi: &mut [f64]) {
    for (k, i) in sys.partition().source_nodes().enumerate() {
        phi[i] = sys.source()[k];
    }
}

/// Pure Newton iteration `φ ← φ − J(φ)⁻¹ f(φ)` at fixed `alpha`.
///
/// Failure to converge is reported in the outcome, not as an error.
pub fn newton_solve(
    sys: &MnaSystem,
    alpha: f64,
    phi_init: &Potentials,
    cfg: &NrConfig,
) -> NrOutcome {
    let mut phi = phi_init.clone();
    let mut history = Vec::with_capacity(cfg.max_iters + 1);
    let mut log_abs_det = None;

    let fail = |phi: Potentials, iterations, history: Vec<f64>, why, log_abs_det| NrOutcome {
        converged: false,
        phi,
        iterations,
        final_residual_norm: history.last().copied().unwrap_or(f64::INFINITY),
        failure: Some(why),
        residual_history: history,
        log_abs_det,
    };

    if !phi.is_finite() {
        return fail(phi, 0, history, NrFailure::NonFiniteIterate, None);
    }
    let mut f = match sys.residual(&phi, alpha) {
        Ok(f) => f,
        Err(_) => return fail(phi, 0, history, NrFailure::NonFiniteIterate, None),
    };
    let mut norm = euclidean_norm(&f);
    history.push(norm);
    if norm < cfg.delta_con {
        return NrOutcome {
            converged: true,
            phi,
            iterations: 0,
            final_residual_norm: norm,
            failure: None,
            residual_history: history,
            log_abs_det,
        };
    }

    for iter in 1..=cfg.max_iters {
        let jac = match sys.jacobian(&phi, alpha) {
            Ok(j) => j,
            Err(_) => {
                return fail(
                    phi,
                    iter - 1,
                    history,
                    NrFailure::NonFiniteIterate,
                    log_abs_det,
                )
            }
        };
        let lu = cfg.linear_solver.factor(&jac);
        if lu.is_singular() {
            return fail(
                phi,
                iter - 1,
                history,
                NrFailure::SingularJacobian,
                Some(f64::NEG_INFINITY),
            );
        }
        log_abs_det = Some(lu.log_abs_det());
        lu.solve_in_place(&mut f);
        for (p, step) in phi.as_mut_slice().iter_mut().zip(&f) {
            *p -= step;
        }
        // source rows are linear; the exact step lands on U
        pin_sources(sys, phi.as_mut_slice());

        if !phi.is_finite() {
            return fail(phi, iter, history, NrFailure::NonFiniteIterate, log_abs_det);
        }
        f = match sys.residual(&phi, alpha) {
            Ok(f) => f,
            Err(_) => return fail(phi, iter, history, NrFailure::NonFiniteIterate, log_abs_det),
        };
        norm = euclidean_norm(&f);
        history.push(norm);
        if !norm.is_finite() {
            return fail(phi, iter, history, NrFailure::NonFiniteIterate, log_abs_det);
        }
        if norm < cfg.delta_con {
            return NrOutcome {
                converged: true,
                phi,
                iterations: iter,
                final_residual_norm: norm,
                failure: None,
                residual_history: history,
                log_abs_det,
            };
        }
    }
    fail(
        phi,
        cfg.max_iters,
        history,
        NrFailure::IterationLimit,
        log_abs_det,
    )
}
