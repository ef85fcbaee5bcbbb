//! Linear algebra kernel used by the Newton iteration and the diagnostics.
//!
//! Solvers are interchangeable behind [`LinearSolver`] and are looked up by
//! name through [`linear_solver`]. The default, `"auto"`, factors densely
//! below a node-count threshold and sparsely above it.

mod condest;
mod dense;
mod sparse;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use condest::inverse_norm_one_estimate;
pub use dense::DenseLu;
pub use sparse::SparseLu;

use crate::matrix::CsrMatrix;

/// Relative pivot threshold below which a factorization is declared singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-12;

/// Default size at which `"auto"` switches from dense to sparse factorization.
pub const DEFAULT_DENSE_THRESHOLD: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinsolveError {
    #[error("dimension mismatch: matrix is {matrix}x{matrix}, right-hand side has {rhs} entries")]
    DimensionMismatch { matrix: usize, rhs: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// An LU-type factorization `P A = L U` of a square matrix.
pub trait Factorization: Send + Sync {
    fn dim(&self) -> usize;
    /// True when a pivot fell below [`SINGULAR_PIVOT_RATIO`] times the
    /// largest entry of the factored matrix.
    fn is_singular(&self) -> bool;
    /// `ln |det A|`, or `-inf` for a singular factorization.
    fn log_abs_det(&self) -> f64;
    /// Overwrites `rhs` with `A⁻¹ rhs`. Must not be called when singular.
    fn solve_in_place(&self, rhs: &mut [f64]);
    /// Overwrites `rhs` with `A⁻ᵀ rhs`. Must not be called when singular.
    fn solve_transpose_in_place(&self, rhs: &mut [f64]);
}

/// A strategy for factoring circuit matrices.
pub trait LinearSolver: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn factor(&self, a: &CsrMatrix) -> Box<dyn Factorization>;
}

/// Picks [`DenseLu`] below `dense_threshold` rows and [`SparseLu`] otherwise.
#[derive(Debug, Clone, Copy)]
pub struct AutoLu {
    pub dense_threshold: usize,
}

impl Default for AutoLu {
    fn default() -> Self {
        Self {
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
        }
    }
}

impl LinearSolver for AutoLu {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn factor(&self, a: &CsrMatrix) -> Box<dyn Factorization> {
        if a.dim() < self.dense_threshold {
            DenseLu.factor(a)
        } else {
            SparseLu.factor(a)
        }
    }
}

type SolverCtor = fn() -> Arc<dyn LinearSolver>;

const REGISTRY: &[(&str, SolverCtor)] = &[
    ("auto", || Arc::new(AutoLu::default())),
    ("dense-lu", || Arc::new(DenseLu)),
    ("sparse-lu", || Arc::new(SparseLu)),
];

/// Names of all registered linear solvers.
pub fn linear_solver_names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|(name, _)| *name)
}

/// Looks up a registered linear solver by name.
pub fn linear_solver(name: &str) -> Option<Arc<dyn LinearSolver>> {
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, ctor)| ctor())
}

pub fn default_linear_solver() -> Arc<dyn LinearSolver> {
    Arc::new(AutoLu::default())
}

/// Outcome of a single linear solve.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolveReport {
    /// `None` exactly when `singular` is set.
    pub solution: Option<Vec<f64>>,
    pub log_abs_det: f64,
    pub singular: bool,
}

/// Solves `A x = rhs` with the default solver.
pub fn solve_linear(a: &CsrMatrix, rhs: &[f64]) -> Result<LinearSolveReport, LinsolveError> {
    solve_linear_with(&AutoLu::default(), a, rhs)
}

pub fn solve_linear_with(
    solver: &dyn LinearSolver,
    a: &CsrMatrix,
    rhs: &[f64],
) -> Result<LinearSolveReport, LinsolveError> {
    if rhs.len() != a.dim() {
        return Err(LinsolveError::DimensionMismatch {
            matrix: a.dim(),
            rhs: rhs.len(),
        });
    }
    let lu = solver.factor(a);
    if lu.is_singular() {
        return Ok(LinearSolveReport {
            solution: None,
            log_abs_det: f64::NEG_INFINITY,
            singular: true,
        });
    }
    let mut x = rhs.to_vec();
    lu.solve_in_place(&mut x);
    Ok(LinearSolveReport {
        solution: Some(x),
        log_abs_det: lu.log_abs_det(),
        singular: false,
    })
}

/// Estimates the 1-norm condition number `‖A‖₁ ‖A⁻¹‖₁`.
///
/// Returns `+inf` for singular input. The result is never below 1.
pub fn condition_estimate(a: &CsrMatrix) -> f64 {
    condition_estimate_with(&AutoLu::default(), a)
}

pub fn condition_estimate_with(solver: &dyn LinearSolver, a: &CsrMatrix) -> f64 {
    if a.dim() == 0 {
        return 1.0;
    }
    let lu = solver.factor(a);
    condition_from_factors(a, lu.as_ref())
}

/// Condition estimate reusing an existing factorization of `a`.
pub fn condition_from_factors(a: &CsrMatrix, lu: &dyn Factorization) -> f64 {
    if lu.is_singular() {
        return f64::INFINITY;
    }
    let kappa = a.norm_one() * inverse_norm_one_estimate(lu);
    if kappa.is_finite() {
        kappa.max(1.0)
    } else {
        f64::INFINITY
    }
}
