//! Search for the largest demand scaling α ∈ [0, 1] at which the scaled DC
//! power flow problem is solvable.
//!
//! Two interchangeable strategies implement [`AlphaSearch`]:
//!
//! * `"basic"` ([`IncrementalSearch`]) walks a uniform α grid upwards and
//!   stops at the first Newton failure.
//! * `"efficient"` ([`BufferedBisection`]) starts at α = 1 and bisects
//!   against a stack of failed α values, doubling the Newton budget and
//!   tightening the active tolerance as the bracket closes.
//!
//! Both are available by name through [`strategy`].

mod bisection;
mod dichotomy;
mod incremental;

use thiserror::Error;

pub use bisection::BufferedBisection;
pub use dichotomy::{dichotomy_grid, verify_dichotomy, DichotomyCheck};
pub use incremental::{alpha_grid, IncrementalSearch};

use crate::network::{MnaSystem, Potentials};
use crate::newton::{ConfigError, NewtonError, NrConfig, NrFailure, NrOutcome};

pub const DEFAULT_DELTA_ALPHA: f64 = 1e-2;
pub const DEFAULT_DELTA_OPT: f64 = 1e-5;
pub const DEFAULT_DELTA_ACT: f64 = 1e-2;
pub const DEFAULT_C_BI: f64 = 0.5;
pub const DEFAULT_MAX_OUTER: usize = 200;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Grid step of the incremental strategy.
    pub delta_alpha: f64,
    /// Final bracket tolerance of the bisection strategy.
    pub delta_opt: f64,
    /// Initial active bracket tolerance; divided by 10 on each adaptation.
    pub delta_act: f64,
    /// Bisection coefficient.
    pub c_bi: f64,
    /// Newton settings; `max_iters` is the initial budget and is doubled on
    /// each adaptation.
    pub nr: NrConfig,
    /// Safety cap on outer iterations.
    pub max_outer: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            delta_alpha: DEFAULT_DELTA_ALPHA,
            delta_opt: DEFAULT_DELTA_OPT,
            delta_act: DEFAULT_DELTA_ACT,
            c_bi: DEFAULT_C_BI,
            nr: NrConfig::default(),
            max_outer: DEFAULT_MAX_OUTER,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.nr.validate()?;
        let range = |field, value: f64, ok: bool, rule| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::OutOfRange { field, value, rule })
            }
        };
        range(
            "delta_opt",
            self.delta_opt,
            self.delta_opt > 0.0 && self.delta_opt <= self.delta_act,
            "0 < delta_opt <= delta_act",
        )?;
        range(
            "delta_act",
            self.delta_act,
            self.delta_act <= 1.0,
            "delta_opt <= delta_act <= 1",
        )?;
        range(
            "c_bi",
            self.c_bi,
            self.c_bi > 0.0 && self.c_bi < 1.0,
            "0 < c_bi < 1",
        )?;
        range(
            "delta_alpha",
            self.delta_alpha,
            self.delta_alpha > 0.0 && self.delta_alpha < 1.0,
            "0 < delta_alpha < 1",
        )?;
        range(
            "max_outer",
            self.max_outer as f64,
            self.max_outer >= 1,
            "max_outer >= 1",
        )
    }
}

/// One Newton invocation made during a search.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub alpha: f64,
    pub converged: bool,
    pub iterations: usize,
    pub residual_norm: f64,
    /// Newton iteration budget in force for this call.
    pub nr_budget: usize,
    pub failure: Option<NrFailure>,
}

impl TraceEntry {
    fn record(alpha: f64, budget: usize, out: &NrOutcome) -> Self {
        Self {
            alpha,
            converged: out.converged,
            iterations: out.iterations,
            residual_norm: out.final_residual_norm,
            nr_budget: budget,
            failure: out.failure,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub strategy: &'static str,
    /// Largest α at which Newton converged.
    pub alpha_hat: f64,
    pub phi_hat: Potentials,
    /// `alpha_hat == 1`.
    pub fully_supplied: bool,
    pub trace: Vec<TraceEntry>,
    /// α values still in the failure buffer at termination.
    pub failed_buffer: Vec<f64>,
    pub outer_iterations: usize,
    pub bisections: usize,
    pub adaptations: usize,
    /// Newton budget in force at termination.
    pub final_nr_budget: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("cannot initialize the search: {0}")]
    Setup(#[from] NewtonError),
    #[error("no termination within {max_outer} outer iterations")]
    MaxOuterExceeded {
        max_outer: usize,
        trace: Vec<TraceEntry>,
    },
}

/// A strategy for locating the solvability boundary α₀.
pub trait AlphaSearch: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn search(&self, sys: &MnaSystem, cfg: &SearchConfig) -> Result<SearchResult, SearchError>;
}

type StrategyCtor = fn() -> Box<dyn AlphaSearch>;

const STRATEGIES: &[(&str, StrategyCtor)] = &[
    ("efficient", || Box::new(BufferedBisection)),
    ("basic", || Box::new(IncrementalSearch)),
];

pub fn strategy_names() -> impl Iterator<Item = &'static str> {
    STRATEGIES.iter().map(|(n, _)| *n)
}

pub fn strategy(name: &str) -> Option<Box<dyn AlphaSearch>> {
    STRATEGIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| c())
}

/// Incremental grid walk; see [`IncrementalSearch`].
pub fn search_basic(sys: &MnaSystem, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    IncrementalSearch.search(sys, cfg)
}

/// Buffered bisection; see [`BufferedBisection`].
pub fn search_efficient(sys: &MnaSystem, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    BufferedBisection.search(sys, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        assert_eq!(strategy("basic").unwrap().name(), "basic");
        assert_eq!(strategy("efficient").unwrap().name(), "efficient");
        assert!(strategy("fmincon").is_none());
        assert_eq!(strategy_names().collect::<Vec<_>>(), ["efficient", "basic"]);
    }

    #[test]
    fn config_invariants() {
        assert!(SearchConfig::default().validate().is_ok());
        let bad = |f: fn(&mut SearchConfig)| {
            let mut c = SearchConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.delta_opt = 0.0));
        assert!(bad(|c| c.delta_opt = 0.1));
        assert!(bad(|c| c.delta_act = 2.0));
        assert!(bad(|c| c.c_bi = 1.0));
        assert!(bad(|c| c.c_bi = 0.0));
        assert!(bad(|c| c.delta_alpha = 1.0));
        assert!(bad(|c| c.max_outer = 0));
        assert!(bad(|c| c.nr.max_iters = 0));
    }
}
