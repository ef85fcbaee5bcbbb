//! Circuit description, node partitioning and the modified nodal analysis
//! system with its residual and Jacobian.

mod mna;
mod partition;
mod spec;

use thiserror::Error;

pub use mna::{assemble, euclidean_norm, MnaSystem, Potentials, ZERO_POTENTIAL_GUARD};
pub use partition::{NodeKind, NodePartition};
pub use spec::{CircuitSpec, PowerLoad, Resistor, VoltageSource};

/// Structural problems with a [`CircuitSpec`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("network has no nodes")]
    Empty,
    #[error("node `{0}` is declared more than once")]
    DuplicateNode(String),
    #[error("{element} references unknown node `{node}`")]
    UnknownNode { element: String, node: String },
    #[error("resistor #{index} has invalid resistance {ohms} (must be finite and > 0)")]
    InvalidResistance { index: usize, ohms: f64 },
    #[error("resistor #{index} connects node `{node}` to itself")]
    SelfLoop { index: usize, node: String },
    #[error("{element} has a non-finite value")]
    NonFinite { element: String },
    #[error("network has no voltage source")]
    NoVoltageSource,
    #[error("node `{0}` carries more than one voltage source")]
    MultipleSources(String),
    #[error("node `{0}` carries more than one load (aggregate them first)")]
    MultipleLoads(String),
    #[error("node `{0}` carries both a voltage source and a load")]
    SourceAndLoad(String),
    #[error("network is disconnected: node `{node}` is unreachable")]
    Disconnected { node: String },
}

/// Failures reading a netlist document.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetlistError {
    #[error("netlist parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid netlist: {0}")]
    Invalid(#[from] NetworkError),
}

/// Failures evaluating `b`, `f` or the Jacobian at a given φ.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("potential at load node `{node}` is {volts} V, too close to zero")]
    ZeroPotential { node: String, volts: f64 },
    #[error("potential vector has {got} entries, system has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}
