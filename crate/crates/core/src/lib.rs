//! DC power flow for overhead-wire traction networks, with a search for the
//! largest uniform demand scaling α ∈ [0, 1] that the network can supply.
//!
//! The usual pipeline is [`network::assemble`] → [`search::search_efficient`]
//! → [`analysis::branch_report`].

pub mod analysis;
pub mod linsolve;
pub mod matrix;
pub mod network;
pub mod newton;
pub mod report;
pub mod scenarios;
pub mod search;

pub use network::{assemble, CircuitSpec, MnaSystem, Potentials};
pub use newton::{newton_solve, NrConfig, NrOutcome};
pub use search::{search_basic, search_efficient, SearchConfig, SearchResult};
