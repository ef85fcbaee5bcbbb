//! Built-in circuits: the single-load reference circuit, two reconstructed
//! ladder test networks and a straight-route vehicle timeline.

mod ladder;
mod timeline;

use thiserror::Error;

pub use ladder::{
    single_load_circuit, toy_case_1, toy_case_2, LadderScenario, Vehicle, DEFAULT_RESISTIVITY,
};
pub use ladder::{TOY1_ALPHA_REF, TOY1_SPACING_M, TOY2_ALPHA_REF, TOY2_SPACING_M};
pub use timeline::{
    constant_demand_sweep, straight_route_timeline, DrivingProfile, RouteParams, TimelineStep,
};

use crate::network::{CircuitSpec, NetworkError};
use crate::search::SearchError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("resistivity must be positive and finite, got {0}")]
    Resistivity(f64),
    #[error("{what} position {position} m is negative or not finite")]
    Position { what: &'static str, position: f64 },
    #[error("two vehicles share position {0} m")]
    SharedPosition(f64),
    #[error("at least one feed point is required")]
    NoFeed,
    #[error("invalid route: {0}")]
    Route(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// A named circuit that can be materialized as a netlist.
pub trait Scenario: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn build(&self) -> CircuitSpec;
}

struct Builtin {
    name: &'static str,
    description: &'static str,
    build: fn() -> CircuitSpec,
}

impl Scenario for Builtin {
    fn name(&self) -> &'static str {
        self.name
    }
    fn description(&self) -> &'static str {
        self.description
    }
    fn build(&self) -> CircuitSpec {
        (self.build)()
    }
}

const BUILTINS: &[Builtin] = &[
    Builtin {
        name: "single-load",
        description: "600 V source, 0.1 ohm line, 1 MW load (alpha0 = 0.9)",
        build: || single_load_circuit(600.0, 0.1, 1e6),
    },
    Builtin {
        name: "single-load-light",
        description: "600 V source, 0.1 ohm line, 500 kW load (fully supplied)",
        build: || single_load_circuit(600.0, 0.1, 5e5),
    },
    Builtin {
        name: "toy1",
        description: "ladder with one feed point and loads of 260, 20, 30 and -5 kW",
        build: || {
            toy_case_1()
                .to_circuit()
                .expect("built-in geometry is valid")
        },
    },
    Builtin {
        name: "toy2",
        description: "ladder with two feed points and ten 250 kW loads",
        build: || {
            toy_case_2()
                .to_circuit()
                .expect("built-in geometry is valid")
        },
    },
];

pub fn scenario_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|b| b.name)
}

pub fn scenario(name: &str) -> Option<&'static dyn Scenario> {
    BUILTINS
        .iter()
        .find(|b| b.name == name)
        .map(|b| b as &dyn Scenario)
}
