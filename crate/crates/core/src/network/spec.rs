use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{NetlistError, NetworkError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resistor {
    pub a: String,
    pub b: String,
    pub ohms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoltageSource {
    pub node: String,
    pub volts: f64,
}

/// Constant-power load. Positive `watts` is consumption, negative is
/// regeneration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerLoad {
    pub node: String,
    pub watts: f64,
}

/// Declarative description of a DC network. This is also the netlist file
/// format (JSON with keys `nodes`, `resistors`, `sources`, `loads`).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSpec {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub resistors: Vec<Resistor>,
    #[serde(default)]
    pub sources: Vec<VoltageSource>,
    #[serde(default)]
    pub loads: Vec<PowerLoad>,
}

impl CircuitSpec {
    pub fn node(mut self, id: impl Into<String>) -> Self {
        self.nodes.push(id.into());
        self
    }

    pub fn resistor(mut self, a: impl Into<String>, b: impl Into<String>, ohms: f64) -> Self {
        self.resistors.push(Resistor {
            a: a.into(),
            b: b.into(),
            ohms,
        });
        self
    }

    pub fn source(mut self, node: impl Into<String>, volts: f64) -> Self {
        self.sources.push(VoltageSource {
            node: node.into(),
            volts,
        });
        self
    }

    pub fn load(mut self, node: impl Into<String>, watts: f64) -> Self {
        self.loads.push(PowerLoad {
            node: node.into(),
            watts,
        });
        self
    }

    pub fn from_json_str(text: &str) -> Result<Self, NetlistError> {
        serde_json::from_str(text).map_err(|e| NetlistError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("netlist serialization cannot fail")
    }

    /// Parses and validates a netlist document.
    pub fn parse_netlist(text: &str) -> Result<Self, NetlistError> {
        let spec = Self::from_json_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every structural invariant; the first violation found is
    /// returned.
    pub fn validate(&self) -> Result<(), NetworkError> {
        if self.nodes.is_empty() {
            return Err(NetworkError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, id) in self.nodes.iter().enumerate() {
            if index.insert(id.as_str(), i).is_some() {
                return Err(NetworkError::DuplicateNode(id.clone()));
            }
        }
        let lookup = |element: String, node: &str| {
            index
                .get(node)
                .copied()
                .ok_or_else(|| NetworkError::UnknownNode {
                    element,
                    node: node.to_owned(),
                })
        };

        let mut adjacency = vec![Vec::new(); self.nodes.len()];
        for (k, r) in self.resistors.iter().enumerate() {
            let a = lookup(format!("resistor #{k}"), &r.a)?;
            let b = lookup(format!("resistor #{k}"), &r.b)?;
            if !(r.ohms.is_finite() && r.ohms > 0.0) {
                return Err(NetworkError::InvalidResistance {
                    index: k,
                    ohms: r.ohms,
                });
            }
            if a == b {
                return Err(NetworkError::SelfLoop {
                    index: k,
                    node: r.a.clone(),
                });
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }

        let mut sourced = BTreeSet::new();
        for (k, s) in self.sources.iter().enumerate() {
            lookup(format!("source #{k}"), &s.node)?;
            if !s.volts.is_finite() {
                return Err(NetworkError::NonFinite {
                    element: format!("source #{k}"),
                });
            }
            if !sourced.insert(s.node.as_str()) {
                return Err(NetworkError::MultipleSources(s.node.clone()));
            }
        }
        if sourced.is_empty() {
            return Err(NetworkError::NoVoltageSource);
        }

        let mut loaded = BTreeSet::new();
        for (k, l) in self.loads.iter().enumerate() {
            lookup(format!("load #{k}"), &l.node)?;
            if !l.watts.is_finite() {
                return Err(NetworkError::NonFinite {
                    element: format!("load #{k}"),
                });
            }
            if !loaded.insert(l.node.as_str()) {
                return Err(NetworkError::MultipleLoads(l.node.clone()));
            }
            if sourced.contains(l.node.as_str()) {
                return Err(NetworkError::SourceAndLoad(l.node.clone()));
            }
        }

        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for &j in &adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(NetworkError::Disconnected {
                node: self.nodes[i].clone(),
            });
        }
        Ok(())
    }
}
