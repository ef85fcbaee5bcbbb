use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use super::CircuitSpec;

/// Which equation block a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    /// Connected to resistors only.
    Resistor,
    /// Carries a power load.
    Load,
    /// Pinned by a voltage source.
    Source,
}

impl NodeKind {
    pub fn label(self) -> &'static str {
        match self {
            NodeKind::Resistor => "I",
            NodeKind::Load => "J",
            NodeKind::Source => "I0",
        }
    }
}

/// Fixed ordering of the nodes: resistor-only block, then load block, then
/// source block, each sorted by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct NodePartition {
    ids: Vec<String>,
    position: BTreeMap<String, usize>,
    n_resistor: usize,
    n_load: usize,
    n_source: usize,
}

impl NodePartition {
    pub fn from_spec(spec: &CircuitSpec) -> Self {
        let sources: BTreeSet<&str> = spec.sources.iter().map(|s| s.node.as_str()).collect();
        let loads: BTreeSet<&str> = spec.loads.iter().map(|l| l.node.as_str()).collect();
        let mut blocks: [Vec<&str>; 3] = Default::default();
        for id in &spec.nodes {
            let kind = if sources.contains(id.as_str()) {
                2
            } else if loads.contains(id.as_str()) {
                1
            } else {
                0
            };
            blocks[kind].push(id);
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        let [i, j, i0] = blocks;
        let (n_resistor, n_load, n_source) = (i.len(), j.len(), i0.len());
        let ids: Vec<String> = i
            .into_iter()
            .chain(j)
            .chain(i0)
            .map(str::to_owned)
            .collect();
        let position = ids
            .iter()
            .enumerate()
            .map(|(k, id)| (id.clone(), k))
            .collect();
        Self {
            ids,
            position,
            n_resistor,
            n_load,
            n_source,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn resistor_nodes(&self) -> Range<usize> {
        0..self.n_resistor
    }

    pub fn load_nodes(&self) -> Range<usize> {
        self.n_resistor..self.n_resistor + self.n_load
    }

    pub fn source_nodes(&self) -> Range<usize> {
        self.n_resistor + self.n_load..self.len()
    }

    pub fn n_load(&self) -> usize {
        self.n_load
    }

    pub fn n_source(&self) -> usize {
        self.n_source
    }

    pub fn n_resistor(&self) -> usize {
        self.n_resistor
    }

    pub fn kind(&self, position: usize) -> NodeKind {
        if self.resistor_nodes().contains(&position) {
            NodeKind::Resistor
        } else if self.load_nodes().contains(&position) {
            NodeKind::Load
        } else {
            NodeKind::Source
        }
    }

    /// Node ids in system order.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.position.get(id).copied()
    }
}
