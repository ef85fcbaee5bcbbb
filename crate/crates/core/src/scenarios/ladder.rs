use crate::network::CircuitSpec;

use super::ScenarioError;

/// Copper contact wire, Ω/m.
pub const DEFAULT_RESISTIVITY: f64 = 1.6e-4;

/// Node spacing of the one-feed reconstruction (0.0848 Ω per segment).
pub const TOY1_SPACING_M: f64 = 530.0;
/// Node spacing of the two-feed reconstruction (0.0232 Ω per segment).
pub const TOY2_SPACING_M: f64 = 145.0;

/// Supply limit of [`toy_case_1`], last converged point of a 10⁻⁵ α grid.
pub const TOY1_ALPHA_REF: f64 = 0.37206;
/// Supply limit of [`toy_case_2`], same procedure.
pub const TOY2_ALPHA_REF: f64 = 0.88646;

const SUBSTATION_VOLTS: f64 = 600.0;

/// Two nodes: a source of `volts` behind `ohms` feeding a load of `watts`.
pub fn single_load_circuit(volts: f64, ohms: f64, watts: f64) -> CircuitSpec {
    CircuitSpec::default()
        .node("n1")
        .node("n2")
        .resistor("n1", "n2", ohms)
        .source("n1", volts)
        .load("n2", watts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vehicle {
    pub position: f64,
    /// Positive draws power, negative regenerates.
    pub power: f64,
}

/// A single straight wire with a substation feeding it at one or more
/// points. Wire resistance is proportional to the distance between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderScenario {
    pub substation_voltage: f64,
    /// Wire positions where the substation connects, in metres.
    pub feed_points: Vec<f64>,
    /// Length of each feeder cable. Zero puts the source directly on the
    /// wire, which then requires a single feed point.
    pub feeder_length: f64,
    pub vehicles: Vec<Vehicle>,
    /// Extra wire nodes without load, e.g. intersections.
    pub junctions: Vec<f64>,
    /// Ω/m.
    pub resistivity: f64,
}

impl LadderScenario {
    pub fn segment_resistance(&self, distance: f64) -> f64 {
        self.resistivity * distance
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.resistivity > 0.0 && self.resistivity.is_finite()) {
            return Err(ScenarioError::Resistivity(self.resistivity));
        }
        if self.feed_points.is_empty() {
            return Err(ScenarioError::NoFeed);
        }
        let check = |what, p: f64| {
            if p >= 0.0 && p.is_finite() {
                Ok(())
            } else {
                Err(ScenarioError::Position { what, position: p })
            }
        };
        self.feed_points
            .iter()
            .try_for_each(|&p| check("feed", p))?;
        self.junctions
            .iter()
            .try_for_each(|&p| check("junction", p))?;
        self.vehicles
            .iter()
            .try_for_each(|v| check("vehicle", v.position))?;
        check("feeder length", self.feeder_length)?;
        let mut vp: Vec<f64> = self.vehicles.iter().map(|v| v.position).collect();
        vp.sort_by(f64::total_cmp);
        if let Some(w) = vp.windows(2).find(|w| w[0] == w[1]) {
            return Err(ScenarioError::SharedPosition(w[0]));
        }
        Ok(())
    }

    /// Wire node positions in increasing order, duplicates merged.
    pub fn wire_positions(&self) -> Vec<f64> {
        let mut pos: Vec<f64> = self
            .feed_points
            .iter()
            .chain(&self.junctions)
            .copied()
            .chain(self.vehicles.iter().map(|v| v.position))
            .collect();
        pos.sort_by(f64::total_cmp);
        pos.dedup();
        pos
    }

    /// Netlist with wire nodes `w000, w001, …` in position order and a
    /// source node `sub` (unless the feeder length is zero).
    pub fn to_circuit(&self) -> Result<CircuitSpec, ScenarioError> {
        self.validate()?;
        let positions = self.wire_positions();
        let name = |p: f64| {
            let k = positions
                .iter()
                .position(|&q| q == p)
                .expect("position is a wire node");
            format!("w{k:03}")
        };
        let mut spec = CircuitSpec::default();
        for k in 0..positions.len() {
            spec = spec.node(format!("w{k:03}"));
        }
        for (k, w) in positions.windows(2).enumerate() {
            spec = spec.resistor(
                format!("w{k:03}"),
                format!("w{:03}", k + 1),
                self.segment_resistance(w[1] - w[0]),
            );
        }
        if self.feeder_length == 0.0 {
            // validation downstream rejects several sources
            for &p in &self.feed_points {
                spec = spec.source(name(p), self.substation_voltage);
            }
        } else {
            spec = spec.node("sub").source("sub", self.substation_voltage);
            for &p in &self.feed_points {
                spec = spec.resistor("sub", name(p), self.segment_resistance(self.feeder_length));
            }
        }
        for v in &self.vehicles {
            spec = spec.load(name(v.position), v.power);
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// One feed point at the start of a ten-node wire; vehicles of 260 kW,
/// 20 kW, 30 kW and −5 kW (regenerating) at nodes 9, 7, 5 and 3.
///
/// The geometry is a reconstruction: node spacing is chosen so that every
/// segment lies in the 0.023–0.23 Ω range and the supply limit is close to
/// the published reference.
pub fn toy_case_1() -> LadderScenario {
    let s = TOY1_SPACING_M;
    let vehicles = [(9, 260e3), (7, 20e3), (5, 30e3), (3, -5e3)]
        .into_iter()
        .map(|(k, power)| Vehicle {
            position: k as f64 * s,
            power,
        })
        .collect();
    LadderScenario {
        substation_voltage: SUBSTATION_VOLTS,
        feed_points: vec![0.0],
        feeder_length: s,
        vehicles,
        junctions: (0..10).map(|k| k as f64 * s).collect(),
        resistivity: DEFAULT_RESISTIVITY,
    }
}

/// Feed points at both ends of a twelve-node wire, ten 250 kW vehicles on
/// the inner nodes. Reconstructed geometry as for [`toy_case_1`].
pub fn toy_case_2() -> LadderScenario {
    let s = TOY2_SPACING_M;
    LadderScenario {
        substation_voltage: SUBSTATION_VOLTS,
        feed_points: vec![0.0, 11.0 * s],
        feeder_length: s,
        vehicles: (1..=10)
            .map(|k| Vehicle {
                position: k as f64 * s,
                power: 250e3,
            })
            .collect(),
        junctions: Vec::new(),
        resistivity: DEFAULT_RESISTIVITY,
    }
}
