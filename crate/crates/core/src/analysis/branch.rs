use serde::Serialize;

use super::AnalysisError;
use crate::network::{euclidean_norm, CircuitSpec, MnaSystem};
use crate::report::{Cell, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResistorFlow {
    pub index: usize,
    pub a: String,
    pub b: String,
    pub ohms: f64,
    /// Positive when flowing from `a` to `b`.
    pub current: f64,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceFlow {
    pub node: String,
    pub volts: f64,
    /// Current injected into the network.
    pub current: f64,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadFlow {
    pub node: String,
    /// Unscaled demand.
    pub demanded: f64,
    pub potential: f64,
    /// Current delivered to the load by the network (KCL at its node).
    pub current: f64,
    /// Negative for a regenerating load.
    pub received: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    pub alpha: f64,
    pub resistors: Vec<ResistorFlow>,
    pub sources: Vec<SourceFlow>,
    pub loads: Vec<LoadFlow>,
    pub total_losses: f64,
    pub total_source_power: f64,
    pub total_received: f64,
}

/// Branch currents, source injections and delivered load power for a solved
/// potential vector.
///
/// Load and source currents come from Kirchhoff's current law at the node,
/// not from the load model, so `received ≈ α P` is a genuine check.
pub fn branch_report(
    spec: &CircuitSpec,
    sys: &MnaSystem,
    phi: &[f64],
    alpha: f64,
    delta_con: f64,
) -> Result<BranchReport, AnalysisError> {
    let residual = euclidean_norm(&sys.residual(phi, alpha)?);
    if residual.is_nan() || residual >= delta_con {
        return Err(AnalysisError::NotConverged {
            residual,
            tolerance: delta_con,
        });
    }
    let pos = |id: &str| {
        sys.position_of(id)
            .expect("spec and system come from the same netlist")
    };

    // net current leaving each node through the wires
    let mut outflow = vec![0.0; sys.dim()];
    let mut resistors = Vec::with_capacity(spec.resistors.len());
    for (index, r) in spec.resistors.iter().enumerate() {
        let (i, j) = (pos(&r.a), pos(&r.b));
        let current = (phi[i] - phi[j]) / r.ohms;
        outflow[i] += current;
        outflow[j] -= current;
        resistors.push(ResistorFlow {
            index,
            a: r.a.clone(),
            b: r.b.clone(),
            ohms: r.ohms,
            current,
            loss: current * current * r.ohms,
        });
    }

    let sources: Vec<SourceFlow> = spec
        .sources
        .iter()
        .map(|s| {
            let current = outflow[pos(&s.node)];
            SourceFlow {
                node: s.node.clone(),
                volts: s.volts,
                current,
                power: s.volts * current,
            }
        })
        .collect();

    let loads: Vec<LoadFlow> = spec
        .loads
        .iter()
        .map(|l| {
            let i = pos(&l.node);
            let current = -outflow[i];
            LoadFlow {
                node: l.node.clone(),
                demanded: l.watts,
                potential: phi[i],
                current,
                received: phi[i] * current,
            }
        })
        .collect();

    Ok(BranchReport {
        alpha,
        total_losses: resistors.iter().map(|r| r.loss).sum(),
        total_source_power: sources.iter().map(|s| s.power).sum(),
        total_received: loads.iter().map(|l| l.received).sum(),
        resistors,
        sources,
        loads,
    })
}

impl BranchReport {
    /// `|sources − received − losses| / max(|sources|, 1 W)`.
    pub fn balance_error(&self) -> f64 {
        let gap = self.total_source_power - self.total_received - self.total_losses;
        gap.abs() / self.total_source_power.abs().max(1.0)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(vec![
            "element",
            "name",
            "node_a",
            "node_b",
            "current_a",
            "power_w",
            "demanded_w",
        ]);
        for r in &self.resistors {
            t.push(vec![
                Cell::text("resistor"),
                Cell::text(format!("R{}", r.index)),
                Cell::text(&r.a),
                Cell::text(&r.b),
                Cell::Float(r.current),
                Cell::Float(r.loss),
                Cell::Empty,
            ]);
        }
        for s in &self.sources {
            t.push(vec![
                Cell::text("source"),
                Cell::text(&s.node),
                Cell::text(&s.node),
                Cell::Empty,
                Cell::Float(s.current),
                Cell::Float(s.power),
                Cell::Empty,
            ]);
        }
        for l in &self.loads {
            t.push(vec![
                Cell::text("load"),
                Cell::text(&l.node),
                Cell::text(&l.node),
                Cell::Empty,
                Cell::Float(l.current),
                Cell::Float(l.received),
                Cell::Float(l.demanded),
            ]);
        }
        for (name, value) in [
            ("losses", self.total_losses),
            ("source_power", self.total_source_power),
            ("received", self.total_received),
        ] {
            t.push(vec![
                Cell::text("total"),
                Cell::text(name),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Float(value),
                Cell::Empty,
            ]);
        }
        t
    }
}

/// One row per node in system order.
pub fn potentials_table(sys: &MnaSystem, phi: &[f64]) -> Table {
    let part = sys.partition();
    let mut t = Table::new(vec!["node", "block", "potential_v"]);
    for (i, id) in part.ids().iter().enumerate() {
        t.push(vec![
            Cell::text(id),
            Cell::text(part.kind(i).label()),
            Cell::Float(phi[i]),
        ]);
    }
    t
}
