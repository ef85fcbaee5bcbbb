use std::ops::Deref;

use super::{CircuitSpec, EvalError, NetworkError, NodePartition};
use crate::matrix::CsrMatrix;

/// Smallest admissible |φ| at a load node, in volts.
pub const ZERO_POTENTIAL_GUARD: f64 = 1e-9;

/// Node potentials in system order (see [`NodePartition`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Potentials(Vec<f64>);

impl Potentials {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn filled(n: usize, volts: f64) -> Self {
        Self(vec![volts; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Deref for Potentials {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Potentials {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Modified nodal analysis system `A φ = b(φ, α)`.
///
/// `A` holds conductance stamps on resistor-only and load rows and identity
/// rows for source nodes. It does not depend on φ or α.
#[derive(Debug, Clone)]
pub struct MnaSystem {
    matrix: CsrMatrix,
    demand: Vec<f64>,
    source: Vec<f64>,
    partition: NodePartition,
}

/// Validates `spec` and builds its MNA system.
pub fn assemble(spec: &CircuitSpec) -> Result<MnaSystem, NetworkError> {
    spec.validate()?;
    let partition = NodePartition::from_spec(spec);
    let n = partition.len();
    let sources = partition.source_nodes();
    let pos = |id: &str| partition.position(id).expect("validated node id");

    let mut triplets = Vec::with_capacity(4 * spec.resistors.len() + n);
    for r in &spec.resistors {
        let (a, b) = (pos(&r.a), pos(&r.b));
        let g = 1.0 / r.ohms;
        for (row, other) in [(a, b), (b, a)] {
            if !sources.contains(&row) {
                triplets.push((row, row, g));
                triplets.push((row, other, -g));
            }
        }
    }
    for i in sources.clone() {
        triplets.push((i, i, 1.0));
    }
    let matrix = CsrMatrix::from_triplets(n, triplets);

    let mut demand = vec![0.0; partition.n_load()];
    for l in &spec.loads {
        demand[pos(&l.node) - partition.load_nodes().start] = l.watts;
    }
    let mut source = vec![0.0; partition.n_source()];
    for s in &spec.sources {
        source[pos(&s.node) - sources.start] = s.volts;
    }

    Ok(MnaSystem {
        matrix,
        demand,
        source,
        partition,
    })
}

impl MnaSystem {
    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    /// Demanded power per load node (W), in partition order.
    pub fn demand(&self) -> &[f64] {
        &self.demand
    }

    /// Source voltage per source node (V), in partition order.
    pub fn source(&self) -> &[f64] {
        &self.source
    }

    pub fn partition(&self) -> &NodePartition {
        &self.partition
    }

    pub fn dim(&self) -> usize {
        self.partition.len()
    }

    /// True when every source sits at the same voltage.
    pub fn has_uniform_sources(&self) -> bool {
        self.source.windows(2).all(|w| w[0] == w[1])
    }

    pub fn mean_source_level(&self) -> f64 {
        self.source.iter().sum::<f64>() / self.source.len() as f64
    }

    fn check(&self, phi: &[f64]) -> Result<(), EvalError> {
        if phi.len() != self.dim() {
            return Err(EvalError::DimensionMismatch {
                expected: self.dim(),
                got: phi.len(),
            });
        }
        for i in self.partition.load_nodes() {
            if phi[i].is_nan() || phi[i].abs() < ZERO_POTENTIAL_GUARD {
                return Err(EvalError::ZeroPotential {
                    node: self.partition.ids()[i].clone(),
                    volts: phi[i],
                });
            }
        }
        Ok(())
    }

    /// Right-hand side `b(φ, α)`: zero on resistor rows, `−α P_i / φ_i` on
    /// load rows (positive P is consumption), `U` on source rows.
    pub fn rhs(&self, phi: &[f64], alpha: f64) -> Result<Vec<f64>, EvalError> {
        self.check(phi)?;
        let mut b = vec![0.0; self.dim()];
        let loads = self.partition.load_nodes();
        for (k, i) in loads.enumerate() {
            b[i] = -(alpha * self.demand[k]) / phi[i];
        }
        for (k, i) in self.partition.source_nodes().enumerate() {
            b[i] = self.source[k];
        }
        Ok(b)
    }

    /// `f(φ, α) = A φ − b(φ, α)`.
    pub fn residual(&self, phi: &[f64], alpha: f64) -> Result<Vec<f64>, EvalError> {
        let b = self.rhs(phi, alpha)?;
        let mut f = self.matrix.mul_vec(phi);
        f.iter_mut().zip(b).for_each(|(fi, bi)| *fi -= bi);
        Ok(f)
    }

    /// Exact derivative of [`residual`](Self::residual) with respect to φ:
    /// `A` plus `−α P_i / φ_i²` on the load diagonal.
    pub fn jacobian(&self, phi: &[f64], alpha: f64) -> Result<CsrMatrix, EvalError> {
        self.check(phi)?;
        let delta: Vec<(usize, f64)> = self
            .partition
            .load_nodes()
            .zip(&self.demand)
            .map(|(i, &p)| (i, -alpha * p / (phi[i] * phi[i])))
            .collect();
        Ok(self.matrix.with_diagonal_added(&delta))
    }

    /// Potentials of the α = 0 problem, which is linear: `A φ = (0, 0, U)`.
    pub fn unloaded_rhs(&self) -> Vec<f64> {
        let mut b = vec![0.0; self.dim()];
        for (k, i) in self.partition.source_nodes().enumerate() {
            b[i] = self.source[k];
        }
        b
    }

    /// System position of node `id`.
    pub fn position_of(&self, id: &str) -> Option<usize> {
        self.partition.position(id)
    }
}

pub fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;

    fn two_node(p: f64) -> MnaSystem {
        let spec = CircuitSpec::default()
            .node("n1")
            .node("n2")
            .resistor("n1", "n2", 0.1)
            .source("n1", 600.0)
            .load("n2", p);
        assemble(&spec).unwrap()
    }

    #[test]
    fn two_node_matrix_and_ordering() {
        let sys = two_node(1e6);
        assert_eq!(sys.partition().ids(), ["n2", "n1"]);
        assert_eq!(sys.partition().load_nodes(), 0..1);
        assert_eq!(sys.partition().source_nodes(), 1..2);
        assert!(sys.partition().resistor_nodes().is_empty());
        let expect = DenseMatrix::from_rows(&[vec![10.0, -10.0], vec![0.0, 1.0]]).unwrap();
        let got = sys.matrix().to_dense();
        for i in 0..2 {
            for j in 0..2 {
                assert!((got.get(i, j) - expect.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chain_middle_node_row_sums_to_zero() {
        let spec = CircuitSpec::default()
            .node("s")
            .node("m")
            .node("l")
            .resistor("s", "m", 0.2)
            .resistor("m", "l", 0.5)
            .source("s", 600.0);
        let sys = assemble(&spec).unwrap();
        let m = sys.position_of("m").unwrap();
        assert!(sys.partition().resistor_nodes().contains(&m));
        let sum: f64 = sys.matrix().row(m).map(|(_, v)| v).sum();
        assert!(sum.abs() < 1e-12);
        assert!((sys.matrix().get(m, m) - (5.0 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn rhs_examples() {
        let sys = two_node(1e6);
        assert_eq!(sys.rhs(&[123.0, 456.0], 0.0).unwrap(), vec![0.0, 600.0]);
        let b = sys.rhs(&[600.0, 600.0], 1.0).unwrap();
        assert!((b[0] + 1666.67).abs() < 0.01);
        assert_eq!(b[1], 600.0);

        let regen = two_node(-5e3);
        let b = regen.rhs(&[600.0, 600.0], 1.0).unwrap();
        assert!((b[0] - 8.333).abs() < 1e-3);
    }

    #[test]
    fn residual_vanishes_at_known_roots() {
        let crit = two_node(9e5);
        let f = crit.residual(&[300.0, 600.0], 1.0).unwrap();
        assert!(f.iter().all(|v| v.abs() < 1e-10), "{f:?}");

        let half = two_node(1e6);
        let f = half.residual(&[500.0, 600.0], 0.5).unwrap();
        assert!(f.iter().all(|v| v.abs() < 1e-10), "{f:?}");

        let f = half.residual(&[600.0, 600.0], 0.0).unwrap();
        assert!(f.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn jacobian_examples() {
        let sys = two_node(1e6);
        assert_eq!(sys.jacobian(&[500.0, 600.0], 0.0).unwrap(), *sys.matrix());
        let j = sys.jacobian(&[500.0, 600.0], 0.5).unwrap();
        assert!((j.get(0, 0) - 8.0).abs() < 1e-12);

        let crit = two_node(9e5);
        let j = crit.jacobian(&[300.0, 600.0], 1.0).unwrap().to_dense();
        let det = j.get(0, 0) * j.get(1, 1) - j.get(0, 1) * j.get(1, 0);
        assert!(det.abs() < 1e-12);
    }

    #[test]
    fn zero_potential_is_rejected() {
        let sys = two_node(1e6);
        let err = sys.residual(&[0.0, 600.0], 1.0).unwrap_err();
        assert!(matches!(err, EvalError::ZeroPotential { ref node, .. } if node == "n2"));
        assert!(sys.jacobian(&[1e-10, 600.0], 1.0).is_err());
        assert!(sys.rhs(&[f64::NAN, 600.0], 1.0).is_err());
        assert!(matches!(
            sys.rhs(&[1.0], 1.0),
            Err(EvalError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }
}
