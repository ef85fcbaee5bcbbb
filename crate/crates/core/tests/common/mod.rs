//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tracpf_core::matrix::DenseMatrix;
use tracpf_core::network::{CircuitSpec, MnaSystem};
use tracpf_core::scenarios::{LadderScenario, Vehicle, DEFAULT_RESISTIVITY};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest solvable scaling of a single load behind one resistor.
pub fn closed_form_alpha(volts: f64, ohms: f64, watts: f64) -> f64 {
    if watts <= 0.0 {
        1.0
    } else {
        (volts * volts / (4.0 * ohms * watts)).min(1.0)
    }
}

/// Load-side potential on the high-voltage branch.
pub fn high_root(volts: f64, ohms: f64, watts: f64, alpha: f64) -> f64 {
    let disc = (volts * volts - 4.0 * alpha * watts * ohms).max(0.0);
    0.5 * (volts + disc.sqrt())
}

/// Connected random circuit with `2..=max_nodes` nodes, one source at `s`,
/// a random spanning tree plus a few chords, and loads on about half the
/// other nodes.
pub fn random_circuit(rng: &mut impl Rng, max_nodes: usize) -> CircuitSpec {
    let n = rng.gen_range(2..=max_nodes);
    let names: Vec<String> = (0..n)
        .map(|k| if k == 0 { "s".into() } else { format!("n{k}") })
        .collect();
    let mut spec = CircuitSpec::default();
    for name in &names {
        spec = spec.node(name.clone());
    }
    let mut edges = Vec::new();
    for k in 1..n {
        edges.push((rng.gen_range(0..k), k));
    }
    for _ in 0..rng.gen_range(0..=n / 2) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !edges.contains(&(a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    for (a, b) in edges {
        spec = spec.resistor(names[a].clone(), names[b].clone(), rng.gen_range(0.02..0.3));
    }
    spec = spec.source("s", rng.gen_range(500.0..800.0));
    let mut with_load = false;
    for name in &names[1..] {
        if rng.gen_bool(0.5) {
            spec = spec.load(name.clone(), rng.gen_range(-50e3..400e3));
            with_load = true;
        }
    }
    if !with_load {
        spec = spec.load(names[n - 1].clone(), rng.gen_range(50e3..400e3));
    }
    spec
}

/// Random straight wire with one or two feed points and a few vehicles.
/// Sections of 1–4 km with up to 400 kW per vehicle are often heavily
/// overloaded.
pub fn random_ladder(rng: &mut impl Rng) -> LadderScenario {
    ladder_with(rng, 1000.0..4000.0, -20e3..400e3)
}

/// Sections of 0.5–2 km with vehicles up to 300 kW.
pub fn realistic_ladder(rng: &mut impl Rng) -> LadderScenario {
    ladder_with(rng, 500.0..2000.0, -20e3..300e3)
}

fn ladder_with(rng: &mut impl Rng, length: Range<f64>, power: Range<f64>) -> LadderScenario {
    let length = rng.gen_range(length).round();
    let feed_points = if rng.gen_bool(0.5) {
        vec![0.0]
    } else {
        vec![0.0, length]
    };
    let mut slots: Vec<f64> = (1..40)
        .map(|k| (k as f64 * length / 40.0).round())
        .collect();
    slots.shuffle(rng);
    let vehicles = slots[..rng.gen_range(2..=6)]
        .iter()
        .map(|&position| Vehicle {
            position,
            power: rng.gen_range(power.clone()),
        })
        .collect();
    LadderScenario {
        substation_voltage: 600.0,
        feed_points,
        feeder_length: 100.0,
        vehicles,
        junctions: vec![length],
        resistivity: DEFAULT_RESISTIVITY,
    }
}

/// Central finite-difference Jacobian of the residual.
pub fn fd_jacobian(sys: &MnaSystem, phi: &[f64], alpha: f64) -> DenseMatrix {
    let n = phi.len();
    let mut jac = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let h = 1e-6 * phi[j].abs().max(1.0);
        let mut plus = phi.to_vec();
        let mut minus = phi.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let fp = sys.residual(&plus, alpha).unwrap();
        let fm = sys.residual(&minus, alpha).unwrap();
        for i in 0..n {
            jac.set(i, j, (fp[i] - fm[i]) / (2.0 * h));
        }
    }
    jac
}

pub fn frobenius(m: &DenseMatrix) -> f64 {
    (0..m.n_rows())
        .flat_map(|i| m.row(i).iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

/// Exact inverse by Gauss-Jordan elimination with partial pivoting.
pub fn gauss_jordan_inverse(a: &DenseMatrix) -> Option<DenseMatrix> {
    let n = a.n_rows();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[p][col] == 0.0 {
            return None;
        }
        m.swap(col, p);
        let d = m[col][col];
        m[col].iter_mut().for_each(|v| *v /= d);
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            let f = row[col];
            if r != col && f != 0.0 {
                row.iter_mut()
                    .zip(&pivot_row)
                    .for_each(|(v, p)| *v -= f * p);
            }
        }
    }
    DenseMatrix::from_rows(&m.into_iter().map(|r| r[n..].to_vec()).collect::<Vec<_>>())
}

/// Largest current imbalance over all non-source nodes, computed directly
/// from the element list.
pub fn kcl_mismatch(spec: &CircuitSpec, potential: &HashMap<String, f64>, alpha: f64) -> f64 {
    let mut net: HashMap<&str, f64> = spec.nodes.iter().map(|n| (n.as_str(), 0.0)).collect();
    for r in &spec.resistors {
        let i = (potential[&r.a] - potential[&r.b]) / r.ohms;
        *net.get_mut(r.a.as_str()).unwrap() += i;
        *net.get_mut(r.b.as_str()).unwrap() -= i;
    }
    for l in &spec.loads {
        *net.get_mut(l.node.as_str()).unwrap() += alpha * l.watts / potential[&l.node];
    }
    spec.sources.iter().for_each(|s| {
        net.remove(s.node.as_str());
    });
    net.values().map(|v| v.abs()).fold(0.0, f64::max)
}

pub fn by_name(sys: &MnaSystem, phi: &[f64]) -> HashMap<String, f64> {
    sys.partition()
        .ids()
        .iter()
        .cloned()
        .zip(phi.iter().copied())
        .collect()
}
