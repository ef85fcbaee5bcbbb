use std::collections::{BTreeMap, BTreeSet};

use super::{Factorization, LinearSolver, SINGULAR_PIVOT_RATIO};
use crate::matrix::CsrMatrix;

/// Right-looking sparse LU with row partial pivoting.
///
/// Columns keep their natural order; only rows are permuted. Fill-in is
/// tracked per row, which is cheap for the chain-like conductance patterns of
/// overhead-wire networks.
#[derive(Debug, Clone, Copy, Default)]
pub struct SparseLu;

impl LinearSolver for SparseLu {
    fn name(&self) -> &'static str {
        "sparse-lu"
    }

    fn factor(&self, a: &CsrMatrix) -> Box<dyn Factorization> {
        Box::new(SparseLuFactors::new(a))
    }
}

struct SparseLuFactors {
    n: usize,
    // pivot_row[k] = original row eliminated at step k
    pivot_row: Vec<usize>,
    // step_of[r] = step at which original row r became pivot
    step_of: Vec<usize>,
    // multipliers of step k, keyed by original row
    l_cols: Vec<Vec<(usize, f64)>>,
    // row k of U; first entry is the diagonal
    u_rows: Vec<Vec<(usize, f64)>>,
    singular: bool,
    log_abs_det: f64,
}

impl SparseLuFactors {
    fn new(a: &CsrMatrix) -> Self {
        let n = a.dim();
        let tol = SINGULAR_PIVOT_RATIO * a.max_abs();
        let mut rows: Vec<BTreeMap<usize, f64>> = (0..n).map(|i| a.row(i).collect()).collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (i, row) in rows.iter().enumerate() {
            for &j in row.keys() {
                col_rows[j].insert(i);
            }
        }

        let mut out = Self {
            n,
            pivot_row: Vec::with_capacity(n),
            step_of: vec![usize::MAX; n],
            l_cols: Vec::with_capacity(n),
            u_rows: Vec::with_capacity(n),
            singular: n > 0 && a.max_abs() == 0.0,
            log_abs_det: 0.0,
        };

        for k in 0..n {
            if out.singular {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for &r in &col_rows[k] {
                let v = rows[r][&k].abs();
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((r, v));
                }
            }
            let Some((p, _)) = best.filter(|&(_, v)| v >= tol && v > 0.0) else {
                out.singular = true;
                break;
            };

            let prow = std::mem::take(&mut rows[p]);
            for &j in prow.keys() {
                col_rows[j].remove(&p);
            }
            let pivot = prow[&k];
            let tail: Vec<(usize, f64)> = prow.range(k + 1..).map(|(&j, &v)| (j, v)).collect();

            let mut lcol = Vec::new();
            for r in std::mem::take(&mut col_rows[k]) {
                let factor = rows[r].remove(&k).unwrap_or(0.0) / pivot;
                lcol.push((r, factor));
                if factor == 0.0 {
                    continue;
                }
                for &(j, v) in &tail {
                    let e = rows[r].entry(j).or_insert_with(|| {
                        col_rows[j].insert(r);
                        0.0
                    });
                    *e -= factor * v;
                }
            }

            out.log_abs_det += pivot.abs().ln();
            out.pivot_row.push(p);
            out.step_of[p] = k;
            out.l_cols.push(lcol);
            let mut urow = Vec::with_capacity(tail.len() + 1);
            urow.push((k, pivot));
            urow.extend(tail);
            out.u_rows.push(urow);
        }
        if out.singular {
            out.log_abs_det = f64::NEG_INFINITY;
        }
        out
    }
}

impl Factorization for SparseLuFactors {
    fn dim(&self) -> usize {
        self.n
    }

    fn is_singular(&self) -> bool {
        self.singular
    }

    fn log_abs_det(&self) -> f64 {
        self.log_abs_det
    }

    fn solve_in_place(&self, rhs: &mut [f64]) {
        debug_assert!(!self.singular);
        let mut b = rhs.to_vec();
        let mut y = vec![0.0; self.n];
        for k in 0..self.n {
            y[k] = b[self.pivot_row[k]];
            for &(r, f) in &self.l_cols[k] {
                b[r] -= f * y[k];
            }
        }
        for k in (0..self.n).rev() {
            let row = &self.u_rows[k];
            let s: f64 = row[1..].iter().map(|&(j, u)| u * y[j]).sum();
            y[k] = (y[k] - s) / row[0].1;
        }
        rhs.copy_from_slice(&y);
    }

    fn solve_transpose_in_place(&self, rhs: &mut [f64]) {
        debug_assert!(!self.singular);
        // Aᵀ = Uᵀ Lᵀ P with P taking original row order to step order
        let mut w = rhs.to_vec();
        for k in 0..self.n {
            let row = &self.u_rows[k];
            w[k] /= row[0].1;
            let wk = w[k];
            for &(j, u) in &row[1..] {
                w[j] -= u * wk;
            }
        }
        for k in (0..self.n).rev() {
            let s: f64 = self.l_cols[k]
                .iter()
                .map(|&(r, f)| f * w[self.step_of[r]])
                .sum();
            w[k] -= s;
        }
        for (k, &p) in self.pivot_row.iter().enumerate() {
            rhs[p] = w[k];
        }
    }
}
