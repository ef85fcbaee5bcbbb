use super::{Factorization, LinearSolver, SINGULAR_PIVOT_RATIO};
use crate::matrix::{CsrMatrix, DenseMatrix};

/// Dense LU with partial pivoting.
#[derive(Debug, Clone, Copy, Default)]
pub struct DenseLu;

impl LinearSolver for DenseLu {
    fn name(&self) -> &'static str {
        "dense-lu"
    }

    fn factor(&self, a: &CsrMatrix) -> Box<dyn Factorization> {
        Box::new(DenseLuFactors::new(a.to_dense()))
    }
}

pub(crate) struct DenseLuFactors {
    // unit-lower L below the diagonal, U on and above
    lu: DenseMatrix,
    // perm[k] = original row placed at position k
    perm: Vec<usize>,
    singular: bool,
    log_abs_det: f64,
}

impl DenseLuFactors {
    pub(crate) fn new(mut lu: DenseMatrix) -> Self {
        let n = lu.n_rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let tol = SINGULAR_PIVOT_RATIO * lu.max_abs();
        let mut singular = n > 0 && lu.max_abs() == 0.0;
        let mut log_abs_det = 0.0;

        for k in 0..n {
            if singular {
                break;
            }
            let (p, pmax) = (k..n)
                .map(|i| (i, lu.get(i, k).abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if pmax.is_nan() || pmax < tol || pmax == 0.0 {
                singular = true;
                break;
            }
            lu.swap_rows(k, p);
            perm.swap(k, p);
            let pivot = lu.get(k, k);
            log_abs_det += pivot.abs().ln();
            for i in k + 1..n {
                let l = lu.get(i, k) / pivot;
                if l == 0.0 {
                    continue;
                }
                lu.set(i, k, l);
                for j in k + 1..n {
                    let v = lu.get(i, j) - l * lu.get(k, j);
                    lu.set(i, j, v);
                }
            }
        }

        Self {
            lu,
            perm,
            singular,
            log_abs_det: if singular {
                f64::NEG_INFINITY
            } else {
                log_abs_det
            },
        }
    }
}

impl Factorization for DenseLuFactors {
    fn dim(&self) -> usize {
        self.perm.len()
    }

    fn is_singular(&self) -> bool {
        self.singular
    }

    fn log_abs_det(&self) -> f64 {
        self.log_abs_det
    }

    fn solve_in_place(&self, rhs: &mut [f64]) {
        debug_assert!(!self.singular);
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu.get(i, j) * y[j]).sum();
            y[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu.get(i, j) * y[j]).sum();
            y[i] = (y[i] - s) / self.lu.get(i, i);
        }
        rhs.copy_from_slice(&y);
    }

    fn solve_transpose_in_place(&self, rhs: &mut [f64]) {
        debug_assert!(!self.singular);
        // Aᵀ = Uᵀ Lᵀ P
        let n = self.dim();
        let mut w = rhs.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu.get(j, i) * w[j]).sum();
            w[i] = (w[i] - s) / self.lu.get(i, i);
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu.get(j, i) * w[j]).sum();
            w[i] -= s;
        }
        for (k, &p) in self.perm.iter().enumerate() {
            rhs[p] = w[k];
        }
    }
}
