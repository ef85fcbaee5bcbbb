//! Small dense and compressed-sparse-row matrix types.
//!
//! Circuit matrices are assembled once as [`CsrMatrix`] and handed to a
//! [`LinearSolver`](crate::linsolve::LinearSolver), which decides whether to
//! factor them densely or sparsely.

use std::fmt;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from row vectors. Returns `None` for ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Option<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return None;
        }
        Some(Self {
            n_rows,
            n_cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n_cols {
            self.data.swap(a * self.n_cols + j, b * self.n_cols + j);
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_cols, "dimension mismatch in mul_vec");
        (0..self.n_rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.n_cols)
            .map(|j| (0..self.n_rows).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Converts a square dense matrix to CSR, dropping exact zeros.
    pub fn to_csr(&self) -> CsrMatrix {
        assert!(self.is_square(), "CsrMatrix is square-only");
        let mut triplets = Vec::new();
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                let v = self.get(i, j);
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        CsrMatrix::from_triplets(self.n_rows, triplets)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.n_rows).map(|i| self.row(i)))
            .finish()
    }
}

/// Square matrix in compressed sparse row form. Column indices are sorted
/// within each row and unique.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds an `n`×`n` matrix from `(row, col, value)` triplets. Duplicate
    /// positions are summed; explicit zeros are kept in the pattern.
    pub fn from_triplets(
        n: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, j, v) in triplets {
            assert!(i < n && j < n, "triplet ({i}, {j}) outside {n}x{n}");
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            for (j, v) in row {
                if col_idx.len() > *row_ptr.last().unwrap() && *col_idx.last().unwrap() == j {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, (0..n).map(|i| (i, i, 1.0)))
    }

    /// Convenience for tests and small literals.
    pub fn from_dense_rows(rows: &[Vec<f64>]) -> Option<Self> {
        let d = DenseMatrix::from_rows(rows)?;
        d.is_square().then(|| d.to_csr())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates the stored entries of row `i` as `(col, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "dimension mismatch in mul_vec");
        (0..self.n)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Returns a copy with `delta` added on the listed diagonal positions.
    pub fn with_diagonal_added(&self, delta: &[(usize, f64)]) -> Self {
        let mut out = self.clone();
        let mut missing = Vec::new();
        for &(i, d) in delta {
            let range = out.row_ptr[i]..out.row_ptr[i + 1];
            match out.col_idx[range.clone()].binary_search(&i) {
                Ok(k) => out.values[range.start + k] += d,
                Err(_) => missing.push((i, i, d)),
            }
        }
        if missing.is_empty() {
            out
        } else {
            let triplets: Vec<_> = (0..out.n)
                .flat_map(|i| out.row(i).map(move |(j, v)| (i, j, v)).collect::<Vec<_>>())
                .chain(missing)
                .collect();
            Self::from_triplets(out.n, triplets)
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d.set(i, j, v);
            }
        }
        d
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut cols = vec![0.0; self.n];
        for (&j, v) in self.col_idx.iter().zip(&self.values) {
            cols[j] += v.abs();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn is_symmetric_on(&self, indices: std::ops::Range<usize>, tol: f64) -> bool {
        indices.clone().all(|i| {
            self.row(i)
                .filter(|(j, _)| indices.contains(j))
                .all(|(j, v)| (v - self.get(j, i)).abs() <= tol)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates() {
        let m = CsrMatrix::from_triplets(2, [(0, 0, 1.0), (0, 0, 2.0), (1, 0, -1.0), (0, 1, 4.0)]);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(0, 1), 4.0);
        assert_eq!(m.get(1, 0), -1.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.nnz(), 3);
    }

    #[test]
    fn diagonal_update_inserts_missing_entries() {
        let m = CsrMatrix::from_triplets(2, [(0, 1, 1.0)]);
        let m2 = m.with_diagonal_added(&[(0, 2.0), (1, 3.0)]);
        assert_eq!(
            m2.to_dense(),
            DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 3.0]]).unwrap()
        );
    }

    #[test]
    fn norms() {
        let m = CsrMatrix::from_dense_rows(&[vec![10.0, -10.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(m.norm_one(), 11.0);
        assert_eq!(m.to_dense().norm_one(), 11.0);
        assert_eq!(m.mul_vec(&[1.0, 2.0]), vec![-10.0, 2.0]);
    }
}
