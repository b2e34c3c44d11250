//! Symmetric sparse matrices stored as the upper triangle in CSR form.

use std::fmt::Write as _;
use std::path::Path;

use faer::Mat;

use crate::error::{Error, Result};
use crate::mesh_io::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SymmetricSparseMatrix {
    /// Builds the matrix from upper-triangle triplets `(i, j, v)` with `i ≤ j`.
    ///
    /// Duplicate entries are summed in the order they appear in `triplets`,
    /// so the result is bit-for-bit reproducible for a fixed input order.
    pub fn from_upper_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        for &(i, j, _) in &triplets {
            assert!(i <= j && j < dim, "triplet ({i}, {j}) outside upper triangle of {dim}");
        }
        // stable: preserves the summation order of duplicates
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0; dim + 1];
        let mut col_idx = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut last = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        SymmetricSparseMatrix {
            dim,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_upper_triplets(dim, (0..dim).map(|i| (i, i, 1.0)).collect())
    }

    /// Upper triangle of a dense symmetric matrix (exact zeros dropped).
    pub fn from_dense_upper(a: &Mat<f64>) -> Self {
        let n = a.nrows();
        let mut t = Vec::new();
        for i in 0..n {
            for j in i..n {
                if a[(i, j)] != 0.0 {
                    t.push((i, j, a[(i, j)]));
                }
            }
        }
        Self::from_upper_triplets(n, t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stored (upper-triangle) entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates stored entries `(i, j, v)` with `i ≤ j`, sorted by `(i, j)`.
    pub fn iter_upper(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |p| (i, self.col_idx[p], self.values[p]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        let cols = &self.col_idx[self.row_ptr[r]..self.row_ptr[r + 1]];
        cols.binary_search(&c)
            .map(|p| self.values[self.row_ptr[r] + p])
            .unwrap_or(0.0)
    }

    /// `y = A x` using both triangles.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for (i, j, v) in self.iter_upper() {
            y[i] += v * x[j];
            if i != j {
                y[j] += v * x[i];
            }
        }
        y
    }

    /// `xᵀ A x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.iter_upper()
            .map(|(i, j, v)| {
                let t = v * x[i] * x[j];
                if i == j {
                    t
                } else {
                    2.0 * t
                }
            })
            .sum()
    }

    /// Frobenius norm of the full symmetric matrix.
    pub fn frobenius_norm(&self) -> f64 {
        self.iter_upper()
            .map(|(i, j, v)| if i == j { v * v } else { 2.0 * v * v })
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// Dense copy with both triangles filled.
    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::<f64>::zeros(self.dim, self.dim);
        for (i, j, v) in self.iter_upper() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }

    /// Upper-triangle coordinate list: `i j value` per line, sorted by `(i, j)`.
    pub fn to_coo_string(&self) -> String {
        let mut s = String::new();
        for (i, j, v) in self.iter_upper() {
            let _ = writeln!(s, "{i} {j} {}", fmt_f64(v));
        }
        s
    }

    pub fn write_coo(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_coo_string()).map_err(|e| Error::io(path, e))
    }
}
