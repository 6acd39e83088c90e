use super::DenseMatrix;
use crate::error::{dim_err, Result};

/// Compressed sparse row matrix that stores exactly the nonzero entries.
///
/// Explicit zeros are never stored, so `nnz()` is the `‖·‖₀` of the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<u32>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

fn idx(n: usize) -> u32 {
    u32::try_from(n).expect("sparse index exceeds u32")
}

impl CsrMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        if c == 0.0 {
            return Self::zeros(n, n);
        }
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).map(idx).collect(),
            col_idx: (0..n).map(idx).collect(),
            values: vec![c; n],
        }
    }

    pub fn from_dense(a: &DenseMatrix) -> Self {
        let mut b = CsrBuilder::new(a.cols());
        for i in 0..a.rows() {
            for (j, &v) in a.row(i).iter().enumerate() {
                b.push(j, v);
            }
            b.end_row();
        }
        b.finish()
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// entries that end up exactly zero are dropped.
    pub fn from_triplets(rows: usize, cols: usize, mut t: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(i, j, _)) = t.iter().find(|(i, j, _)| *i >= rows || *j >= cols) {
            return dim_err(format!("triplet ({i},{j}) outside {rows}x{cols}"));
        }
        t.sort_by_key(|a| (a.0, a.1));
        let mut b = CsrBuilder::new(cols);
        let mut k = 0;
        for i in 0..rows {
            while k < t.len() && t[k].0 == i {
                let j = t[k].1;
                let mut v = 0.0;
                while k < t.len() && t[k].0 == i && t[k].1 == j {
                    v += t[k].2;
                    k += 1;
                }
                b.push(j, v);
            }
            b.end_row();
        }
        Ok(b.finish())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (s, e) = (self.row_ptr[i] as usize, self.row_ptr[i + 1] as usize);
        self.col_idx[s..e]
            .iter()
            .zip(&self.values[s..e])
            .map(|(&j, &v)| (j as usize, v))
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        (self.row_ptr[i + 1] - self.row_ptr[i]) as usize
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return dim_err(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            ));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let (s, e) = (self.row_ptr[i] as usize, self.row_ptr[i + 1] as usize);
            let mut acc = 0.0;
            for k in s..e {
                acc += self.values[k] * x[self.col_idx[k] as usize];
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Sparse product `self * other` (row-by-row accumulation).
    pub fn matmul(&self, other: &CsrMatrix) -> Result<CsrMatrix> {
        if self.cols != other.rows {
            return dim_err(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut acc = vec![0.0; other.cols];
        let mut touched = vec![false; other.cols];
        let mut pattern: Vec<usize> = Vec::new();
        let mut b = CsrBuilder::new(other.cols);
        for i in 0..self.rows {
            for (k, a) in self.row(i) {
                for (j, v) in other.row(k) {
                    if !touched[j] {
                        touched[j] = true;
                        pattern.push(j);
                    }
                    acc[j] += a * v;
                }
            }
            pattern.sort_unstable();
            for &j in &pattern {
                b.push(j, acc[j]);
                acc[j] = 0.0;
                touched[j] = false;
            }
            pattern.clear();
            b.end_row();
        }
        Ok(b.finish())
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                t.push((j, i, v));
            }
        }
        CsrMatrix::from_triplets(self.cols, self.rows, t).expect("in range")
    }

    pub fn scale(mut self, c: f64) -> CsrMatrix {
        if c == 0.0 {
            return CsrMatrix::zeros(self.rows, self.cols);
        }
        for v in &mut self.values {
            *v *= c;
        }
        if self.values.contains(&0.0) {
            // underflow produced exact zeros
            return CsrMatrix::from_dense(&self.to_dense());
        }
        self
    }

    /// Block-diagonal assembly `diag(m_1, ..., m_k)`.
    pub fn block_diag(parts: &[&CsrMatrix]) -> CsrMatrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut b = CsrBuilder::new(cols);
        let mut off = 0;
        for p in parts {
            for i in 0..p.rows {
                for (j, v) in p.row(i) {
                    b.push(off + j, v);
                }
                b.end_row();
            }
            off += p.cols;
        }
        b.finish()
    }

    /// Vertical stacking `[m_1; ...; m_k]`.
    pub fn vstack(parts: &[&CsrMatrix]) -> Result<CsrMatrix> {
        let cols = parts.first().map_or(0, |p| p.cols);
        if parts.iter().any(|p| p.cols != cols) {
            return dim_err("vstack with differing column counts");
        }
        let mut b = CsrBuilder::new(cols);
        for p in parts {
            for i in 0..p.rows {
                for (j, v) in p.row(i) {
                    b.push(j, v);
                }
                b.end_row();
            }
        }
        Ok(b.finish())
    }

    /// Horizontal stacking `[m_1 ... m_k]`.
    pub fn hstack(parts: &[&CsrMatrix]) -> Result<CsrMatrix> {
        let rows = parts.first().map_or(0, |p| p.rows);
        if parts.iter().any(|p| p.rows != rows) {
            return dim_err("hstack with differing row counts");
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut b = CsrBuilder::new(cols);
        for i in 0..rows {
            let mut off = 0;
            for p in parts {
                for (j, v) in p.row(i) {
                    b.push(off + j, v);
                }
                off += p.cols;
            }
            b.end_row();
        }
        Ok(b.finish())
    }

    pub fn add(&self, other: &CsrMatrix) -> Result<CsrMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return dim_err("sparse add with differing shapes");
        }
        let mut t = Vec::with_capacity(self.nnz() + other.nnz());
        for m in [self, other] {
            for i in 0..m.rows {
                for (j, v) in m.row(i) {
                    t.push((i, j, v));
                }
            }
        }
        CsrMatrix::from_triplets(self.rows, self.cols, t)
    }
}

/// Row-by-row builder that drops exact zeros. Columns within a row must be
/// pushed in increasing order.
pub(crate) struct CsrBuilder {
    cols: usize,
    row_ptr: Vec<u32>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

impl CsrBuilder {
    pub(crate) fn new(cols: usize) -> Self {
        Self {
            cols,
            row_ptr: vec![0],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, j: usize, v: f64) {
        debug_assert!(j < self.cols);
        if v != 0.0 {
            self.col_idx.push(idx(j));
            self.values.push(v);
        }
    }

    pub(crate) fn end_row(&mut self) {
        self.row_ptr.push(idx(self.values.len()));
    }

    pub(crate) fn finish(mut self) -> CsrMatrix {
        self.col_idx.shrink_to_fit();
        self.values.shrink_to_fit();
        CsrMatrix {
            rows: self.row_ptr.len() - 1,
            cols: self.cols,
            row_ptr: self.row_ptr,
            col_idx: self.col_idx,
            values: self.values,
        }
    }
}
