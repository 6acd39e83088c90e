//! Deterministic fixtures shared by the benchmarks.

use nncalc::DenseMatrix;

/// A dense `n x n` matrix with entries in `[-1, 1]` from a fixed recurrence.
pub fn fixture_matrix(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| ((7 * i + 13 * j + 1) as f64).sin())
}

/// Evenly spaced points in `[0, 1]`.
pub fn unit_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}
