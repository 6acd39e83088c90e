use super::DenseMatrix;
use crate::error::{NnError, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Only the lower triangle is read.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(NnError::DimensionMismatch(format!(
            "eigenvalues of a {:?} matrix",
            a.shape()
        )));
    }
    let n = a.rows();
    let mut m = DenseMatrix::from_fn(n, n, |i, j| if i >= j { a[(i, j)] } else { a[(j, i)] });
    let total: f64 = m.frobenius();
    if total == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    if !converged {
        return Err(NnError::NonConvergence(MAX_SWEEPS));
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Operator 2-norm. Symmetric input: largest |eigenvalue|. Otherwise the
/// square root of the largest eigenvalue of the Gram matrix `AᵀA`.
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    // scale to unit max entry so the Gram matrix cannot overflow or underflow
    let s = a.max_abs();
    if s == 0.0 {
        return Ok(0.0);
    }
    let b = a.scale(1.0 / s);
    if b.is_symmetric() {
        let ev = symmetric_eigenvalues(&b)?;
        return Ok(s * ev.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    let small = if b.rows() < b.cols() { b.transpose() } else { b };
    let gram = small.transpose().matmul(&small)?;
    let ev = symmetric_eigenvalues(&gram)?;
    Ok(s * ev.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}
