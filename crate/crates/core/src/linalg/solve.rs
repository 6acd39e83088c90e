use super::DenseMatrix;
use crate::error::{dim_err, NnError, Result};
use nalgebra::DMatrix;

fn to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

fn from_na(m: &DMatrix<f64>) -> DenseMatrix {
    DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Dense inverse by LU with partial pivoting.
pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return dim_err(format!("inverse of a {:?} matrix", a.shape()));
    }
    to_na(a)
        .try_inverse()
        .map(|m| from_na(&m))
        .ok_or_else(|| NnError::InvalidArgument("matrix is singular".into()))
}

/// Solves `A x = f` for symmetric positive definite `A` via Cholesky.
pub fn solve_spd(a: &DenseMatrix, f: &[f64]) -> Result<Vec<f64>> {
    if !a.is_square() || a.rows() != f.len() {
        return dim_err(format!("system {:?} with rhs of length {}", a.shape(), f.len()));
    }
    let chol = to_na(a).cholesky().ok_or(NnError::NotSpd)?;
    let x = chol.solve(&nalgebra::DVector::from_column_slice(f));
    Ok(x.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_diag() {
        let inv = inverse(&DenseMatrix::diag(&[2.0, 1.0])).unwrap();
        assert_eq!(inv, DenseMatrix::diag(&[0.5, 1.0]));
        assert!(inverse(&DenseMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn spd_solve() {
        let a = DenseMatrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = solve_spd(&a, &[1.0, 2.0]).unwrap();
        let r = a.mul_vec(&x).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-14 && (r[1] - 2.0).abs() < 1e-14);
        let neg = DenseMatrix::diag(&[1.0, -1.0]);
        assert!(matches!(solve_spd(&neg, &[1.0, 1.0]), Err(NnError::NotSpd)));
    }
}
