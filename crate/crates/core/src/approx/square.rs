use super::ErrorCertificate;
use crate::error::{arg_err, Result};
use crate::linalg::DenseMatrix;
use crate::nn::{from_weights_strict, NeuralNetwork};

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

fn correction_row(k: i32) -> [f64; 4] {
    [-pow2(-2 * k + 3), pow2(-2 * k + 4), -pow2(-2 * k + 3), 1.0]
}

/// Strict ReLU network with `m` layers realizing the interpolant `f_{m-1}`
/// of `x²` on `[0, 1]`.
pub fn build_square(m: usize) -> Result<NeuralNetwork> {
    if m < 2 {
        return arg_err(format!("square network needs m >= 2, got {m}"));
    }
    let b = vec![0.0, -0.5, -1.0, 0.0];
    let alpha = DenseMatrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0], vec![1.0]])?;
    let mut w = vec![(alpha, b.clone())];
    for k in 2..m {
        let saw = vec![2.0, -4.0, 2.0, 0.0];
        let a = DenseMatrix::from_rows(&[
            saw.clone(),
            saw.clone(),
            saw,
            correction_row(k as i32).to_vec(),
        ])?;
        w.push((a, b.clone()));
    }
    let omega = DenseMatrix::from_rows(&[correction_row(m as i32).to_vec()])?;
    w.push((omega, vec![0.0]));
    from_weights_strict(&w, 1)
}

/// Independent evaluation of `f_n(x) = x - Σ_{k=1}^n g^k(x) / 2^{2k}` with
/// the tent map iterated directly.
pub fn square_reference(n: usize, x: f64) -> f64 {
    let mut g = x;
    let mut f = x;
    for k in 1..=n {
        g = if g < 0.5 { 2.0 * g } else { 2.0 - 2.0 * g };
        f -= g / pow2(2 * k as i32);
    }
    f
}

/// Measures `sup |x² - R(φ^m_sq)(x)|` on `{k / 2^m}` for `2 ≤ m ≤ 24`. The
/// realization is piecewise linear with breakpoints at `k / 2^{m-1}`, so the
/// sup over `[0, 1]` is attained on this grid.
pub fn square_error(m: usize) -> Result<ErrorCertificate> {
    if !(2..=24).contains(&m) {
        return arg_err(format!("square_error needs 2 <= m <= 24, got {m}"));
    }
    let net = build_square(m)?;
    let n = 1usize << m;
    let mut measured = 0.0f64;
    for k in 0..=n {
        let x = k as f64 / n as f64;
        let y = net.realize(&[x])?[0];
        measured = measured.max((x * x - y).abs());
    }
    Ok(ErrorCertificate::new(
        pow2(-2 * m as i32),
        measured,
        format!("dyadic nodes and midpoints k/2^{m}, k = 0..={n}"),
        None,
    ))
}
