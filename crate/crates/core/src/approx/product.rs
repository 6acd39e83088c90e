use super::{build_square, sample_bounded_matrix, ErrorCertificate};
use crate::calculus::{concatenate, parallelize};
use crate::error::{arg_err, Result};
use crate::linalg::{matricize, spectral_norm, vectorize, CsrMatrix, DenseMatrix};
use crate::nn::{from_weights_strict, NeuralNetwork};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

/// Smallest square depth `m ≥ 2` with `bound² · 2^{-2m} ≤ eps`, the exact
/// sup error of the product network.
pub fn scalar_mult_depth(eps: f64, bound: f64) -> usize {
    (half_log2(bound * bound / eps).ceil().max(2.0)) as usize
}

/// `max(2, ⌊½ log₂(2C²/ε)⌋)` with `C = max{1, M}`.
pub fn scalar_mult_depth_floor(eps: f64, bound: f64) -> usize {
    let c = bound.max(1.0);
    (half_log2(2.0 * c * c / eps).floor().max(2.0)) as usize
}

/// Product network on `[-M, M]²` built from two square networks of depth `m`:
/// `W(([M², -M²], 0)) • P(sq, sq) • W((D₁, 0), (D₂, 0))`, where `D₁` maps
/// `(x, y)` to `±(x ± y)/2M` and `D₂` sums the positive and negative parts.
pub fn build_scalar_mult_depth(m: usize, bound: f64) -> Result<NeuralNetwork> {
    if !(bound > 0.0) {
        return arg_err("product bound must be positive");
    }
    let s = 1.0 / (2.0 * bound);
    let d1 = DenseMatrix::from_rows(&[vec![s, s], vec![-s, -s], vec![s, -s], vec![-s, s]])?;
    let d2 = DenseMatrix::from_rows(&[vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 1.0]])?;
    let split = from_weights_strict(&[(d1, vec![0.0; 4]), (d2, vec![0.0; 2])], 1)?;
    let squares = parallelize(vec![build_square(m)?, build_square(m)?])?;
    let m2 = bound * bound;
    let out = NeuralNetwork::affine_dense(&DenseMatrix::from_rows(&[vec![m2, -m2]])?, &[0.0])?;
    concatenate(out, concatenate(squares, split)?)
}

/// Product network with `|xy - R(x, y)| ≤ eps` on `[-M, M]²`.
pub fn build_scalar_mult(eps: f64, bound: f64) -> Result<NeuralNetwork> {
    if !(eps > 0.0) || eps >= bound * bound {
        return arg_err(format!("need 0 < eps < M² (eps = {eps}, M = {bound})"));
    }
    build_scalar_mult_depth(scalar_mult_depth(eps, bound), bound)
}

/// Smallest `m ≥ 2` with `n·sqrt(dl)·M²·2^{-2m} ≤ eps`.
pub fn matrix_mult_depth(d: usize, n: usize, l: usize, eps: f64, bound: f64) -> usize {
    let k = n as f64 * ((d * l) as f64).sqrt();
    (half_log2(k * bound * bound / eps).ceil().max(2.0)) as usize
}

/// `max(2, ⌊½ log₂(2n·sqrt(dl)·C²/ε)⌋)` with `C = max{1, M}`.
pub fn matrix_mult_depth_floor(d: usize, n: usize, l: usize, eps: f64, bound: f64) -> usize {
    let c = bound.max(1.0);
    let k = n as f64 * ((d * l) as f64).sqrt();
    (half_log2(2.0 * k * c * c / eps).floor().max(2.0)) as usize
}

/// Matrix product network `Π`: input `(vect A, vect B)` with `A ∈ ℝ^{d×n}`,
/// `B ∈ ℝ^{n×l}`, output `vect(AB)` (column-major, so `mat` recovers `AB`).
/// Every entry product uses a scalar product network of depth `m`.
pub fn build_matrix_mult_depth(d: usize, n: usize, l: usize, m: usize, bound: f64) -> Result<NeuralNetwork> {
    if d == 0 || n == 0 || l == 0 {
        return arg_err("matrix dimensions must be positive");
    }
    let dim_in = n * (d + l);
    let template = build_scalar_mult_depth(m, bound)?;
    let mut rows_cols = Vec::with_capacity(d * l);
    for k in 0..l {
        for i in 0..d {
            let mut terms = Vec::with_capacity(n);
            for j in 0..n {
                let a_ij = i + d * j;
                let b_jk = d * n + j + n * k;
                let sel = CsrMatrix::from_triplets(2, dim_in, vec![(0, a_ij, 1.0), (1, b_jk, 1.0)])?;
                terms.push(concatenate(template.clone(), NeuralNetwork::affine(sel, vec![0.0; 2])?)?);
            }
            let sum = NeuralNetwork::affine(CsrMatrix::from_dense(&DenseMatrix::from_fn(1, n, |_, _| 1.0)), vec![0.0])?;
            let body = concatenate(sum, parallelize(terms)?)?;
            rows_cols.push(concatenate(body, replicate(dim_in, n)?)?);
        }
    }
    concatenate(parallelize(rows_cols)?, replicate(dim_in, d * l)?)
}

fn replicate(n: usize, copies: usize) -> Result<NeuralNetwork> {
    let id = CsrMatrix::identity(n);
    NeuralNetwork::affine(CsrMatrix::vstack(&vec![&id; copies])?, vec![0.0; n * copies])
}

/// `Π` with spectral error at most `eps` for `‖A‖₂, ‖B‖₂ ≤ M`.
pub fn build_matrix_mult(d: usize, n: usize, l: usize, eps: f64, bound: f64) -> Result<NeuralNetwork> {
    if !(eps > 0.0) || !(bound > 0.0) {
        return arg_err("need eps > 0 and M > 0");
    }
    build_matrix_mult_depth(d, n, l, matrix_mult_depth(d, n, l, eps, bound), bound)
}

/// Max `|xy - R(x, y)|` over a `grid x grid` lattice of `[-M, M]²`.
pub fn verify_scalar_mult(net: &NeuralNetwork, bound: f64, claimed: f64, grid: usize) -> Result<ErrorCertificate> {
    if grid < 2 {
        return arg_err("grid needs at least 2 points per axis");
    }
    let step = 2.0 * bound / (grid - 1) as f64;
    let mut worst = 0.0f64;
    for i in 0..grid {
        let x = -bound + step * i as f64;
        for j in 0..grid {
            let y = -bound + step * j as f64;
            let r = net.realize(&[x, y])?[0];
            worst = worst.max((x * y - r).abs());
        }
    }
    Ok(ErrorCertificate::new(
        claimed,
        worst,
        format!("{grid}x{grid} lattice on [-{bound}, {bound}]^2"),
        None,
    ))
}

/// Max spectral error over `samples` random pairs with `‖A‖₂, ‖B‖₂ ≤ M`.
#[allow(clippy::too_many_arguments)]
pub fn verify_matrix_mult(
    net: &NeuralNetwork,
    d: usize,
    n: usize,
    l: usize,
    bound: f64,
    claimed: f64,
    samples: usize,
    seed: u64,
) -> Result<ErrorCertificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let a = sample_bounded_matrix(&mut rng, d, n, bound);
        let b = sample_bounded_matrix(&mut rng, n, l, bound);
        let mut x = vectorize(&a);
        x.extend(vectorize(&b));
        let out = matricize(&net.realize(&x)?, d, l)?;
        worst = worst.max(spectral_norm(&a.matmul(&b)?.sub(&out)?)?);
    }
    Ok(ErrorCertificate::new(
        claimed,
        worst,
        format!("{samples} rejection-sampled pairs with spectral norm <= {bound}"),
        Some(seed),
    ))
}
