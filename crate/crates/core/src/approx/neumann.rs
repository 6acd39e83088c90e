//! Neumann-series networks and the matrix inversion network.
//!
//! With `A = I - αB`, the partial sums `S_N = Σ_{k<2^N} A^k` are computed from
//! halved powers: `φ` maps `A` to `((A/2)², 3/8·S₁)`, each `ψ_k` maps
//! `(A_{2^k}, σ_k)` to `(A_{2^k}², (A_{2^k} + 2^{-2^k} I)·σ_k)`, and the final
//! stage `ψ̃` rescales by `C(N) = 2^{2^N+1}/3`.

use super::{build_matrix_mult_depth, sample_bounded_matrix, ErrorCertificate};
use crate::calculus::{concatenate, identity_network, parallelize, sparse_concatenate};
use crate::error::{arg_err, Result};
use crate::linalg::{inverse, matricize, spectral_norm, vectorize, CsrMatrix, DenseMatrix};
use crate::nn::NeuralNetwork;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Largest `N` whose scale factor `C(N)` is finite in double precision.
const MAX_STAGES: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversionSchedule {
    pub d: usize,
    pub eps: f64,
    pub alpha: f64,
    pub delta: f64,
    /// `N(ε/α, δ)`
    pub big_n: usize,
    /// `n(ε/α, δ)`
    pub little_n: usize,
}

/// `N(ε/α, δ) = ⌈log₂ max{log₂((1-δ)ε/α) / log₂ δ, 2}⌉` (1 when `δ = 0`) and
/// `n = 2^{N-1} + 1 + ⌊½ log₂(d²α/ε)⌋`, clamped below by 2.
pub fn inversion_schedule(d: usize, eps: f64, alpha: f64, delta: f64) -> Result<InversionSchedule> {
    if d == 0 {
        return arg_err("dimension must be positive");
    }
    if !(eps > 0.0 && eps < 0.25) {
        return arg_err(format!("eps must lie in (0, 1/4), got {eps}"));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return arg_err(format!("alpha must be positive, got {alpha}"));
    }
    if !(0.0..=1.0 - 1e-12).contains(&delta) {
        return arg_err(format!("delta must lie in [0, 1 - 1e-12], got {delta}"));
    }
    let e = eps / alpha;
    let big_n = if delta == 0.0 {
        1
    } else {
        let ratio = ((1.0 - delta) * e).log2() / delta.log2();
        ratio.max(2.0).log2().ceil() as usize
    };
    let tail = (0.5 * ((d * d) as f64 / e).log2()).floor() as i64;
    let little_n = ((1i64 << (big_n - 1)) + 1 + tail).max(2) as usize;
    Ok(InversionSchedule {
        d,
        eps,
        alpha,
        delta,
        big_n,
        little_n,
    })
}

/// `C(N) = 2^{2^N + 1} / 3`.
pub fn neumann_scale(big_n: usize) -> f64 {
    2f64.powi((1i32 << big_n) + 1) / 3.0
}

fn vect_eye(d: usize, c: f64) -> Vec<f64> {
    vectorize(&DenseMatrix::identity(d)).into_iter().map(|v| v * c).collect()
}

fn stacked_eye(n: usize, copies: usize, c: f64) -> Result<CsrMatrix> {
    let id = CsrMatrix::scaled_identity(n, c);
    CsrMatrix::vstack(&vec![&id; copies])
}

fn product(d: usize, m: usize) -> Result<NeuralNetwork> {
    build_matrix_mult_depth(d, d, d, m, 1.0)
}

/// `φ`: `vect A ↦ (vect A₂, vect σ₁) ≈ ((A/2)², 3/8·(I + A))`.
fn first_stage(d: usize, m: usize) -> Result<NeuralNetwork> {
    let q = d * d;
    let pi = product(d, m)?;
    let depth = pi.depth();
    let halves = NeuralNetwork::affine(stacked_eye(q, 2, 0.5)?, vec![0.0; 2 * q])?;
    let square = concatenate(pi, halves)?;
    let shift = NeuralNetwork::affine(CsrMatrix::scaled_identity(q, 0.375), vect_eye(d, 0.375))?;
    let carry = concatenate(shift, identity_network(q, depth)?)?;
    let both = parallelize(vec![square, carry])?;
    concatenate(both, NeuralNetwork::affine(stacked_eye(q, 2, 1.0)?, vec![0.0; 2 * q])?)
}

/// `ψ_k`: `(A_{2^k}, σ_k) ↦ (A_{2^k}², (A_{2^k} + 2^{-2^k} I)·σ_k)`.
fn doubling_stage(d: usize, k: usize, m: usize) -> Result<NeuralNetwork> {
    let q = d * d;
    let p = parallelize(vec![product(d, m)?, product(d, m)?])?;
    let mut t = Vec::with_capacity(4 * q);
    for i in 0..q {
        t.push((i, i, 1.0));
        t.push((q + i, i, 1.0));
        t.push((2 * q + i, i, 1.0));
        t.push((3 * q + i, q + i, 1.0));
    }
    let route = CsrMatrix::from_triplets(4 * q, 2 * q, t)?;
    let mut bias = vec![0.0; 4 * q];
    let shift = vect_eye(d, 2f64.powi(-(1i32 << k)));
    bias[2 * q..3 * q].copy_from_slice(&shift);
    concatenate(p, NeuralNetwork::affine(route, bias)?)
}

/// `Φ_N = ψ_{N-1} ⊙ … ⊙ ψ_1 ⊙ φ`, output `(vect A_{2^N}, vect σ_N)` with
/// `A_{2^N} ≈ (A/2)^{2^N}` and `σ_N ≈ 3·2^{-(2^N+1)}·S_N`. Every product uses
/// square depth `m`.
pub fn build_neumann_stage(d: usize, big_n: usize, m: usize) -> Result<NeuralNetwork> {
    if big_n == 0 || big_n > MAX_STAGES {
        return arg_err(format!("stage count must be in 1..={MAX_STAGES}, got {big_n}"));
    }
    let mut net = first_stage(d, m)?;
    for k in 1..big_n {
        net = sparse_concatenate(doubling_stage(d, k, m)?, net)?;
    }
    Ok(net)
}

/// `Σ_N` with every product at square depth `m`; realizes approximately
/// `vect A ↦ vect Σ_{k<2^N} A^k` for `‖A‖₂ ≤ 1`.
pub fn build_neumann_sum(d: usize, big_n: usize, m: usize) -> Result<NeuralNetwork> {
    if d == 0 {
        return arg_err("dimension must be positive");
    }
    let q = d * d;
    if big_n == 1 {
        return NeuralNetwork::affine(CsrMatrix::identity(q), vect_eye(d, 1.0));
    }
    if big_n > MAX_STAGES {
        return arg_err(format!("stage count must be in 1..={MAX_STAGES}, got {big_n}"));
    }
    let stage = build_neumann_stage(d, big_n - 1, m)?;
    let mut bias = vect_eye(d, 2f64.powi(-(1i32 << (big_n - 1))));
    bias.extend(std::iter::repeat_n(0.0, q));
    let shift = NeuralNetwork::affine(CsrMatrix::identity(2 * q), bias)?;
    let gain = NeuralNetwork::affine(CsrMatrix::scaled_identity(q, neumann_scale(big_n)), vec![0.0; q])?;
    let last = concatenate(gain, concatenate(product(d, m)?, shift)?)?;
    sparse_concatenate(last, stage)
}

/// Square depth at which every product inside `Σ_N` meets the accuracy
/// `eps / (4·C(N))`: `⌈½ log₂(4d²·C(N)/ε)⌉`, at least 2.
pub fn neumann_sum_depth(d: usize, big_n: usize, eps: f64) -> usize {
    let x = 4.0 * (d * d) as f64 * neumann_scale(big_n) / eps;
    (0.5 * x.log2()).ceil().max(2.0) as usize
}

/// `Σ_N` for accuracy `eps ∈ (0, 1/4)`.
pub fn build_neumann_partial(d: usize, big_n: usize, eps: f64) -> Result<NeuralNetwork> {
    if !(eps > 0.0 && eps < 0.25) {
        return arg_err(format!("eps must lie in (0, 1/4), got {eps}"));
    }
    if big_n == 0 {
        return arg_err("stage count must be at least 1");
    }
    build_neumann_sum(d, big_n, neumann_sum_depth(d, big_n, eps))
}

/// `Υ = W(αI) • Σ_N • W((-αI, vect I))` with every product at square depth
/// `m`; approximates `B ↦ B⁻¹` on `{‖I - αB‖₂ ≤ δ}`.
pub fn build_inversion_with_depth(d: usize, big_n: usize, m: usize, alpha: f64) -> Result<NeuralNetwork> {
    let q = d * d;
    let sigma = build_neumann_sum(d, big_n, m)?;
    let pre = NeuralNetwork::affine(CsrMatrix::scaled_identity(q, -alpha), vect_eye(d, 1.0))?;
    let post = NeuralNetwork::affine(CsrMatrix::scaled_identity(q, alpha), vec![0.0; q])?;
    concatenate(post, concatenate(sigma, pre)?)
}

/// Inversion network driven by the schedule: `N(ε/α, δ)` stages, every
/// product at square depth `n(ε/α, δ)`.
pub fn build_inversion(d: usize, eps: f64, alpha: f64, delta: f64) -> Result<NeuralNetwork> {
    let s = inversion_schedule(d, eps, alpha, delta)?;
    build_inversion_with_depth(d, s.big_n, s.little_n, alpha)
}

/// `n(60d³(N-1) + 2d²) + d³(12N - 2) + 4d² + 2d`.
pub fn inversion_weight_bound(d: usize, big_n: usize, little_n: usize) -> u128 {
    let (d, nn, n) = (d as u128, big_n as u128, little_n as u128);
    n * (60 * d.pow(3) * (nn - 1) + 2 * d * d) + d.pow(3) * (12 * nn - 2) + 4 * d * d + 2 * d
}

/// The bound for `Σ_N` before the final affine maps:
/// `n(60d³(N-1) + 2d²) + d³(12N - 10) + 2d² + 2d`.
pub fn sigma_weight_bound(d: usize, big_n: usize, little_n: usize) -> u128 {
    let (d, nn, n) = (d as u128, big_n as u128, little_n as u128);
    n * (60 * d.pow(3) * (nn - 1) + 2 * d * d) + d.pow(3) * (12 * nn - 10) + 2 * d * d + 2 * d
}

/// `N(n + 2) - 2`.
pub fn inversion_layer_bound(big_n: usize, little_n: usize) -> usize {
    big_n * (little_n + 2) - 2
}

/// `Σ_{k=0}^{terms-1} A^k` by direct accumulation.
pub fn neumann_partial_sum(a: &DenseMatrix, terms: usize) -> Result<DenseMatrix> {
    let d = a.rows();
    let mut sum = DenseMatrix::zeros(d, d);
    let mut pow = DenseMatrix::identity(d);
    for _ in 0..terms {
        sum = sum.add(&pow)?;
        pow = pow.matmul(a)?;
    }
    Ok(sum)
}

/// `∏_{k=0}^{N} (I + A^{2^k})`, which equals `Σ_{k<2^{N+1}} A^k`.
pub fn neumann_product(a: &DenseMatrix, big_n: usize) -> Result<DenseMatrix> {
    let d = a.rows();
    let id = DenseMatrix::identity(d);
    let mut prod = id.clone();
    let mut pow = a.clone();
    for _ in 0..=big_n {
        prod = prod.matmul(&id.add(&pow)?)?;
        pow = pow.matmul(&pow)?;
    }
    Ok(prod)
}

/// `‖B⁻¹ - mat(R(Υ)(vect B))‖₂` for each `B`, reported as the maximum.
pub fn verify_inversion(net: &NeuralNetwork, mats: &[DenseMatrix], claimed: f64) -> Result<ErrorCertificate> {
    let mut worst = 0.0f64;
    for b in mats {
        let d = b.rows();
        let out = matricize(&net.realize(&vectorize(b))?, d, d)?;
        worst = worst.max(spectral_norm(&inverse(b)?.sub(&out)?)?);
    }
    Ok(ErrorCertificate::new(
        claimed,
        worst,
        format!("{} matrices against the direct inverse", mats.len()),
        None,
    ))
}

/// Max `‖S_N(A) - mat(R(Σ)(vect A))‖₂` over random `A` with `‖A‖₂ ≤ bound`.
pub fn verify_neumann(
    net: &NeuralNetwork,
    d: usize,
    big_n: usize,
    bound: f64,
    claimed: f64,
    samples: usize,
    seed: u64,
) -> Result<ErrorCertificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let a = sample_bounded_matrix(&mut rng, d, d, bound);
        let exact = neumann_partial_sum(&a, 1 << big_n)?;
        let out = matricize(&net.realize(&vectorize(&a))?, d, d)?;
        worst = worst.max(spectral_norm(&exact.sub(&out)?)?);
    }
    Ok(ErrorCertificate::new(
        claimed,
        worst,
        format!("{samples} random {d}x{d} matrices with spectral norm <= {bound}"),
        Some(seed),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_examples() {
        let s = inversion_schedule(2, 0.1, 1.0, 0.5).unwrap();
        assert_eq!((s.big_n, s.little_n), (3, 7));
        assert_eq!(inversion_schedule(2, 0.1, 1.0, 0.0).unwrap().big_n, 1);
        let mut prev = 0;
        for i in 1..=9 {
            let n = inversion_schedule(3, 0.05, 1.0, i as f64 / 10.0).unwrap().big_n;
            assert!(n >= prev);
            prev = n;
        }
        assert!(inversion_schedule(2, 0.3, 1.0, 0.5).is_err());
        assert!(inversion_schedule(2, 0.1, 1.0, 1.0 - 1e-13).is_err());
        assert!(inversion_schedule(2, 0.1, -1.0, 0.5).is_err());
    }

    #[test]
    fn product_identity_oracle() {
        let a = DenseMatrix::from_rows(&[vec![0.2, -0.4], vec![0.1, 0.3]]).unwrap();
        for n in 0..4 {
            let lhs = neumann_product(&a, n).unwrap();
            let rhs = neumann_partial_sum(&a, 1 << (n + 1)).unwrap();
            assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-14);
        }
    }

    #[test]
    fn scalar_partial_sum() {
        let net = build_neumann_partial(1, 2, 1e-3).unwrap();
        let out = net.realize(&[0.5]).unwrap()[0];
        assert!((out - 1.875).abs() <= 1e-3);
        let zero = build_neumann_partial(2, 3, 1e-2).unwrap();
        let out = matricize(&zero.realize(&[0.0; 4]).unwrap(), 2, 2).unwrap();
        assert!(out.sub(&DenseMatrix::identity(2)).unwrap().max_abs() <= 1e-2);
    }

    #[test]
    fn layer_counts() {
        for n in 1..=3 {
            let net = build_neumann_sum(1, n, 4).unwrap();
            let expect = if n == 1 { 1 } else { n * 5 };
            assert_eq!(net.depth(), expect);
        }
    }

    #[test]
    fn stage_tracks_halved_powers() {
        let a = DenseMatrix::from_rows(&[vec![0.6, 0.2], vec![0.2, -0.5]]).unwrap();
        let net = build_neumann_stage(2, 3, 12).unwrap();
        let out = net.realize(&vectorize(&a)).unwrap();
        let pow = matricize(&out[..4], 2, 2).unwrap();
        let sig = matricize(&out[4..], 2, 2).unwrap();
        let half = a.scale(0.5);
        let mut exact = DenseMatrix::identity(2);
        for _ in 0..8 {
            exact = exact.matmul(&half).unwrap();
        }
        assert!(spectral_norm(&pow.sub(&exact).unwrap()).unwrap() < 1e-5);
        let s = neumann_partial_sum(&a, 8).unwrap().scale(3.0 * 2f64.powi(-9));
        assert!(spectral_norm(&sig.sub(&s).unwrap()).unwrap() < 1e-5);
    }

    #[test]
    fn inversion_small() {
        let b = DenseMatrix::diag(&[2.0, 1.0]);
        let net = build_inversion(2, 0.05, 2.0 / 3.0, 1.0 / 3.0).unwrap();
        let c = verify_inversion(&net, &[b], 0.05).unwrap();
        assert!(c.holds(), "{c:?}");
        let id = build_inversion(2, 0.2, 1.0, 0.0).unwrap();
        assert_eq!(id.depth(), 1);
        assert!(verify_inversion(&id, &[DenseMatrix::identity(2)], 0.2).unwrap().measured < 1e-15);
    }

    #[test]
    fn bounds_arithmetic() {
        assert_eq!(inversion_weight_bound(1, 1, 2), 2 * 2 + 10 + 4 + 2);
        assert_eq!(sigma_weight_bound(1, 1, 2), 2 * 2 + 2 + 2 + 2);
        assert_eq!(inversion_layer_bound(3, 7), 25);
    }
}
