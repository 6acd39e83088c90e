use crate::approx::ErrorCertificate;
use crate::error::{arg_err, Result};
use crate::linalg::{CsrMatrix, DenseVector};
use crate::nn::{Activation, Layer, NeuralNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn tent(x: f64) -> f64 {
    (2.0 * x).min(2.0 - 2.0 * x)
}

fn check_unit(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return arg_err(format!("x = {x} outside [0, 1]"));
    }
    Ok(())
}

/// `g^m(x) = g(2^{m-1}x - ⌊2^{m-1}x⌋)` for the tent map `g(x) = min{2x, 2 - 2x}`.
pub fn sawtooth(m: u32, x: f64) -> Result<f64> {
    if m == 0 {
        return arg_err("sawtooth needs m >= 1");
    }
    check_unit(x)?;
    let y = x * 2f64.powi(m as i32 - 1);
    Ok(tent(y - y.floor()))
}

/// `g ∘ ⋯ ∘ g` applied `m` times.
pub fn sawtooth_recursive(m: u32, x: f64) -> Result<f64> {
    if m == 0 {
        return arg_err("sawtooth needs m >= 1");
    }
    check_unit(x)?;
    Ok((0..m).fold(x, |g, _| tent(g)))
}

/// Piecewise-linear interpolant of `x²` at the nodes `k/2^m`.
pub fn square_interpolant(m: u32, x: f64) -> Result<f64> {
    check_unit(x)?;
    let s = 2f64.powi(m as i32);
    let k = (s * x).floor();
    Ok((2.0 * k + 1.0) / s * (x - k / s) + (k / s) * (k / s))
}

/// Cardinal B-spline `β^{(r)}` from the truncated-power sum; `β^{(0)} = χ_{(0,1]}`.
pub fn bspline(r: usize, x: f64) -> f64 {
    if r == 0 {
        return if x > 0.0 && x <= 1.0 { 1.0 } else { 0.0 };
    }
    if !(x > 0.0 && x < (r + 1) as f64) {
        return 0.0;
    }
    let mut s = 0.0;
    for k in 0..=r + 1 {
        let y = x - k as f64;
        if y <= 0.0 {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * binomial(r + 1, k) * y.powi(r as i32);
    }
    s / factorial(r)
}

/// `β^{(r,d)}_{k,j}(x) = Π_i β^{(r-1)}(2^k x_i - j_i)`, supported in `2^{-k}([0,r]^d + j)`.
pub fn bspline_tensor(r: usize, k: u32, j: &[i64], x: &[f64]) -> Result<f64> {
    if r == 0 {
        return arg_err("tensor B-splines need r >= 1");
    }
    if j.len() != x.len() {
        return arg_err(format!("index has {} entries, point has {}", j.len(), x.len()));
    }
    let s = 2f64.powi(k as i32);
    Ok(j.iter().zip(x).map(|(&ji, &xi)| bspline(r - 1, s * xi - ji as f64)).product())
}

fn simpson_step(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson_step(f, a, fa, m, fm);
    let (rm, frm, right) = simpson_step(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
        + adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson_step(f, a, fa, b, fb);
    adaptive(f, a, fa, b, fb, m, fm, whole, tol, 40)
}

/// `∫_{x-1}^{x} β^{(r)}(t) dt`, split at the integer knots.
pub fn bspline_convolved(r: usize, x: f64) -> f64 {
    let (lo, hi) = (x - 1.0, x);
    let mut cuts = vec![lo];
    let mut c = lo.floor() + 1.0;
    while c < hi {
        cuts.push(c);
        c += 1.0;
    }
    cuts.push(hi);
    let f = |t: f64| bspline(r, t);
    cuts.windows(2).map(|w| adaptive_simpson(&f, w[0], w[1], 1e-14)).sum()
}

/// Max of `|β^{(r+1)}(x) - (β^{(r)} * χ_{[0,1]})(x)|` over `x ∈ [-1, r+3]` in steps of `1/64`.
pub fn bspline_convolution_check(r: usize) -> Result<ErrorCertificate> {
    if r > 6 {
        return arg_err("convolution check supports r <= 6");
    }
    let n = 64 * (r + 4);
    let mut worst = 0.0f64;
    for i in 0..=n {
        let x = -1.0 + i as f64 / 64.0;
        worst = worst.max((bspline(r + 1, x) - bspline_convolved(r, x)).abs());
    }
    Ok(ErrorCertificate::new(
        1e-8,
        worst,
        format!("{} points of [-1, {}] with step 1/64", n + 1, r + 3),
        None,
    ))
}

/// Indices `j` with `β^{(r-1)}(y - j) ≠ 0`: `⌈y⌉ - r ..= ⌈y⌉ - 1`.
pub fn active_indices(r: usize, y: f64) -> std::ops::RangeInclusive<i64> {
    let c = y.ceil() as i64;
    c - r as i64..=c - 1
}

/// Samples `x ∈ [-1, 2]^d` and measures `|Σ_j β^{(r,d)}_{k,j}(x) - 1|`. Terms with
/// `j` just outside the active window are added to the measured error.
pub fn partition_of_unity_check(r: usize, d: usize, k: u32, samples: usize, seed: u64) -> Result<ErrorCertificate> {
    if r == 0 || d == 0 {
        return arg_err("partition of unity needs r >= 1 and d >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = 2f64.powi(k as i32);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=2.0)).collect();
        let mut total = 1.0;
        let mut stray = 0.0;
        for &xi in &x {
            let y = s * xi;
            let act = active_indices(r, y);
            let (lo, hi) = (*act.start(), *act.end());
            total *= act.map(|j| bspline(r - 1, y - j as f64)).sum::<f64>();
            stray += [lo - 2, lo - 1, hi + 1, hi + 2]
                .iter()
                .map(|&j| bspline(r - 1, y - j as f64).abs())
                .sum::<f64>();
        }
        worst = worst.max((total - 1.0).abs() + stray);
    }
    Ok(ErrorCertificate::new(
        1e-10,
        worst,
        format!("{samples} uniform points of [-1, 2]^{d}"),
        Some(seed),
    ))
}

/// `σ(x) = (1/r!) Σ_{k=0}^r C(r,k)(-1)^k ϱ_r(x - k)`: 0 for `x ≤ 0`, 1 for `x ≥ r`.
pub fn bump_sigma(r: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= r as f64 {
        return 1.0;
    }
    sigma_terms(r, x)
}

fn sigma_coeffs(r: usize) -> Vec<f64> {
    (0..=r)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * binomial(r, k) / factorial(r))
        .collect()
}

fn sigma_terms(r: usize, x: f64) -> f64 {
    let act = Activation::ReluPow(r as u32);
    sigma_coeffs(r)
        .iter()
        .enumerate()
        .map(|(k, c)| c * act.apply(x - k as f64))
        .sum()
}

fn check_bump(r: usize, delta: f64) -> Result<()> {
    if r == 0 {
        return arg_err("bump needs r >= 1");
    }
    if !(delta > 0.0 && delta < 0.5) {
        return arg_err(format!("delta = {delta} outside (0, 1/2)"));
    }
    Ok(())
}

/// `ψ_δ(x) = σ(rx/δ) - σ(r(x + δ - 1)/δ)`.
pub fn bump_1d(r: usize, delta: f64, x: f64) -> f64 {
    let rf = r as f64;
    bump_sigma(r, rf * x / delta) - bump_sigma(r, rf * (x + delta - 1.0) / delta)
}

/// `φ_δ(x) = σ(r(Σ_k ψ_δ(x_k) - d + 1))`: 1 on `[δ, 1-δ]^d`, 0 off `[0, 1]^d`.
pub fn bump(r: usize, delta: f64, x: &[f64]) -> Result<f64> {
    check_bump(r, delta)?;
    if x.is_empty() {
        return arg_err("bump needs d >= 1");
    }
    let s: f64 = x.iter().map(|&xi| bump_1d(r, delta, xi)).sum();
    Ok(bump_sigma(r, r as f64 * (s - x.len() as f64 + 1.0)))
}

/// Three-layer strict `ϱ_r` network realizing `φ_δ` on `ℝ^d`.
pub fn build_bump(r: usize, d: usize, delta: f64) -> Result<NeuralNetwork> {
    check_bump(r, delta)?;
    if d == 0 {
        return arg_err("bump needs d >= 1");
    }
    let act = Activation::relu_pow(r as u32)?;
    let rf = r as f64;
    let c = sigma_coeffs(r);
    let w = 2 * (r + 1);
    // neuron (i, side, k): ϱ_r(r x_i/δ + shift_side - k)
    let mut t1 = Vec::with_capacity(d * w);
    let mut b1 = Vec::with_capacity(d * w);
    for i in 0..d {
        for shift in [0.0, rf * (delta - 1.0) / delta] {
            for k in 0..=r {
                t1.push((t1.len(), i, rf / delta));
                b1.push(shift - k as f64);
            }
        }
    }
    let mut t2 = Vec::with_capacity((r + 1) * d * w);
    for k in 0..=r {
        for i in 0..d {
            for side in 0..2 {
                let sign = if side == 0 { 1.0 } else { -1.0 };
                for (kk, ck) in c.iter().enumerate() {
                    let v = rf * sign * ck;
                    if v != 0.0 {
                        t2.push((k, i * w + side * (r + 1) + kk, v));
                    }
                }
            }
        }
    }
    let b2: DenseVector = (0..=r).map(|k| rf * (1.0 - d as f64) - k as f64).collect();
    let t3 = c.iter().enumerate().map(|(k, &v)| (0, k, v)).collect();
    NeuralNetwork::new(vec![
        Layer::uniform(CsrMatrix::from_triplets(d * w, d, t1)?, b1, act)?,
        Layer::uniform(CsrMatrix::from_triplets(r + 1, d * w, t2)?, b2, act)?,
        Layer::affine(CsrMatrix::from_triplets(1, r + 1, t3)?, vec![0.0])?,
    ])
}
