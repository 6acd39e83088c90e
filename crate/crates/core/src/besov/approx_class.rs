use crate::error::{arg_err, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiNormParams {
    pub alpha: f64,
    /// `f64::INFINITY` selects the sup variant.
    pub q: f64,
}

impl QuasiNormParams {
    pub fn new(alpha: f64, q: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(q > 0.0) {
            return arg_err(format!("need alpha > 0 and q in (0, ∞], got alpha = {alpha}, q = {q}"));
        }
        Ok(Self { alpha, q })
    }
}

/// How the error sequence continues past the given list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailPolicy {
    /// The sequence is zero afterwards; the value is exact.
    Zero,
    /// Nothing is known afterwards; the value is a lower bound.
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiNormReport {
    pub value: f64,
    pub tail: TailPolicy,
    pub lower_bound: bool,
    pub terms: usize,
}

/// `(Σ_n (n^α e_n)^q / n)^{1/q}` for `errors[n-1] = e_n = E(f, Σ_{n-1})`, or
/// `sup_n n^α e_n` when `q = ∞`.
pub fn approximation_quasinorm(errors: &[f64], params: QuasiNormParams) -> Result<f64> {
    if let Some(e) = errors.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
        return arg_err(format!("error entries must be finite and nonnegative, got {e}"));
    }
    let QuasiNormParams { alpha, q } = params;
    let scaled = errors.iter().enumerate().map(|(i, &e)| ((i + 1) as f64, e));
    if q.is_infinite() {
        return Ok(scaled.map(|(n, e)| n.powf(alpha) * e).fold(0.0, f64::max));
    }
    let s: f64 = scaled
        .filter(|&(_, e)| e > 0.0)
        .map(|(n, e)| (n.powf(alpha) * e).powf(q) / n)
        .sum();
    Ok(s.powf(1.0 / q))
}

pub fn approximation_quasinorm_with_tail(errors: &[f64], params: QuasiNormParams, tail: TailPolicy) -> Result<QuasiNormReport> {
    Ok(QuasiNormReport {
        value: approximation_quasinorm(errors, params)?,
        tail,
        lower_bound: tail == TailPolicy::Unknown,
        terms: errors.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseApproxInstance {
    pub x: Vec<f64>,
    pub p: f64,
}

fn lp(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    values.map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `E(x, Σ_n)_p`: the `ℓ^p` norm of the `d - n` smallest-magnitude entries.
pub fn sparse_best_approx_error(inst: &SparseApproxInstance, n: usize) -> Result<f64> {
    if !(inst.p > 0.0 && inst.p.is_finite()) || inst.x.iter().any(|v| !v.is_finite()) {
        return arg_err("need finite entries and 0 < p < ∞");
    }
    let d = inst.x.len();
    if n >= d {
        return Ok(0.0);
    }
    let mut mags: Vec<f64> = inst.x.iter().map(|v| v.abs()).collect();
    mags.sort_by(f64::total_cmp);
    Ok(lp(mags.into_iter().take(d - n), inst.p))
}

/// Minimum of `‖x - x·1_S‖_p` over all supports `S` with `|S| = min(n, d)`.
pub fn sparse_best_approx_brute(inst: &SparseApproxInstance, n: usize) -> Result<f64> {
    let d = inst.x.len();
    if d > 20 {
        return arg_err("brute force limited to d <= 20");
    }
    let size = n.min(d) as u32;
    Ok((0u32..1 << d)
        .filter(|mask| mask.count_ones() == size)
        .map(|mask| lp((0..d).filter(|i| mask >> i & 1 == 0).map(|i| inst.x[i]), inst.p))
        .fold(f64::INFINITY, f64::min))
}

/// `(E(x, Σ_0), …, E(x, Σ_{d-1}))`, the nonzero part of the error sequence.
pub fn sparse_error_sequence(inst: &SparseApproxInstance) -> Result<Vec<f64>> {
    (0..inst.x.len()).map(|n| sparse_best_approx_error(inst, n)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TriangleReport {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub norm_e1: f64,
    pub norm_e2: f64,
    pub norm_sum: f64,
    /// `‖e₁ + e₂‖ - (‖e₁‖ + ‖e₂‖)`; positive means the triangle inequality fails.
    pub gap: f64,
    pub violated: bool,
    pub beta_q: Option<f64>,
    pub r_alpha_q: Option<f64>,
}

/// `β(q) = (1 + log₂(2^q - 1))/q`.
pub fn triangle_beta(q: f64) -> f64 {
    (1.0 + (2f64.powf(q) - 1.0).log2()) / q
}

/// `r(α, q) = q / log₂(2^q - 2^{αq-1})`, defined for `α < β(q)`.
pub fn triangle_r(alpha: f64, q: f64) -> Option<f64> {
    (alpha < triangle_beta(q)).then(|| q / (2f64.powf(q) - 2f64.powf(alpha * q - 1.0)).log2())
}

/// Quasi-norms of `e₁`, `e₂` and `e₁ + e₂` in `ℝ²` with `Σ_n = {‖x‖₀ ≤ n}` and
/// the `ℓ^p` error.
pub fn triangle_violation_demo(p: f64, q: f64, alpha: f64) -> Result<TriangleReport> {
    let params = QuasiNormParams::new(alpha, q)?;
    let norm = |x: Vec<f64>| -> Result<f64> {
        approximation_quasinorm(&sparse_error_sequence(&SparseApproxInstance { x, p })?, params)
    };
    let norm_e1 = norm(vec![1.0, 0.0])?;
    let norm_e2 = norm(vec![0.0, 1.0])?;
    let norm_sum = norm(vec![1.0, 1.0])?;
    let gap = norm_sum - (norm_e1 + norm_e2);
    let (beta_q, r_alpha_q) = if q.is_finite() {
        (Some(triangle_beta(q)), triangle_r(alpha, q))
    } else {
        (None, None)
    };
    Ok(TriangleReport {
        p,
        q,
        alpha,
        norm_e1,
        norm_e2,
        norm_sum,
        gap,
        violated: gap > 0.0,
        beta_q,
        r_alpha_q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, q: f64) -> QuasiNormParams {
        QuasiNormParams::new(alpha, q).unwrap()
    }

    #[test]
    fn quasinorm_examples() {
        for (a, q) in [(0.5, 1.0), (2.0, 3.0), (1.0, f64::INFINITY)] {
            assert_eq!(approximation_quasinorm(&[1.0, 0.0, 0.0], params(a, q)).unwrap(), 1.0);
            assert_eq!(approximation_quasinorm(&[0.0; 4], params(a, q)).unwrap(), 0.0);
        }
        for (p, q, a) in [(1.0f64, 1.0f64, 2.0f64), (2.0, 2.0, 0.5), (3.0, 0.5, 1.5)] {
            let v = approximation_quasinorm(&[2f64.powf(1.0 / p), 1.0], params(a, q)).unwrap();
            let closed = (2f64.powf(q / p) + 2f64.powf(a * q - 1.0)).powf(1.0 / q);
            assert!((v - closed).abs() <= 1e-12 * closed);
        }
        assert!(approximation_quasinorm(&[1.0, -0.1], params(1.0, 1.0)).is_err());
        assert!(QuasiNormParams::new(0.0, 1.0).is_err());
        let r = approximation_quasinorm_with_tail(&[1.0], params(1.0, 1.0), TailPolicy::Unknown).unwrap();
        assert!(r.lower_bound);
    }

    #[test]
    fn sparse_examples() {
        let inst = SparseApproxInstance { x: vec![3.0, 1.0, 2.0], p: 2.0 };
        assert!((sparse_best_approx_error(&inst, 1).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert!((sparse_best_approx_brute(&inst, 1).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(sparse_best_approx_error(&inst, 3).unwrap(), 0.0);
        assert_eq!(sparse_best_approx_error(&inst, 7).unwrap(), 0.0);
        assert!((sparse_best_approx_error(&inst, 0).unwrap() - 14f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn triangle_examples() {
        let r = triangle_violation_demo(1.0, 1.0, 2.0).unwrap();
        assert_eq!((r.norm_e1, r.norm_e2, r.norm_sum), (1.0, 1.0, 4.0));
        assert!(r.violated && r.gap == 2.0);
        // α < β(q) and p ≥ r(α, q): no violation
        let beta = triangle_beta(2.0);
        let rr = triangle_r(0.5, 2.0).unwrap();
        assert!(0.5 < beta);
        assert!(!triangle_violation_demo(rr + 0.5, 2.0, 0.5).unwrap().violated);
        assert!(triangle_violation_demo(1.0, f64::INFINITY, 1.5).unwrap().violated);
        assert!(!triangle_violation_demo(2.0, f64::INFINITY, 0.5).unwrap().violated);
    }
}
