use super::spline::binomial;
use crate::error::{arg_err, Result};
use serde::Serialize;

/// Number of shifts `h = t·i/129`, `i = 1..=129`.
pub const H_STEPS: usize = 129;
/// Midpoint panels for the `L^p` integral.
pub const PANELS: usize = 1 << 12;

/// `Δ_h^r f(x) = Σ_k C(r,k)(-1)^{r-k} f(x + kh)`, zero when `x + rh` leaves `(a, b)`.
pub fn finite_difference(f: &dyn Fn(f64) -> f64, interval: (f64, f64), r: usize, h: f64, x: f64) -> f64 {
    let (a, b) = interval;
    let end = x + r as f64 * h;
    if x <= a || x >= b || end <= a || end >= b {
        return 0.0;
    }
    (0..=r)
        .map(|k| {
            let sign = if (r - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * binomial(r, k) * f(x + k as f64 * h)
        })
        .sum()
}

fn lp_norm_of_difference(f: &dyn Fn(f64) -> f64, interval: (f64, f64), r: usize, p: f64, h: f64) -> f64 {
    let (a, b) = interval;
    let w = (b - a) / PANELS as f64;
    let s: f64 = (0..PANELS)
        .map(|i| finite_difference(f, interval, r, h, a + (i as f64 + 0.5) * w).abs().powf(p))
        .sum();
    (s * w).powf(1.0 / p)
}

/// Grid lower bound for `ω_r(f, (a,b))_p(t)` on a 1D interval. Negative shifts
/// give the same norms as positive ones, so only `h ∈ (0, t]` is scanned.
pub fn modulus_of_smoothness(f: &dyn Fn(f64) -> f64, interval: (f64, f64), r: usize, p: f64, t: f64) -> Result<f64> {
    let (a, b) = interval;
    if r == 0 {
        return arg_err("modulus of smoothness needs r >= 1");
    }
    if !(t > 0.0) || !(p > 0.0 && p.is_finite()) || !(a < b) {
        return arg_err("need t > 0, 0 < p < ∞ and a < b");
    }
    Ok((1..=H_STEPS)
        .map(|i| lp_norm_of_difference(f, interval, r, p, t * i as f64 / H_STEPS as f64))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct BesovEstimate {
    pub value: f64,
    /// Last summand `2^{α k_max} ω_r(2^{-k_max})`, a truncation indicator.
    pub last_term: f64,
    pub r: usize,
    pub k_max: usize,
}

/// `(Σ_{k=1}^{k_max} [2^{αk} ω_r(f)_p(2^{-k})]^q)^{1/q}` with `r = ⌈α⌉`; `q = ∞`
/// takes the sup over the same `k`.
pub fn besov_seminorm_discrete(
    f: &dyn Fn(f64) -> f64,
    interval: (f64, f64),
    alpha: f64,
    p: f64,
    q: f64,
    k_max: usize,
) -> Result<BesovEstimate> {
    if !(alpha > 0.0) || !(q > 0.0) || k_max == 0 {
        return arg_err("need alpha > 0, q > 0 and k_max >= 1");
    }
    let r = alpha.ceil() as usize;
    let terms = (1..=k_max)
        .map(|k| {
            let t = 2f64.powi(-(k as i32));
            Ok(2f64.powf(alpha * k as f64) * modulus_of_smoothness(f, interval, r, p, t)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let value = if q.is_infinite() {
        terms.iter().copied().fold(0.0, f64::max)
    } else {
        terms.iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q)
    };
    Ok(BesovEstimate {
        value,
        last_term: terms[k_max - 1],
        r,
        k_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: (f64, f64) = (0.0, 1.0);

    #[test]
    fn modulus_examples() {
        assert_eq!(modulus_of_smoothness(&|_| 3.0, UNIT, 2, 2.0, 0.3).unwrap(), 0.0);
        assert!(modulus_of_smoothness(&|x| x, UNIT, 2, 1.0, 0.2).unwrap() < 1e-14);
        let w = modulus_of_smoothness(&|x| x, UNIT, 1, 1.0, 0.1).unwrap();
        assert!((w - 0.09).abs() <= 1e-4, "{w}");
        assert!(modulus_of_smoothness(&|x| x, UNIT, 0, 1.0, 0.1).is_err());
    }

    #[test]
    fn difference_respects_domain() {
        assert_eq!(finite_difference(&|x| x * x, UNIT, 2, 0.3, 0.5), 0.0);
        assert!((finite_difference(&|x| x * x, UNIT, 2, 0.1, 0.5) - 0.02).abs() < 1e-15);
    }

    #[test]
    fn besov_examples() {
        let c = besov_seminorm_discrete(&|_| 1.0, UNIT, 0.5, 2.0, 2.0, 4).unwrap();
        assert_eq!(c.value, 0.0);
        let a = besov_seminorm_discrete(&|x| x, UNIT, 0.5, 2.0, 2.0, 6).unwrap();
        let b = besov_seminorm_discrete(&|x| x, UNIT, 0.5, 2.0, 2.0, 8).unwrap();
        assert!(b.value >= a.value && b.value.is_finite());
        assert_eq!(a.r, 1);
        // terms behave like 2^{-k/2}
        assert!((b.last_term / a.last_term - 0.5).abs() < 0.02);
        let s = besov_seminorm_discrete(&|x| x, UNIT, 0.5, 2.0, f64::INFINITY, 6).unwrap();
        assert!(s.value <= a.value);
    }
}
