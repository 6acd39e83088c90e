//! Galerkin discretization of `-u'' = f` on `(0, 1)` with zero boundary
//! values and piecewise-linear hat functions, solved directly, by a truncated
//! Neumann series, or through the inversion network.

use crate::approx::{build_inversion, inversion_schedule, ErrorCertificate, InversionSchedule};
use crate::error::{arg_err, NnError, Result};
use crate::linalg::{
    matricize, norm2_vec, solve_spd, spectral_norm, symmetric_eigenvalues, vectorize, DenseMatrix,
};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

const SIMPSON_PANELS: usize = 64;
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct GalerkinProblem {
    /// Stiffness matrix `B_ij = ∫ φ_i' φ_j'`.
    pub b: DenseMatrix,
    /// Load vector `F_i = ∫ f φ_i`.
    pub f: Vec<f64>,
    /// Mesh width `h = 1/(d+1)`; node `i` sits at `(i+1)·h`.
    pub h: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

impl GalerkinProblem {
    pub fn dim(&self) -> usize {
        self.f.len()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (1..=self.dim()).map(|i| i as f64 * self.h).collect()
    }
}

/// Eigenvalues `(2/h)(1 - cos(kπh))`, `k = 1..d`, of the 1D stiffness matrix.
pub fn poisson_eigenvalues(d: usize) -> Vec<f64> {
    let h = 1.0 / (d as f64 + 1.0);
    (1..=d).map(|k| 2.0 / h * (1.0 - (k as f64 * PI * h).cos())).collect()
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Assembles `B = (1/h)·tridiag(-1, 2, -1)` and the load vector by composite
/// Simpson quadrature (64 panels per element).
pub fn assemble_poisson_1d(d: usize, f: &dyn Fn(f64) -> f64) -> Result<GalerkinProblem> {
    if d == 0 {
        return arg_err("need at least one interior node");
    }
    let h = 1.0 / (d as f64 + 1.0);
    let b = DenseMatrix::from_fn(d, d, |i, j| match i.abs_diff(j) {
        0 => 2.0 / h,
        1 => -1.0 / h,
        _ => 0.0,
    });
    let load = (1..=d)
        .map(|i| {
            let xi = i as f64 * h;
            let left = |x: f64| f(x) * (x - (xi - h)) / h;
            let right = |x: f64| f(x) * ((xi + h) - x) / h;
            simpson(&left, xi - h, xi, SIMPSON_PANELS) + simpson(&right, xi, xi + h, SIMPSON_PANELS)
        })
        .collect();
    let ev = poisson_eigenvalues(d);
    Ok(GalerkinProblem {
        b,
        f: load,
        h,
        lambda_min: ev[0],
        lambda_max: ev[d - 1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpdContraction {
    pub alpha: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaRule {
    /// `α = 2/(λ + Λ)`, minimizing `δ = (Λ - λ)/(Λ + λ)`.
    Optimal,
    /// A given `α ∈ (0, 1/Λ]`, with `δ = 1 - αλ`.
    Fixed(f64),
}

fn spd_extremes(b: &DenseMatrix) -> Result<(f64, f64)> {
    if !b.is_square() {
        return Err(NnError::NotSpd);
    }
    let scale = b.max_abs().max(f64::MIN_POSITIVE);
    for i in 0..b.rows() {
        for j in 0..i {
            if (b[(i, j)] - b[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(NnError::NotSpd);
            }
        }
    }
    let ev = symmetric_eigenvalues(b)?;
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if !(lo > 0.0) {
        return Err(NnError::NotSpd);
    }
    Ok((lo, hi))
}

/// `(α, δ)` with `‖I - αB‖₂ ≤ δ < 1` for symmetric positive definite `B`.
pub fn spd_contraction_params(b: &DenseMatrix) -> Result<SpdContraction> {
    spd_contraction_with(b, AlphaRule::Optimal)
}

pub fn spd_contraction_with(b: &DenseMatrix, rule: AlphaRule) -> Result<SpdContraction> {
    let (lo, hi) = spd_extremes(b)?;
    match rule {
        AlphaRule::Optimal => Ok(SpdContraction {
            alpha: 2.0 / (lo + hi),
            delta: (hi - lo) / (hi + lo),
        }),
        AlphaRule::Fixed(alpha) => {
            if !(alpha > 0.0 && alpha <= 1.0 / hi) {
                return arg_err(format!("alpha must lie in (0, 1/λmax] = (0, {}]", 1.0 / hi));
            }
            Ok(SpdContraction {
                alpha,
                delta: 1.0 - alpha * lo,
            })
        }
    }
}

/// `α Σ_{k=0}^{terms} (I - αB)^k`.
pub fn neumann_inverse_oracle(b: &DenseMatrix, alpha: f64, terms: usize) -> Result<DenseMatrix> {
    let d = b.rows();
    let a = DenseMatrix::identity(d).sub(&b.scale(alpha))?;
    if spectral_norm(&a)? >= 1.0 {
        return arg_err("‖I - αB‖₂ >= 1: the series diverges");
    }
    let mut sum = DenseMatrix::identity(d);
    let mut pow = DenseMatrix::identity(d);
    for _ in 0..terms {
        pow = pow.matmul(&a)?;
        sum = sum.add(&pow)?;
    }
    Ok(sum.scale(alpha))
}

/// `α δ^{terms+1} / (1 - δ)`.
pub fn neumann_oracle_bound(alpha: f64, delta: f64, terms: usize) -> f64 {
    alpha * delta.powi(terms as i32 + 1) / (1.0 - delta)
}

/// Fewest terms whose truncation bound is at most `eps`.
pub fn neumann_terms_for(alpha: f64, delta: f64, eps: f64) -> usize {
    if delta == 0.0 {
        return 0;
    }
    let mut terms = 0;
    while neumann_oracle_bound(alpha, delta, terms) > eps {
        terms += 1;
    }
    terms
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Nn,
    Neumann,
    Direct,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Nn => "nn",
            Method::Neumann => "neumann",
            Method::Direct => "direct",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = NnError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nn" => Ok(Method::Nn),
            "neumann" => Ok(Method::Neumann),
            "direct" => Ok(Method::Direct),
            _ => arg_err(format!("unknown method {s:?} (nn, neumann, direct)")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub alpha_rule: AlphaRule,
    /// Largest `d` accepted by the network method.
    pub max_dim: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            alpha_rule: AlphaRule::Optimal,
            max_dim: 16,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GalerkinReport {
    pub method: Method,
    pub d: usize,
    pub eps: f64,
    pub error_vs_direct: f64,
    pub nodal_error: Option<f64>,
    pub weights: Option<usize>,
    pub layers: Option<usize>,
    pub runtime_ms: f64,
    pub contraction: Option<SpdContraction>,
    pub schedule: Option<InversionSchedule>,
    pub neumann_terms: Option<usize>,
    /// `‖μ - μ_direct‖₂ ≤ ε‖F‖₂` for the iterative methods.
    pub certificate: Option<ErrorCertificate>,
}

impl GalerkinReport {
    pub const CSV_HEADER: &'static str = "method,d,eps,error_vs_direct,nodal_error,M,L,runtime_ms";

    /// One CSV row; `timing = false` writes `0` as the runtime.
    pub fn csv_row(&self, timing: bool) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{:e},{},{},{},{}",
            self.method,
            self.d,
            self.eps,
            self.error_vs_direct,
            opt(self.nodal_error.map(|v| format!("{v:e}"))),
            opt(self.weights.map(|v| v.to_string())),
            opt(self.layers.map(|v| v.to_string())),
            if timing { format!("{:.3}", self.runtime_ms) } else { "0".into() },
        )
    }
}

/// Solves `Bμ = F` with the chosen method and compares against the direct
/// solution. `exact` is the continuous solution used for the nodal error.
pub fn galerkin_solve(
    problem: &GalerkinProblem,
    eps: f64,
    method: Method,
    exact: Option<&dyn Fn(f64) -> f64>,
    opts: SolveOptions,
) -> Result<(Vec<f64>, GalerkinReport)> {
    let d = problem.dim();
    let start = Instant::now();
    let direct = solve_spd(&problem.b, &problem.f)?;
    let mut report = GalerkinReport {
        method,
        d,
        eps,
        error_vs_direct: 0.0,
        nodal_error: None,
        weights: None,
        layers: None,
        runtime_ms: 0.0,
        contraction: None,
        schedule: None,
        neumann_terms: None,
        certificate: None,
    };
    let mu = match method {
        Method::Direct => direct.clone(),
        Method::Neumann => {
            let c = spd_contraction_with(&problem.b, opts.alpha_rule)?;
            let terms = neumann_terms_for(c.alpha, c.delta, eps);
            report.contraction = Some(c);
            report.neumann_terms = Some(terms);
            neumann_inverse_oracle(&problem.b, c.alpha, terms)?.mul_vec(&problem.f)?
        }
        Method::Nn => {
            if d > opts.max_dim {
                return arg_err(format!(
                    "d = {d} exceeds the network-method cap {} (raise it explicitly)",
                    opts.max_dim
                ));
            }
            let c = spd_contraction_with(&problem.b, opts.alpha_rule)?;
            let schedule = inversion_schedule(d, eps, c.alpha, c.delta)?;
            let net = build_inversion(d, eps, c.alpha, c.delta)?;
            let inv = matricize(&net.realize(&vectorize(&problem.b))?, d, d)?;
            report.contraction = Some(c);
            report.schedule = Some(schedule);
            report.weights = Some(net.weight_count());
            report.layers = Some(net.depth());
            drop(net);
            inv.mul_vec(&problem.f)?
        }
    };
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let diff: Vec<f64> = mu.iter().zip(&direct).map(|(a, b)| a - b).collect();
    report.error_vs_direct = norm2_vec(&diff);
    if method != Method::Direct {
        report.certificate = Some(ErrorCertificate::new(
            eps * norm2_vec(&problem.f) * (1.0 + 1e-9),
            report.error_vs_direct,
            "‖μ - μ_direct‖₂ against ε‖F‖₂",
            None,
        ));
    }
    if let Some(u) = exact {
        report.nodal_error = Some(
            problem
                .nodes()
                .iter()
                .zip(&mu)
                .fold(0.0f64, |m, (&x, &v)| m.max((u(x) - v).abs())),
        );
    }
    Ok((mu, report))
}

/// `f(x) = π² sin(πx)`, whose solution is `u(x) = sin(πx)`.
pub fn sine_load(x: f64) -> f64 {
    PI * PI * (PI * x).sin()
}

pub fn sine_solution(x: f64) -> f64 {
    (PI * x).sin()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_stiffness_matrices() {
        let p = assemble_poisson_1d(1, &|_| 1.0).unwrap();
        assert_eq!(p.b.to_rows(), vec![vec![4.0]]);
        let p = assemble_poisson_1d(3, &|_| 1.0).unwrap();
        assert_eq!(p.b[(0, 0)], 8.0);
        assert_eq!(p.b[(0, 1)], -4.0);
        assert_eq!(p.b[(0, 2)], 0.0);
        // ∫ hat = h
        assert!(p.f.iter().all(|v| (v - 0.25).abs() < 1e-14));
    }

    #[test]
    fn eigenvalue_formula_matches_jacobi() {
        for d in [1, 4, 9] {
            let p = assemble_poisson_1d(d, &|_| 0.0).unwrap();
            let ev = symmetric_eigenvalues(&p.b).unwrap();
            for (a, b) in ev.iter().zip(poisson_eigenvalues(d)) {
                assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn contraction_params() {
        let c = spd_contraction_params(&DenseMatrix::identity(3)).unwrap();
        assert_eq!((c.alpha, c.delta), (1.0, 0.0));
        let c = spd_contraction_params(&DenseMatrix::diag(&[1.0, 3.0])).unwrap();
        assert!((c.alpha - 0.5).abs() < 1e-15 && (c.delta - 0.5).abs() < 1e-15);
        let p = assemble_poisson_1d(3, &|_| 0.0).unwrap();
        let c = spd_contraction_params(&p.b).unwrap();
        let a = DenseMatrix::identity(3).sub(&p.b.scale(c.alpha)).unwrap();
        assert!((spectral_norm(&a).unwrap() - c.delta).abs() < 1e-10);
        let f = spd_contraction_with(&DenseMatrix::diag(&[1.0, 4.0]), AlphaRule::Fixed(0.25)).unwrap();
        assert_eq!(f.delta, 0.75);
        assert!(spd_contraction_with(&DenseMatrix::diag(&[1.0, 4.0]), AlphaRule::Fixed(0.5)).is_err());
        assert!(matches!(spd_contraction_params(&DenseMatrix::diag(&[1.0, -1.0])), Err(NnError::NotSpd)));
    }

    #[test]
    fn neumann_oracle() {
        let b = DenseMatrix::identity(2).scale(2.0);
        let inv = neumann_inverse_oracle(&b, 0.25, 10).unwrap();
        let err = inv.sub(&DenseMatrix::identity(2).scale(0.5)).unwrap().max_abs();
        assert!(err <= neumann_oracle_bound(0.25, 0.5, 10));
        assert_eq!(neumann_inverse_oracle(&b, 0.25, 0).unwrap(), DenseMatrix::identity(2).scale(0.25));
        assert!(neumann_inverse_oracle(&b, 1.0, 3).is_err());
    }

    #[test]
    fn direct_solution_is_nodally_accurate() {
        let p = assemble_poisson_1d(31, &sine_load).unwrap();
        let (mu, r) = galerkin_solve(&p, 0.1, Method::Direct, Some(&sine_solution), SolveOptions::default()).unwrap();
        assert!(r.nodal_error.unwrap() <= 1e-3);
        let res: Vec<f64> = p.b.mul_vec(&mu).unwrap().iter().zip(&p.f).map(|(a, b)| a - b).collect();
        assert!(norm2_vec(&res) <= 1e-10 * norm2_vec(&p.f));
    }

    #[test]
    fn zero_load_gives_zero() {
        let p = assemble_poisson_1d(4, &|_| 0.0).unwrap();
        for m in [Method::Direct, Method::Neumann, Method::Nn] {
            let (mu, _) = galerkin_solve(&p, 0.1, m, None, SolveOptions::default()).unwrap();
            assert!(mu.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn nn_cap_enforced() {
        let p = assemble_poisson_1d(3, &|_| 1.0).unwrap();
        let opts = SolveOptions { max_dim: 2, ..Default::default() };
        assert!(galerkin_solve(&p, 0.1, Method::Nn, None, opts).is_err());
    }

    #[test]
    fn csv_row_shape() {
        let p = assemble_poisson_1d(3, &sine_load).unwrap();
        let (_, r) = galerkin_solve(&p, 0.1, Method::Neumann, Some(&sine_solution), SolveOptions::default()).unwrap();
        let row = r.csv_row(false);
        assert_eq!(row.split(',').count(), 8);
        assert!(row.starts_with("neumann,3,0.1,"));
        assert!(row.ends_with(",,,0"));
        assert!(r.certificate.unwrap().holds());
    }
}
