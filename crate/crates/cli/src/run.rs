use crate::args::*;
use nncalc::approx::{
    build_inversion, build_matrix_mult, build_neumann_partial, build_scalar_mult, build_scalar_mult_depth,
    build_square, sample_inversion_inputs, square_error, verify_inversion, verify_matrix_mult, verify_neumann,
    verify_scalar_mult, ErrorCertificate,
};
use nncalc::besov::{
    approximation_quasinorm_with_tail, besov_seminorm_discrete, bspline, bspline_convolution_check, build_bump,
    modulus_of_smoothness, partition_of_unity_check, triangle_violation_demo, QuasiNormParams, TailPolicy,
};
use nncalc::galerkin::{assemble_poisson_1d, galerkin_solve, sine_load, sine_solution, AlphaRule, GalerkinReport, Method, SolveOptions};
use nncalc::nn::{from_json, to_json};
use nncalc::{NeuralNetwork, NnError, SizeReport};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MAX_DIM_VAR: &str = "NNCALC_MAX_DIM";

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable input, or a failed build.
    Input(String),
    /// A certificate whose measured error exceeds its claim.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Verification(m) => f.write_str(m),
        }
    }
}

impl From<NnError> for CliError {
    fn from(e: NnError) -> Self {
        CliError::Input(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| CliError::Input(format!("stdout: {e}")))
        }
    }
}

fn write_network(net: &NeuralNetwork, out: &OutArg) -> Result<()> {
    let mut s = to_json(net);
    s.push('\n');
    emit(&out.out, &s)?;
    if out.out.is_some() {
        let r = net.size();
        eprintln!("L={} M={} N={}", r.layers, r.weights, r.neurons);
    }
    Ok(())
}

fn read_network(path: &Path) -> Result<NeuralNetwork> {
    let s = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    from_json(&s).map_err(|e| io_err(path, e))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build(c) => build(c),
        Command::Eval(a) => eval(a),
        Command::Info(a) => info(a),
        Command::Verify(c) => verify(c),
        Command::Galerkin(c) => galerkin(c),
        Command::Spline(c) => spline(c),
        Command::Besov(c) => besov(c),
    }
}

fn build(cmd: BuildCmd) -> Result<()> {
    let (net, out) = match cmd {
        BuildCmd::Square { m, out } => (build_square(m)?, out),
        BuildCmd::Mult { eps, bound, m, out } => {
            let net = match m {
                Some(m) => build_scalar_mult_depth(m, bound)?,
                None => build_scalar_mult(eps, bound)?,
            };
            (net, out)
        }
        BuildCmd::Matmul { d, n, l, eps, bound, out } => (build_matrix_mult(d, n, l, eps, bound)?, out),
        BuildCmd::Invert { d, eps, alpha, delta, out } => {
            check_dim(d)?;
            (build_inversion(d, eps, alpha, delta)?, out)
        }
        BuildCmd::Neumann { d, n, eps, out } => {
            check_dim(d)?;
            (build_neumann_partial(d, n, eps)?, out)
        }
        BuildCmd::Bump { r, d, delta, out } => (build_bump(r, d, delta)?, out),
    };
    write_network(&net, &out)
}

fn eval(a: EvalArgs) -> Result<()> {
    let net = read_network(&a.network)?;
    let y = net.realize(&a.input)?;
    let line: Vec<String> = y.iter().map(|v| v.to_string()).collect();
    emit(&None, &format!("{}\n", line.join(",")))
}

pub fn format_size(r: &SizeReport) -> String {
    let per: Vec<String> = r.per_layer_weights.iter().map(|v| v.to_string()).collect();
    format!(
        "L={}\nM={}\nN={}\nC={}\nper_layer={}\ndim_in={}\ndim_out={}\n",
        r.layers,
        r.weights,
        r.neurons,
        r.connectivity,
        per.join(","),
        r.dim_in,
        r.dim_out
    )
}

fn info(a: InfoArgs) -> Result<()> {
    let r = read_network(&a.network)?.size();
    if a.json {
        let s = serde_json::to_string(&r).map_err(|e| CliError::Input(e.to_string()))?;
        emit(&None, &format!("{s}\n"))
    } else {
        emit(&None, &format_size(&r))
    }
}

/// Largest inversion dimension, from `NNCALC_MAX_DIM` when set.
pub fn max_dim() -> Result<usize> {
    match std::env::var(MAX_DIM_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{MAX_DIM_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(SolveOptions::default().max_dim),
    }
}

fn check_dim(d: usize) -> Result<()> {
    let cap = max_dim()?;
    if d > cap {
        return Err(CliError::Input(format!("d = {d} exceeds the cap {cap}; set {MAX_DIM_VAR} to raise it")));
    }
    Ok(())
}

const CERT_HEADER: &str = "claimed,measured,holds,samples,seed";

fn cert_row(c: &ErrorCertificate) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let seed = c.seed.map(|s| s.to_string()).unwrap_or_default();
    w.write_record([
        format!("{:?}", c.claimed),
        format!("{:?}", c.measured),
        c.holds().to_string(),
        c.samples.clone(),
        seed,
    ])
    .expect("in-memory csv");
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 fields")
}

fn finish_certificate(c: &ErrorCertificate, out: &OutArg, report: &ReportArg) -> Result<()> {
    println!("claimed={:?}", c.claimed);
    println!("measured={:?}", c.measured);
    println!("holds={}", c.holds());
    if let Some(p) = &out.out {
        fs::write(p, format!("{}\n", c.to_json())).map_err(|e| io_err(p, e))?;
    }
    if let Some(p) = &report.report {
        fs::write(p, format!("{CERT_HEADER}\n{}", cert_row(c))).map_err(|e| io_err(p, e))?;
    }
    if c.holds() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "measured error {:?} exceeds claimed {:?}",
            c.measured, c.claimed
        )))
    }
}

fn verify(cmd: VerifyCmd) -> Result<()> {
    let (cert, out, report) = match cmd {
        VerifyCmd::Square { m, out, report } => (square_error(m)?, out, report),
        VerifyCmd::Mult { eps, bound, grid, out, report } => {
            let net = build_scalar_mult(eps, bound)?;
            (verify_scalar_mult(&net, bound, eps, grid)?, out, report)
        }
        VerifyCmd::Matmul { d, n, l, eps, bound, samples, seed, out, report } => {
            let net = build_matrix_mult(d, n, l, eps, bound)?;
            (verify_matrix_mult(&net, d, n, l, bound, eps, samples, seed)?, out, report)
        }
        VerifyCmd::Invert { d, eps, alpha, delta, samples, seed, out, report } => {
            check_dim(d)?;
            let net = build_inversion(d, eps, alpha, delta)?;
            let mats = sample_inversion_inputs(d, alpha, delta, samples, seed);
            let mut c = verify_inversion(&net, &mats, eps)?;
            c.seed = Some(seed);
            (c, out, report)
        }
        VerifyCmd::Neumann { d, n, eps, bound, samples, seed, out, report } => {
            check_dim(d)?;
            let net = build_neumann_partial(d, n, eps)?;
            (verify_neumann(&net, d, n, bound, eps, samples, seed)?, out, report)
        }
    };
    let mut cert = cert;
    if let Some(c) = report.claim {
        cert.claimed = c;
    }
    finish_certificate(&cert, &out, &report)
}

fn galerkin(cmd: GalerkinCmd) -> Result<()> {
    let GalerkinCmd::Poisson1d { d, eps, method, alpha, no_timing, report } = cmd;
    let problem = assemble_poisson_1d(d, &sine_load)?;
    let opts = SolveOptions {
        alpha_rule: alpha.map_or(AlphaRule::Optimal, AlphaRule::Fixed),
        max_dim: max_dim()?,
    };
    let methods = match method {
        MethodArg::Nn => vec![Method::Nn],
        MethodArg::Neumann => vec![Method::Neumann],
        MethodArg::Direct => vec![Method::Direct],
        MethodArg::All => vec![Method::Direct, Method::Neumann, Method::Nn],
    };
    let mut csv = format!("{}\n", GalerkinReport::CSV_HEADER);
    let mut failed = Vec::new();
    for m in methods {
        let (_, r) = galerkin_solve(&problem, eps, m, Some(&sine_solution), opts)?;
        csv.push_str(&r.csv_row(!no_timing));
        csv.push('\n');
        if let Some(c) = r.certificate.as_ref().filter(|c| !c.holds()) {
            failed.push(format!("{m}: {} > {}", c.measured, c.claimed));
        }
    }
    emit(&report.report, &csv)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("error exceeds eps*|F|: {}", failed.join("; "))))
    }
}

fn spline(cmd: SplineCmd) -> Result<()> {
    match cmd {
        SplineCmd::Eval { r, x } => emit(&None, &format!("{}\n", bspline(r, x))),
        SplineCmd::CheckConv { r, out } => finish_certificate(&bspline_convolution_check(r)?, &out, &ReportArg { report: None, claim: None }),
        SplineCmd::CheckPartition { r, d, k, samples, seed, out } => finish_certificate(
            &partition_of_unity_check(r, d, k, samples, seed)?,
            &out,
            &ReportArg { report: None, claim: None },
        ),
    }
}

fn read_errors(path: &Path) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let field = rec.get(0).unwrap_or("");
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if i == 0 => continue,
            Err(_) => return Err(io_err(path, format!("line {}: not a number: {field:?}", i + 1))),
        }
    }
    Ok(out)
}

fn besov(cmd: BesovCmd) -> Result<()> {
    match cmd {
        BesovCmd::Quasinorm { errors, alpha, q, tail, out } => {
            let e = read_errors(&errors)?;
            let tail = match tail {
                TailArg::Zero => TailPolicy::Zero,
                TailArg::Unknown => TailPolicy::Unknown,
            };
            let r = approximation_quasinorm_with_tail(&e, QuasiNormParams::new(alpha, q)?, tail)?;
            let s = serde_json::to_string(&r).map_err(|e| CliError::Input(e.to_string()))?;
            emit(&out.out, &format!("{s}\n"))
        }
        BesovCmd::Modulus { f, r, p, t, a, b, alpha, q, k_max } => {
            let func = crate::functions::lookup(&f)
                .ok_or_else(|| CliError::Input(format!("unknown function {f:?} ({})", crate::functions::NAMES)))?;
            let w = modulus_of_smoothness(&func, (a, b), r, p, t)?;
            let mut text = format!("modulus={w}\n");
            if let Some(alpha) = alpha {
                let est = besov_seminorm_discrete(&func, (a, b), alpha, p, q, k_max)?;
                text.push_str(&format!("seminorm={}\nlast_term={}\nr={}\n", est.value, est.last_term, est.r));
            }
            emit(&None, &text)
        }
        BesovCmd::TriangleDemo { p, q, alpha } => {
            let r = triangle_violation_demo(p, q, alpha)?;
            let s = serde_json::to_string(&r).map_err(|e| CliError::Input(e.to_string()))?;
            emit(&None, &format!("{s}\n"))
        }
    }
}
