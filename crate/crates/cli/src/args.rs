use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "nncalc", version, about = "Build, evaluate and verify explicit ReLU networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a network and write it as JSON.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Evaluate a network file at one input.
    Eval(EvalArgs),
    /// Print the size report of a network file.
    Info(InfoArgs),
    /// Measure a builder's error against its claimed bound.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Galerkin solves.
    #[command(subcommand)]
    Galerkin(GalerkinCmd),
    /// B-spline evaluation and identity checks.
    #[command(subcommand)]
    Spline(SplineCmd),
    /// Quasi-norms and moduli of smoothness.
    #[command(subcommand)]
    Besov(BesovCmd),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArg {
    /// CSV report file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Check against this bound instead of the builder's claim.
    #[arg(long)]
    pub claim: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum BuildCmd {
    /// Square network realizing the interpolant of x² with `m` layers.
    Square {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Product network on [-bound, bound]².
    Mult {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
        /// Square depth; derived from eps when omitted.
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Matrix product network for d×n times n×l.
    Matmul {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Matrix inversion network for ‖I - αB‖₂ ≤ δ.
    Invert {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Neumann partial sum network Σ_{k<2^n} A^k.
    Neumann {
        #[arg(long)]
        d: usize,
        /// Number of doubling steps.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Smooth bump approximating the indicator of the unit cube.
    Bump {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub network: PathBuf,
    /// Comma-separated input vector.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub input: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    pub network: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    Square {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        report: ReportArg,
    },
    Mult {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        report: ReportArg,
    },
    Matmul {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        report: ReportArg,
    },
    /// Samples B = (I - A)/α with ‖A‖₂ ≤ δ.
    Invert {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        report: ReportArg,
    },
    Neumann {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        /// Spectral bound on the sampled A.
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        report: ReportArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Nn,
    Neumann,
    Direct,
    All,
}

#[derive(Debug, Subcommand)]
pub enum GalerkinCmd {
    /// -u'' = π² sin(πx) on (0, 1) with hat functions on d interior nodes.
    Poisson1d {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Fixed α in (0, 1/λmax]; the optimal α is used when omitted.
        #[arg(long)]
        alpha: Option<f64>,
        /// Write 0 in the runtime column.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        report: ReportArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum SplineCmd {
    /// β^{(r)}(x).
    Eval {
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    CheckConv {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        out: OutArg,
    },
    CheckPartition {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    Zero,
    Unknown,
}

#[derive(Debug, Subcommand)]
pub enum BesovCmd {
    /// Approximation-class quasi-norm of an error sequence (one error per line).
    Quasinorm {
        #[arg(long)]
        errors: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// `inf` selects the sup variant.
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum, default_value_t = TailArg::Zero)]
        tail: TailArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Modulus of smoothness of a named function on (a, b).
    Modulus {
        /// One of: const, x, square, cube, sin, abs, sqrt, step.
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        /// Also report the dyadic Besov seminorm with this smoothness.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
    },
    /// Quasi-norms of e₁, e₂ and e₁ + e₂ under best k-term approximation.
    TriangleDemo {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        alpha: f64,
    },
}
