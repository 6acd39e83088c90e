//! Operators on networks: concatenation, identity networks, sparse
//! concatenation, parallelization, scaling and sums.
//!
//! All operators consume their operands so large layers are moved rather
//! than copied.

use crate::error::{arg_err, dim_err, NnError, Result};
use crate::linalg::CsrMatrix;
use crate::nn::{Activation, Activations, Layer, NeuralNetwork};

fn check_families(phi1: &NeuralNetwork, phi2: &NeuralNetwork) -> Result<()> {
    match (phi1.family()?, phi2.family()?) {
        (Some(a), Some(b)) if a != b => Err(NnError::FamilyMismatch(a.to_string(), b.to_string())),
        _ => Ok(()),
    }
}

/// `φ¹ • φ²`: realizes `R(φ¹) ∘ R(φ²)` with `L(φ¹) + L(φ²) − 1` layers. The
/// fused layer is `T¹₁ ∘ T²_L` and takes the activations of `φ¹`'s first layer.
pub fn concatenate(phi1: NeuralNetwork, phi2: NeuralNetwork) -> Result<NeuralNetwork> {
    if phi2.dim_out() != phi1.dim_in() {
        return dim_err(format!(
            "concatenate: inner output {} but outer input {}",
            phi2.dim_out(),
            phi1.dim_in()
        ));
    }
    check_families(&phi1, &phi2)?;
    let mut inner = phi2.into_layers();
    let mut outer = phi1.into_layers().into_iter();
    let last = inner.pop().expect("nonempty");
    let first = outer.next().expect("nonempty");
    let weights = first.weights.matmul(&last.weights)?;
    let mut bias = first.weights.mul_vec(&last.bias)?;
    for (b, c) in bias.iter_mut().zip(&first.bias) {
        *b += c;
    }
    inner.push(Layer::new(weights, bias, first.acts)?);
    inner.extend(outer);
    NeuralNetwork::new(inner)
}

/// The identity network on `ℝⁿ` with `depth` layers. One layer is `(I, 0)`;
/// deeper networks route through `x = ReLU(x) − ReLU(−x)`.
pub fn identity_network(n: usize, depth: usize) -> Result<NeuralNetwork> {
    if n == 0 || depth == 0 {
        return arg_err("identity network needs n >= 1 and depth >= 1");
    }
    if depth == 1 {
        return NeuralNetwork::affine(CsrMatrix::identity(n), vec![0.0; n]);
    }
    let id = CsrMatrix::identity(n);
    let neg = CsrMatrix::scaled_identity(n, -1.0);
    let mut layers = Vec::with_capacity(depth);
    layers.push(Layer::uniform(
        CsrMatrix::vstack(&[&id, &neg])?,
        vec![0.0; 2 * n],
        Activation::Relu,
    )?);
    for _ in 0..depth - 2 {
        layers.push(Layer::uniform(CsrMatrix::identity(2 * n), vec![0.0; 2 * n], Activation::Relu)?);
    }
    layers.push(Layer::affine(CsrMatrix::hstack(&[&id, &neg])?, vec![0.0; n])?);
    NeuralNetwork::new(layers)
}

fn require_strict_relu(nets: &[&NeuralNetwork]) -> Result<()> {
    if nets.iter().all(|n| n.is_strict_relu()) {
        Ok(())
    } else {
        Err(NnError::NotStrictRelu)
    }
}

/// `φ¹ ⊙ φ² = φ¹ • φ^Id_{n,2} • φ²` for strict ReLU networks; the result is
/// strict with `L(φ¹) + L(φ²)` layers.
pub fn sparse_concatenate(phi1: NeuralNetwork, phi2: NeuralNetwork) -> Result<NeuralNetwork> {
    require_strict_relu(&[&phi1, &phi2])?;
    if phi2.dim_out() != phi1.dim_in() {
        return dim_err(format!(
            "sparse concatenate: inner output {} but outer input {}",
            phi2.dim_out(),
            phi1.dim_in()
        ));
    }
    let id = identity_network(phi1.dim_in(), 2)?;
    concatenate(phi1, concatenate(id, phi2)?)
}

/// Block-diagonal parallelization `P(φ¹, …, φᵏ)` acting on stacked inputs:
/// `(x₁, …, x_k) ↦ (R(φ¹)(x₁), …, R(φᵏ)(x_k))`. Shorter networks are padded at
/// the output with `φ^Id ⊙ φ`.
pub fn parallelize(nets: Vec<NeuralNetwork>) -> Result<NeuralNetwork> {
    if nets.is_empty() {
        return arg_err("parallelize needs at least one network");
    }
    require_strict_relu(&nets.iter().collect::<Vec<_>>())?;
    let depth = nets.iter().map(NeuralNetwork::depth).max().expect("nonempty");
    let mut iters = Vec::with_capacity(nets.len());
    for net in nets {
        let net = if net.depth() < depth {
            let pad = identity_network(net.dim_out(), depth - net.depth())?;
            sparse_concatenate(pad, net)?
        } else {
            net
        };
        iters.push(net.into_layers().into_iter());
    }
    let mut layers = Vec::with_capacity(depth);
    for _ in 0..depth {
        let parts: Vec<Layer> = iters.iter_mut().map(|it| it.next().expect("padded")).collect();
        layers.push(stack_diag(&parts)?);
    }
    NeuralNetwork::new(layers)
}

fn stack_diag(parts: &[Layer]) -> Result<Layer> {
    let weights = CsrMatrix::block_diag(&parts.iter().map(|l| &l.weights).collect::<Vec<_>>());
    let bias = parts.iter().flat_map(|l| l.bias.iter().copied()).collect();
    let acts = Activations::concat(&parts.iter().map(|l| &l.acts).collect::<Vec<_>>());
    Layer::new(weights, bias, acts)
}

/// Parallelization over a shared input: `x ↦ (R(φ¹)(x), …, R(φᵏ)(x))`,
/// i.e. `P(φ¹, …, φᵏ) • W⁻¹(([I; …; I], 0))`.
pub fn parallelize_shared(nets: Vec<NeuralNetwork>) -> Result<NeuralNetwork> {
    let n = nets.first().map(NeuralNetwork::dim_in).unwrap_or(0);
    if nets.iter().any(|net| net.dim_in() != n) {
        return dim_err("parallelize_shared needs equal input dimensions");
    }
    let k = nets.len();
    let p = parallelize(nets)?;
    let id = CsrMatrix::identity(n);
    let rep = CsrMatrix::vstack(&vec![&id; k])?;
    concatenate(p, NeuralNetwork::affine(rep, vec![0.0; n * k])?)
}

/// Multiplies the last affine map by `a`, so the realization becomes
/// `a · R(φ)`. With `a = 0` the last layer is zeroed.
pub fn scale_network(net: NeuralNetwork, a: f64) -> Result<NeuralNetwork> {
    let mut layers = net.into_layers();
    let last = layers.pop().expect("nonempty");
    let bias = last.bias.iter().map(|b| b * a).collect();
    layers.push(Layer::new(last.weights.scale(a), bias, last.acts)?);
    NeuralNetwork::new(layers)
}

fn pad_affine(net: NeuralNetwork, depth: usize) -> Result<Vec<Layer>> {
    let n = net.dim_out();
    let mut layers = net.into_layers();
    while layers.len() < depth {
        layers.push(Layer::affine(CsrMatrix::identity(n), vec![0.0; n])?);
    }
    Ok(layers)
}

/// Sum of realizations on a shared input.
///
/// If either operand has fewer weights than layers its realization is
/// constant, and the constant is folded into the other operand's output
/// bias. Otherwise first layers are stacked, middle layers are assembled
/// block-diagonally and the last layers are joined as `[A¹_L A²_L]`; the
/// shorter operand is padded with identity-activation layers `(I, 0)`.
pub fn add_networks(phi1: NeuralNetwork, phi2: NeuralNetwork) -> Result<NeuralNetwork> {
    if phi1.dim_in() != phi2.dim_in() || phi1.dim_out() != phi2.dim_out() {
        return dim_err(format!(
            "add: ({}→{}) vs ({}→{})",
            phi1.dim_in(),
            phi1.dim_out(),
            phi2.dim_in(),
            phi2.dim_out()
        ));
    }
    check_families(&phi1, &phi2)?;
    let degenerate = |n: &NeuralNetwork| n.weight_count() < n.depth();
    if degenerate(&phi2) {
        return add_constant(phi1, &phi2);
    }
    if degenerate(&phi1) {
        return add_constant(phi2, &phi1);
    }
    let depth = phi1.depth().max(phi2.depth());
    let l1 = pad_affine(phi1, depth)?;
    let l2 = pad_affine(phi2, depth)?;
    if depth == 1 {
        let (a, b) = (&l1[0], &l2[0]);
        let bias = a.bias.iter().zip(&b.bias).map(|(x, y)| x + y).collect();
        return NeuralNetwork::affine(a.weights.add(&b.weights)?, bias);
    }
    let mut layers = Vec::with_capacity(depth);
    for (k, (a, b)) in l1.into_iter().zip(l2).enumerate() {
        let layer = if k == 0 {
            Layer::new(
                CsrMatrix::vstack(&[&a.weights, &b.weights])?,
                a.bias.iter().chain(&b.bias).copied().collect(),
                Activations::concat(&[&a.acts, &b.acts]),
            )?
        } else if k + 1 == depth {
            let bias = a.bias.iter().zip(&b.bias).map(|(x, y)| x + y).collect();
            Layer::affine(CsrMatrix::hstack(&[&a.weights, &b.weights])?, bias)?
        } else {
            stack_diag(&[a, b])?
        };
        layers.push(layer);
    }
    NeuralNetwork::new(layers)
}

fn add_constant(base: NeuralNetwork, constant: &NeuralNetwork) -> Result<NeuralNetwork> {
    let c = constant.realize(&vec![0.0; constant.dim_in()])?;
    let mut layers = base.into_layers();
    let last = layers.last_mut().expect("nonempty");
    for (b, v) in last.bias.iter_mut().zip(c) {
        *b += v;
    }
    NeuralNetwork::new(layers)
}
