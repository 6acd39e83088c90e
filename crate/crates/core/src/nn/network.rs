use crate::error::{dim_err, NnError, Result};
use crate::linalg::{CsrMatrix, DenseMatrix, DenseVector};
use serde::Serialize;
use std::fmt;

/// Componentwise activation tag.
#[derive(Debug, Clone, Copy, Eq)]
pub enum Activation {
    Identity,
    Relu,
    /// `ReLU(x)^r`; `ReluPow(1)` is the same activation as `Relu`.
    ReluPow(u32),
}

impl Activation {
    pub fn relu_pow(r: u32) -> Result<Self> {
        match r {
            0 => Err(NnError::InvalidArgument("ReLU power must be at least 1".into())),
            1 => Ok(Activation::Relu),
            r => Ok(Activation::ReluPow(r)),
        }
    }

    /// Canonical form with `ReluPow(1)` folded into `Relu`.
    pub fn canonical(self) -> Self {
        match self {
            Activation::ReluPow(1) => Activation::Relu,
            a => a,
        }
    }

    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Relu => x.max(0.0),
            Activation::ReluPow(r) => {
                if x > 0.0 {
                    x.powi(r as i32)
                } else {
                    0.0
                }
            }
        }
    }
}

impl PartialEq for Activation {
    fn eq(&self, other: &Self) -> bool {
        match (self.canonical(), other.canonical()) {
            (Activation::Identity, Activation::Identity) => true,
            (Activation::Relu, Activation::Relu) => true,
            (Activation::ReluPow(a), Activation::ReluPow(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            Activation::Identity => write!(f, "id"),
            Activation::Relu => write!(f, "relu"),
            Activation::ReluPow(r) => write!(f, "relu^{r}"),
        }
    }
}

/// Activations of one layer; uniform layers avoid a per-neuron vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Activations {
    Uniform(Activation, usize),
    PerNeuron(Vec<Activation>),
}

impl Activations {
    pub fn len(&self) -> usize {
        match self {
            Activations::Uniform(_, n) => *n,
            Activations::PerNeuron(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Activation {
        match self {
            Activations::Uniform(a, _) => *a,
            Activations::PerNeuron(v) => v[i],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Activation> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<Activation> {
        self.iter().collect()
    }

    /// Concatenates activation lists, staying uniform when possible.
    pub fn concat(parts: &[&Activations]) -> Activations {
        let total = parts.iter().map(|p| p.len()).sum();
        let nonempty: Vec<_> = parts.iter().filter(|p| !p.is_empty()).collect();
        if let Some(first) = nonempty.first() {
            let a = first.get(0);
            let all_same = nonempty.iter().all(|p| match p {
                Activations::Uniform(b, _) => *b == a,
                Activations::PerNeuron(v) => v.iter().all(|b| *b == a),
            });
            if all_same {
                return Activations::Uniform(a, total);
            }
        }
        Activations::PerNeuron(parts.iter().flat_map(|p| p.iter()).collect())
    }

    fn apply_in_place(&self, v: &mut [f64]) {
        match self {
            Activations::Uniform(Activation::Identity, _) => {}
            Activations::Uniform(a, _) => v.iter_mut().for_each(|x| *x = a.apply(*x)),
            Activations::PerNeuron(acts) => {
                for (x, a) in v.iter_mut().zip(acts) {
                    *x = a.apply(*x);
                }
            }
        }
    }
}

/// One affine map followed by componentwise activations.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: CsrMatrix,
    pub bias: DenseVector,
    pub acts: Activations,
}

impl Layer {
    pub fn new(weights: CsrMatrix, bias: DenseVector, acts: Activations) -> Result<Self> {
        if weights.rows() != bias.len() || bias.len() != acts.len() {
            return dim_err(format!(
                "layer with {} rows, bias {}, {} activations",
                weights.rows(),
                bias.len(),
                acts.len()
            ));
        }
        Ok(Self { weights, bias, acts })
    }

    pub fn uniform(weights: CsrMatrix, bias: DenseVector, act: Activation) -> Result<Self> {
        let n = weights.rows();
        Self::new(weights, bias, Activations::Uniform(act, n))
    }

    pub fn affine(weights: CsrMatrix, bias: DenseVector) -> Result<Self> {
        Self::uniform(weights, bias, Activation::Identity)
    }

    pub fn dense(a: &DenseMatrix, b: &[f64], act: Activation) -> Result<Self> {
        Self::uniform(CsrMatrix::from_dense(a), b.to_vec(), act)
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    /// `‖A‖₀ + ‖b‖₀`.
    pub fn weight_count(&self) -> usize {
        self.weights.nnz() + crate::linalg::norm0_vec(&self.bias)
    }

    pub fn with_acts(mut self, acts: Activations) -> Result<Self> {
        if acts.len() != self.out_dim() {
            return dim_err("activation count differs from layer width");
        }
        self.acts = acts;
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub layers: usize,
    pub neurons: usize,
    pub weights: usize,
    pub connectivity: usize,
    pub per_layer_weights: Vec<usize>,
    pub dim_in: usize,
    pub dim_out: usize,
}

impl SizeReport {
    pub fn first_layer_weights(&self) -> usize {
        self.per_layer_weights[0]
    }

    pub fn last_layer_weights(&self) -> usize {
        *self.per_layer_weights.last().expect("nonempty")
    }
}

/// Checks the structural invariants of a candidate layer list and returns
/// its exact size metrics.
pub fn validate(layers: &[Layer]) -> Result<SizeReport> {
    let first = layers.first().ok_or(NnError::Empty)?;
    for (k, l) in layers.iter().enumerate() {
        if l.weights.rows() != l.bias.len() || l.bias.len() != l.acts.len() {
            return dim_err(format!("layer {} has inconsistent row counts", k + 1));
        }
        if k > 0 && l.in_dim() != layers[k - 1].out_dim() {
            return dim_err(format!(
                "layer {} expects {} inputs but layer {} has {} outputs",
                k + 1,
                l.in_dim(),
                k,
                layers[k - 1].out_dim()
            ));
        }
    }
    let last = layers.last().expect("nonempty");
    if let Some((i, a)) = last
        .acts
        .iter()
        .enumerate()
        .find(|(_, a)| *a != Activation::Identity)
    {
        return Err(NnError::NonIdentityOutput {
            neuron: i,
            found: a.to_string(),
        });
    }
    let per_layer: Vec<usize> = layers.iter().map(Layer::weight_count).collect();
    Ok(SizeReport {
        layers: layers.len(),
        neurons: layers[..layers.len() - 1].iter().map(Layer::out_dim).sum(),
        weights: per_layer.iter().sum(),
        connectivity: layers.iter().map(|l| l.weights.nnz()).sum(),
        per_layer_weights: per_layer,
        dim_in: first.in_dim(),
        dim_out: last.out_dim(),
    })
}

/// A validated network: nonempty, chained dimensions, identity output.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralNetwork {
    layers: Vec<Layer>,
}

impl NeuralNetwork {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        validate(&layers)?;
        Ok(Self { layers })
    }

    /// Single affine layer `W⁻¹((A, b))`.
    pub fn affine(a: CsrMatrix, b: DenseVector) -> Result<Self> {
        Self::new(vec![Layer::affine(a, b)?])
    }

    pub fn affine_dense(a: &DenseMatrix, b: &[f64]) -> Result<Self> {
        Self::affine(CsrMatrix::from_dense(a), b.to_vec())
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<Layer> {
        self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn dim_in(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn dim_out(&self) -> usize {
        self.layers[self.layers.len() - 1].out_dim()
    }

    pub fn size(&self) -> SizeReport {
        validate(&self.layers).expect("network invariants hold")
    }

    /// `M(φ)` without building the per-layer list.
    pub fn weight_count(&self) -> usize {
        self.layers.iter().map(Layer::weight_count).sum()
    }

    pub fn realize(&self, x: &[f64]) -> Result<DenseVector> {
        if x.len() != self.dim_in() {
            return dim_err(format!(
                "input of length {} for a network with dim_in {}",
                x.len(),
                self.dim_in()
            ));
        }
        let mut v = x.to_vec();
        for l in &self.layers {
            let mut y = l.weights.mul_vec(&v)?;
            for (yi, bi) in y.iter_mut().zip(&l.bias) {
                *yi += bi;
            }
            l.acts.apply_in_place(&mut y);
            v = y;
        }
        Ok(v)
    }

    /// The unique non-identity activation used by hidden and output
    /// neurons, if any. Mixed families are an error.
    pub fn family(&self) -> Result<Option<Activation>> {
        let mut fam: Option<Activation> = None;
        for l in &self.layers {
            for a in l.acts.iter() {
                if a == Activation::Identity {
                    continue;
                }
                match fam {
                    None => fam = Some(a.canonical()),
                    Some(f) if f == a => {}
                    Some(f) => return Err(NnError::FamilyMismatch(f.to_string(), a.to_string())),
                }
            }
        }
        Ok(fam)
    }

    /// Every hidden activation is `act` (one-layer networks qualify trivially).
    pub fn is_strict(&self, act: Activation) -> bool {
        self.layers[..self.layers.len() - 1]
            .iter()
            .all(|l| l.acts.iter().all(|a| a == act))
    }

    pub fn is_strict_relu(&self) -> bool {
        self.is_strict(Activation::Relu)
    }

    /// The weight list `W(φ)` as dense pairs.
    pub fn weights(&self) -> Vec<(DenseMatrix, DenseVector)> {
        self.layers
            .iter()
            .map(|l| (l.weights.to_dense(), l.bias.clone()))
            .collect()
    }
}

/// The strict `ϱ_r` network with the given weight list: every hidden
/// activation is `ϱ_r`, the last layer is affine.
pub fn from_weights_strict(w: &[(DenseMatrix, DenseVector)], r: u32) -> Result<NeuralNetwork> {
    let act = Activation::relu_pow(r)?;
    let n = w.len();
    let layers = w
        .iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let act = if k + 1 == n { Activation::Identity } else { act };
            Layer::dense(a, b, act)
        })
        .collect::<Result<Vec<_>>>()?;
    NeuralNetwork::new(layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<f64>]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn relu_pow_one_is_relu() {
        assert_eq!(Activation::ReluPow(1), Activation::Relu);
        assert_ne!(Activation::ReluPow(2), Activation::Relu);
        assert!(Activation::relu_pow(0).is_err());
        assert_eq!(Activation::ReluPow(3).apply(2.0), 8.0);
        assert_eq!(Activation::ReluPow(3).apply(-2.0), 0.0);
    }

    #[test]
    fn identity_layer_sizes() {
        let net = from_weights_strict(&[(DenseMatrix::identity(3), vec![0.0; 3])], 1).unwrap();
        let s = net.size();
        assert_eq!((s.layers, s.neurons, s.weights, s.connectivity), (1, 0, 3, 3));
    }

    #[test]
    fn zero_entries_not_counted() {
        let a = m(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let net = from_weights_strict(&[(a, vec![0.0, 1.0])], 1).unwrap();
        assert_eq!(net.size().per_layer_weights, vec![2]);
        assert_eq!(net.size().connectivity, 1);
    }

    #[test]
    fn broken_chain_rejected() {
        let w = vec![
            (DenseMatrix::identity(2), vec![0.0; 2]),
            (DenseMatrix::identity(3), vec![0.0; 3]),
        ];
        assert!(matches!(from_weights_strict(&w, 1), Err(NnError::DimensionMismatch(_))));
    }

    #[test]
    fn relu_output_rejected() {
        let l = Layer::dense(&DenseMatrix::identity(2), &[0.0, 0.0], Activation::Relu).unwrap();
        assert!(matches!(
            NeuralNetwork::new(vec![l]),
            Err(NnError::NonIdentityOutput { neuron: 0, .. })
        ));
        assert!(matches!(NeuralNetwork::new(vec![]), Err(NnError::Empty)));
    }

    #[test]
    fn all_negative_preactivations_give_final_bias() {
        let w = vec![
            (m(&[vec![1.0], vec![2.0]]), vec![-5.0, -5.0]),
            (m(&[vec![3.0, 4.0]]), vec![0.25]),
        ];
        let net = from_weights_strict(&w, 1).unwrap();
        assert_eq!(net.realize(&[1.0]).unwrap(), vec![0.25]);
        assert!(net.realize(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn family_detection() {
        let w = vec![
            (DenseMatrix::identity(1), vec![0.0]),
            (DenseMatrix::identity(1), vec![0.0]),
        ];
        assert_eq!(from_weights_strict(&w, 2).unwrap().family().unwrap(), Some(Activation::ReluPow(2)));
        let single = from_weights_strict(&w[..1], 2).unwrap();
        assert_eq!(single.family().unwrap(), None);
        assert!(single.is_strict_relu());
    }

    #[test]
    fn concat_activations_stays_uniform() {
        let a = Activations::Uniform(Activation::Relu, 2);
        let b = Activations::PerNeuron(vec![Activation::Relu]);
        assert_eq!(Activations::concat(&[&a, &b]), Activations::Uniform(Activation::Relu, 3));
        let c = Activations::Uniform(Activation::Identity, 1);
        assert_eq!(Activations::concat(&[&a, &c]).len(), 3);
        assert!(matches!(Activations::concat(&[&a, &c]), Activations::PerNeuron(_)));
    }
}
