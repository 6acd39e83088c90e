use super::network::{Activation, Activations, Layer, NeuralNetwork};
use crate::error::{NnError, Result};
use crate::linalg::{CsrMatrix, DenseMatrix};
use serde::{Deserialize, Serialize};

const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct NetworkDoc {
    version: u32,
    layers: Vec<LayerDoc>,
}

#[derive(Serialize, Deserialize)]
struct LayerDoc {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    acts: Vec<ActDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ActDoc {
    Name(String),
    Pow { relu_pow: u32 },
}

impl From<Activation> for ActDoc {
    fn from(a: Activation) -> Self {
        match a.canonical() {
            Activation::Identity => ActDoc::Name("id".into()),
            Activation::Relu => ActDoc::Name("relu".into()),
            Activation::ReluPow(r) => ActDoc::Pow { relu_pow: r },
        }
    }
}

impl TryFrom<ActDoc> for Activation {
    type Error = NnError;
    fn try_from(d: ActDoc) -> Result<Self> {
        match d {
            ActDoc::Name(s) if s == "id" => Ok(Activation::Identity),
            ActDoc::Name(s) if s == "relu" => Ok(Activation::Relu),
            ActDoc::Name(s) => Err(NnError::InvalidArgument(format!("unknown activation {s:?}"))),
            ActDoc::Pow { relu_pow } => Activation::relu_pow(relu_pow),
        }
    }
}

/// Serializes a network; numbers use the shortest round-trip decimal form.
pub fn to_json(net: &NeuralNetwork) -> String {
    let doc = NetworkDoc {
        version: VERSION,
        layers: net
            .layers()
            .iter()
            .map(|l| LayerDoc {
                a: l.weights.to_dense().to_rows(),
                b: l.bias.clone(),
                acts: l.acts.iter().map(ActDoc::from).collect(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn from_json(s: &str) -> Result<NeuralNetwork> {
    let doc: NetworkDoc = serde_json::from_str(s)?;
    if doc.version != VERSION {
        return Err(NnError::InvalidArgument(format!(
            "unsupported network version {}",
            doc.version
        )));
    }
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (k, l) in doc.layers.into_iter().enumerate() {
        let a = if l.a.is_empty() {
            DenseMatrix::zeros(0, 0)
        } else {
            DenseMatrix::from_rows(&l.a).map_err(|e| {
                NnError::DimensionMismatch(format!("layer {}: {e}", k + 1))
            })?
        };
        let acts = l
            .acts
            .into_iter()
            .map(Activation::try_from)
            .collect::<Result<Vec<_>>>()?;
        let acts = Activations::concat(&[&Activations::PerNeuron(acts)]);
        layers.push(Layer::new(CsrMatrix::from_dense(&a), l.b, acts)?);
    }
    NeuralNetwork::new(layers)
}
