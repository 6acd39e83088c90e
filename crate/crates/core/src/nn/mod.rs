//! Network data model, size accounting and realization.

mod json;
mod network;

pub use json::{from_json, to_json};
pub use network::{
    from_weights_strict, validate, Activation, Activations, Layer, NeuralNetwork, SizeReport,
};
