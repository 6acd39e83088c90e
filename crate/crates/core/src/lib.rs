//! Constructive ReLU network calculus: exact size accounting, explicit
//! approximation networks with error certificates, a Galerkin driver and
//! B-spline / Besov utilities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod besov;
pub mod calculus;
pub mod error;
pub mod galerkin;
pub mod linalg;
pub mod nn;

pub use error::{NnError, Result};
pub use linalg::{norm0, spectral_norm, DenseMatrix, DenseVector};
pub use nn::{validate, Activation, NeuralNetwork, SizeReport};
