#![allow(dead_code)]

use nncalc::calculus::{parallelize, sparse_concatenate};
use nncalc::nn::from_weights_strict;
use nncalc::{DenseMatrix, NeuralNetwork};
use rand::Rng;

/// Random dense matrix with roughly 30% exact zeros.
pub fn sparse_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| {
        if rng.gen_bool(0.3) {
            0.0
        } else {
            rng.gen_range(-2.0..2.0)
        }
    })
}

/// Random strict ReLU network with the given boundary dimensions and depth.
pub fn random_relu_net<R: Rng>(rng: &mut R, dim_in: usize, dim_out: usize, depth: usize) -> NeuralNetwork {
    let mut dims = vec![dim_in];
    for _ in 1..depth {
        dims.push(rng.gen_range(1..=4));
    }
    dims.push(dim_out);
    let w: Vec<_> = dims
        .windows(2)
        .map(|p| {
            let a = sparse_matrix(rng, p[1], p[0]);
            let b = (0..p[1]).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(-1.0..1.0) }).collect();
            (a, b)
        })
        .collect();
    from_weights_strict(&w, 1).expect("consistent shapes")
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect()
}

/// A composable pair `(φ¹, φ²)` with depths in `1..=4`.
pub fn random_pair<R: Rng>(rng: &mut R) -> (NeuralNetwork, NeuralNetwork) {
    let n = rng.gen_range(1..=3);
    let (out1, depth1) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
    let (in2, depth2) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
    (random_relu_net(rng, n, out1, depth1), random_relu_net(rng, in2, n, depth2))
}

/// One to four networks on a common input dimension, optionally of equal depth.
pub fn random_tuple<R: Rng>(rng: &mut R, equal_depth: bool) -> Vec<NeuralNetwork> {
    let k = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=3);
    let common = rng.gen_range(1..=4);
    (0..k)
        .map(|_| {
            let depth = if equal_depth { common } else { rng.gen_range(1..=4) };
            let out = rng.gen_range(1..=3);
            random_relu_net(rng, n, out, depth)
        })
        .collect()
}

fn rel_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

/// A law that failed, tagged with its item label.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub item: &'static str,
    pub detail: String,
}

fn fail(out: &mut Vec<Violation>, item: &'static str, detail: String) {
    out.push(Violation { item, detail });
}

/// Items (a.1)-(a.4) of the size lemma for `φ¹ ⊙ φ²`, checked as stated.
pub fn sparse_concat_violations<R: Rng>(rng: &mut R, phi1: NeuralNetwork, phi2: NeuralNetwork) -> Vec<Violation> {
    let mut out = Vec::new();
    let (s1, s2) = (phi1.size(), phi2.size());
    let points: Vec<Vec<f64>> = (0..5).map(|_| random_point(rng, phi2.dim_in())).collect();
    let expected: Vec<Vec<f64>> = points
        .iter()
        .map(|x| phi1.realize(&phi2.realize(x).unwrap()).unwrap())
        .collect();
    let c = sparse_concatenate(phi1, phi2).expect("strict relu operands");
    let s = c.size();
    for (x, want) in points.iter().zip(&expected) {
        let got = c.realize(x).unwrap();
        if !rel_close(&got, want, 1e-12) {
            fail(&mut out, "a.1", format!("at {x:?}: {got:?} vs {want:?}"));
        }
    }
    if s.layers != s1.layers + s2.layers {
        fail(&mut out, "a.2", format!("L = {} vs {} + {}", s.layers, s1.layers, s2.layers));
    }
    let a3 = s1.weights + s2.weights + s1.first_layer_weights() + s2.last_layer_weights();
    if s.weights > a3 || a3 > 2 * (s1.weights + s2.weights) {
        fail(&mut out, "a.3", format!("M = {} vs bound {a3}", s.weights));
    }
    if s.first_layer_weights() != s2.first_layer_weights() {
        fail(
            &mut out,
            "a.4",
            format!("M_1 = {} vs {} (L(φ²) = {})", s.first_layer_weights(), s2.first_layer_weights(), s2.layers),
        );
    }
    if s.last_layer_weights() != s1.last_layer_weights() {
        fail(
            &mut out,
            "a.4",
            format!("M_L = {} vs {} (L(φ¹) = {})", s.last_layer_weights(), s1.last_layer_weights(), s1.layers),
        );
    }
    out
}

/// Items (b.1)-(b.7) of the size lemma for `P(φ¹, …, φᵏ)`, checked as stated.
pub fn parallel_violations<R: Rng>(rng: &mut R, nets: Vec<NeuralNetwork>) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = nets[0].dim_in();
    let sizes: Vec<_> = nets.iter().map(NeuralNetwork::size).collect();
    let xs: Vec<Vec<f64>> = nets.iter().map(|_| random_point(rng, n)).collect();
    let expected: Vec<f64> = nets.iter().zip(&xs).flat_map(|(f, x)| f.realize(x).unwrap()).collect();
    let p = parallelize(nets).expect("strict relu operands");
    let s = p.size();
    let got = p.realize(&xs.concat()).unwrap();
    if !rel_close(&got, &expected, 1e-12) {
        fail(&mut out, "b.1", format!("{got:?} vs {expected:?}"));
    }
    let depth = sizes.iter().map(|s| s.layers).max().unwrap();
    if s.layers != depth {
        fail(&mut out, "b.2", format!("L = {} vs {depth}", s.layers));
    }
    let first: usize = sizes.iter().map(|s| s.first_layer_weights()).sum();
    if s.first_layer_weights() != first {
        let depths: Vec<usize> = sizes.iter().map(|s| s.layers).collect();
        fail(&mut out, "b.3", format!("M_1 = {} vs {first} (depths {depths:?})", s.first_layer_weights()));
    }
    let b4: usize = sizes.iter().map(|s| (2 * s.dim_out).max(s.last_layer_weights())).sum();
    if s.last_layer_weights() > b4 {
        fail(&mut out, "b.4", format!("M_L = {} vs bound {b4}", s.last_layer_weights()));
    }
    let total: usize = sizes.iter().map(|s| s.weights).sum();
    let outs: usize = sizes.iter().map(|s| s.dim_out).sum();
    if s.weights > 2 * total + 4 * depth * outs {
        fail(&mut out, "b.5", format!("M = {} vs bound {}", s.weights, 2 * total + 4 * depth * outs));
    }
    if sizes.iter().all(|t| t.layers == depth) {
        let last: usize = sizes.iter().map(|s| s.last_layer_weights()).sum();
        if s.last_layer_weights() != last {
            fail(&mut out, "b.6", format!("M_L = {} vs {last}", s.last_layer_weights()));
        }
        if s.weights != total {
            fail(&mut out, "b.7", format!("M = {} vs {total}", s.weights));
        }
    }
    out
}
