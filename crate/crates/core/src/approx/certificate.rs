use crate::linalg::{spectral_norm, DenseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A claimed error bound together with the measured error and how it was
/// sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCertificate {
    pub claimed: f64,
    pub measured: f64,
    pub samples: String,
    pub seed: Option<u64>,
}

impl ErrorCertificate {
    pub const SLACK: f64 = 1e-9;

    pub fn new(claimed: f64, measured: f64, samples: impl Into<String>, seed: Option<u64>) -> Self {
        Self {
            claimed,
            measured,
            samples: samples.into(),
            seed,
        }
    }

    /// `measured ≤ claimed + 1e-9`.
    pub fn holds(&self) -> bool {
        self.measured <= self.claimed + Self::SLACK
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Draws a `rows x cols` matrix with `‖·‖₂ ≤ bound` by rejection: entries are
/// uniform in `[-c, c]` with `c = bound / sqrt(max(rows, cols))`.
pub fn sample_bounded_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: f64) -> DenseMatrix {
    let c = bound / (rows.max(cols) as f64).sqrt();
    loop {
        let a = DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-c..=c));
        if spectral_norm(&a).expect("small matrices converge") <= bound {
            return a;
        }
    }
}

/// `count` matrices `B = (I - A)/α` with `A` drawn by [`sample_bounded_matrix`]
/// at bound `δ`, so `‖I - αB‖₂ ≤ δ`. Seeded with ChaCha8.
pub fn sample_inversion_inputs(d: usize, alpha: f64, delta: f64, count: usize, seed: u64) -> Vec<DenseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eye = DenseMatrix::identity(d);
    (0..count)
        .map(|_| {
            let a = sample_bounded_matrix(&mut rng, d, d, delta);
            eye.sub(&a).expect("square shapes agree").scale(1.0 / alpha)
        })
        .collect()
}
