use nncalc::approx::{build_square, neumann_partial_sum, neumann_product, sample_bounded_matrix, square_reference};
use nncalc::calculus::sparse_concatenate;
use nncalc::spectral_norm;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn doubling_product_equals_partial_sum(seed in any::<u64>(), d in 1usize..5, big_n in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample_bounded_matrix(&mut rng, d, d, 0.9);
        let prod = neumann_product(&a, big_n).unwrap();
        let sum = neumann_partial_sum(&a, 1 << (big_n + 1)).unwrap();
        prop_assert!(prod.sub(&sum).unwrap().max_abs() <= 1e-10);
    }

    #[test]
    fn square_network_tracks_reference(m in 2usize..=12, x in 0.0f64..=1.0) {
        let y = build_square(m).unwrap().realize(&[x]).unwrap()[0];
        prop_assert!((y - square_reference(m - 1, x)).abs() <= 1e-12);
        prop_assert!((y - x * x).abs() <= 2f64.powi(-2 * m as i32) + 1e-15);
    }
}

#[test]
fn composed_squares_match_composed_evaluation() {
    let sq = build_square(3).unwrap();
    let net = sparse_concatenate(sq.clone(), sq.clone()).unwrap();
    assert_eq!(net.depth(), 6);
    let s = sq.size();
    assert!(net.weight_count() <= 2 * s.weights + s.first_layer_weights() + s.last_layer_weights());
    for i in 0..=64 {
        let x = i as f64 / 64.0;
        let inner = square_reference(2, x);
        assert!((net.realize(&[x]).unwrap()[0] - square_reference(2, inner)).abs() < 1e-12);
    }
}

#[test]
fn neumann_truncation_bound_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 0..6 {
        let a = sample_bounded_matrix(&mut rng, 3, 3, 0.9);
        let na = spectral_norm(&a).unwrap();
        let id = nncalc::DenseMatrix::identity(3);
        let inv = nncalc::linalg::inverse(&id.sub(&a).unwrap()).unwrap();
        let err = spectral_norm(&inv.sub(&neumann_partial_sum(&a, n + 1).unwrap()).unwrap()).unwrap();
        assert!(err <= na.powi(n as i32 + 1) / (1.0 - na) + 1e-12);
    }
}
