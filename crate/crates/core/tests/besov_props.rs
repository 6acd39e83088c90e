use nncalc::besov::{
    approximation_quasinorm, modulus_of_smoothness, sawtooth, sawtooth_recursive, sparse_best_approx_brute,
    sparse_best_approx_error, square_interpolant, QuasiNormParams, SparseApproxInstance,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sawtooth_closed_form_matches_composition(m in 1u32..=20, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let x: f64 = rng.gen_range(0.0..=1.0);
            let a = sawtooth(m, x).unwrap();
            let b = sawtooth_recursive(m, x).unwrap();
            prop_assert!((a - b).abs() <= 1e-12, "m={} x={} {} vs {}", m, x, a, b);
        }
    }

    #[test]
    fn interpolant_telescopes(m in 0u32..=16, x in 0.0f64..=1.0) {
        let sum: f64 = (1..=m).map(|k| sawtooth(k, x).unwrap() / 2f64.powi(2 * k as i32)).sum();
        prop_assert!((square_interpolant(m, x).unwrap() - (x - sum)).abs() <= 1e-12);
        let step = square_interpolant(m, x).unwrap() - square_interpolant(m + 1, x).unwrap();
        prop_assert!((step - sawtooth(m + 1, x).unwrap() / 2f64.powi(2 * (m as i32 + 1))).abs() <= 1e-12);
    }

    #[test]
    fn quasinorm_is_absolutely_homogeneous(
        errors in prop::collection::vec(0.0f64..10.0, 1..12),
        lambda in -20.0f64..20.0,
        alpha in 0.1f64..3.0,
        q in prop_oneof![0.3f64..4.0, Just(f64::INFINITY)],
    ) {
        let p = QuasiNormParams::new(alpha, q).unwrap();
        let scaled: Vec<f64> = errors.iter().map(|e| e * lambda.abs()).collect();
        let lhs = approximation_quasinorm(&scaled, p).unwrap();
        let rhs = lambda.abs() * approximation_quasinorm(&errors, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn sparse_error_matches_brute_force(
        x in prop::collection::vec(-5.0f64..5.0, 1..=8),
        n in 0usize..10,
        p in 0.5f64..4.0,
    ) {
        let inst = SparseApproxInstance { x, p };
        let fast = sparse_best_approx_error(&inst, n).unwrap();
        let brute = sparse_best_approx_brute(&inst, n).unwrap();
        prop_assert!((fast - brute).abs() <= 1e-12 * brute.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn modulus_is_nondecreasing_in_t(k in 1i32..5, t1 in 0.01f64..0.2, dt in 0.0f64..0.2) {
        let f = move |x: f64| x.powi(k);
        let a = modulus_of_smoothness(&f, (0.0, 1.0), 1, 1.0, t1).unwrap();
        let b = modulus_of_smoothness(&f, (0.0, 1.0), 1, 1.0, t1 + dt).unwrap();
        prop_assert!(a <= b + 1e-12);
    }

    #[test]
    fn modulus_ignores_constants(c in -10.0f64..10.0, r in 1usize..4) {
        let f = |x: f64| (3.0 * x).sin();
        let g = move |x: f64| (3.0 * x).sin() + c;
        let a = modulus_of_smoothness(&f, (0.0, 1.0), r, 2.0, 0.2).unwrap();
        let b = modulus_of_smoothness(&g, (0.0, 1.0), r, 2.0, 0.2).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0) * (1.0 + c.abs()));
    }
}
