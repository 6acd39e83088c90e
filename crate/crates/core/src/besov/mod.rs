//! Sawtooth and interpolant identities, cardinal B-splines, bump functions,
//! moduli of smoothness, Besov and approximation-class quasi-norms.

mod approx_class;
mod smoothness;
mod spline;

pub use approx_class::{
    approximation_quasinorm, approximation_quasinorm_with_tail, sparse_best_approx_brute,
    sparse_best_approx_error, sparse_error_sequence, triangle_beta, triangle_r, triangle_violation_demo,
    QuasiNormParams, QuasiNormReport, SparseApproxInstance, TailPolicy, TriangleReport,
};
pub use smoothness::{
    besov_seminorm_discrete, finite_difference, modulus_of_smoothness, BesovEstimate, H_STEPS, PANELS,
};
pub use spline::{
    active_indices, adaptive_simpson, bspline, bspline_convolution_check, bspline_convolved, bspline_tensor,
    build_bump, bump, bump_1d, bump_sigma, partition_of_unity_check, sawtooth, sawtooth_recursive,
    square_interpolant,
};
