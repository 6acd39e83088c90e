//! Explicit approximation networks with error and size certificates.

mod certificate;
mod neumann;
mod product;
mod square;

pub use certificate::{sample_bounded_matrix, sample_inversion_inputs, ErrorCertificate};
pub use neumann::{
    build_inversion, build_inversion_with_depth, build_neumann_partial, build_neumann_stage,
    build_neumann_sum, inversion_layer_bound, inversion_schedule, inversion_weight_bound,
    neumann_partial_sum, neumann_product, neumann_scale, neumann_sum_depth, sigma_weight_bound,
    verify_inversion, verify_neumann, InversionSchedule,
};
pub use product::{
    build_matrix_mult, build_matrix_mult_depth, build_scalar_mult, build_scalar_mult_depth,
    matrix_mult_depth, matrix_mult_depth_floor, scalar_mult_depth, scalar_mult_depth_floor,
    verify_matrix_mult, verify_scalar_mult,
};
pub use square::{build_square, square_error, square_reference};
