//! Radial Fourier transform, restriction and extension on the sphere,
//! spherical means and moduli of smoothness.

mod family;
mod fourier;
mod means;
mod profile;

pub use family::TestFunctionFamily;
pub use fourier::{
    extension_of_constant, extension_operator, extension_operator_with, radial_fourier, radial_fourier_with,
    restriction_values, transform_tolerance, transform_value, CartesianFunction, SpatialFunction,
};
pub use means::{
    classical_modulus_1d, modulus_difference, modulus_omega, modulus_omega_fourier, spherical_mean,
    spherical_mean_at, v_lt, v_lt_coefficients, v_lt_multiplier, Function1d,
};
pub use profile::{Decay, ProfileFn, RadialProfile, TransformFn};
