//! Lower bounds for best constants: ratio ascent over test families, power
//! iteration for `p = q = 2`, and dilation sweeps.

mod ascent;
mod objective;
mod operator;

pub use ascent::{ascend, ratio_ascent, RatioEstimate, LOWER_BOUND};
pub use objective::{dilation_exponent, dilation_sweep, Discretization, Inequality, RatioObjective, RatioRow};
pub(crate) use objective::transform_profile;
pub use operator::{best_constant_l2, l2_refinement, L2Operator};
