//! Weight catalog, rearrangements and weight-side conditions.

mod catalog;
mod checks;
mod counterexample;
mod io;
mod rearrangement;

pub(crate) use catalog::{power, shell_width};
pub use catalog::{CustomRadial, GridWeight, RadialFn, TabulatedRadial, Weight};
pub use counterexample::{
    counterexample_level_measure, counterexample_partial_mass, counterexample_power_integral,
    counterexample_set_bound, counterexample_set_measure, counterexample_weight, shell_power_integral,
    shell_radial_measure, shell_volume,
};
pub use rearrangement::{rearrangement, RearrangementTable};
pub use checks::{
    campanato_morrey_norm, campanato_morrey_norm_with, homogeneity_majorant, interval_translation_check,
    standard_intervals, CampanatoEstimate, CampanatoGrid, IntervalMode, DEFAULT_INTERVAL_CAP,
};
pub use io::{load_grid_weight, load_radial_weight};
