//! Sufficient and necessary weight conditions and exponent-range predicates.

mod checkers;
mod config;
mod integrals;
mod report;
mod sweep;

pub use checkers::{
    campanato_pitt_condition, cor_nec2_condition, default_radial_constant, heinig_condition,
    necessary_condition_general, necessary_condition_radial, new_pitt_condition, piecewise_pitt_condition,
    prop_nec1_condition, theorem31_condition, weight_insertion, Insertion, TestSet,
};
pub use config::{
    conjugate, exponent_ranges, piecewise_restriction_admissible, power_weight_admissible, subspace_admissible,
    Admissibility, ExponentConfig, ExponentRanges, CLAUSE_A, CLAUSE_B, CLAUSE_RELATION, CLAUSE_SUBSPACE_LOWER,
    CLAUSE_SUBSPACE_RELATION, CLAUSE_SUBSPACE_UPPER,
};
pub use integrals::radial_mass;
pub use report::{real, ConditionReport, Tolerances, Verdict, Witness};
pub use sweep::ScaleGrid;
