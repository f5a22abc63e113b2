//! End-to-end runs producing JSON reports and plot-ready CSV tables.

mod misc;
mod report;
mod riemann;
mod section4;
mod uncertainty;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use misc::{run_bessel_table, run_dilation_sweep, run_extremal};
pub use report::{real, write_artifacts, ExperimentReport, VERSION};
pub use riemann::{classical_hat_table, rl_lhs, run_riemann_lebesgue, RiemannLebesgueSetup};
pub use section4::run_section4;
pub use uncertainty::{decay_example_weight, heisenberg_product, run_uncertainty, UncertaintySetup, STABILITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    Section4,
    Uncertainty,
    RiemannLebesgue,
    Extremal,
    DilationSweep,
    BesselTable,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::Section4,
        ExperimentId::Uncertainty,
        ExperimentId::RiemannLebesgue,
        ExperimentId::Extremal,
        ExperimentId::DilationSweep,
        ExperimentId::BesselTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Section4 => "section4",
            ExperimentId::Uncertainty => "uncertainty",
            ExperimentId::RiemannLebesgue => "riemann-lebesgue",
            ExperimentId::Extremal => "extremal",
            ExperimentId::DilationSweep => "dilation-sweep",
            ExperimentId::BesselTable => "bessel-table",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| crate::Error::InvalidInput(format!("unknown experiment '{s}'")))
    }
}
