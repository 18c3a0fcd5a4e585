//! Empirical-versus-limit comparison and power-law fitting.

mod compare;
mod fit;

pub use compare::{
    compare, empirical_ratios, vn_drift, CompareSettings, ComparisonReport, DriftPoint,
    EmpiricalRatios, FitOutcome,
};
pub use fit::{fit_power_law_exponent, FitMethod, PowerLawFit, MIN_SUPPORT};
