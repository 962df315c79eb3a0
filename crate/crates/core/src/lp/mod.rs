//! Exact fractional chromatic numbers and the LP-backed theorem checks.

pub mod checks;
pub mod colgen;
pub mod mwss;
pub mod simplex;

pub use checks::{verify_aharoni, verify_reed_bounds, AharoniReport, ReedReport};
pub use colgen::{chi_f, chi_f_weighted, LpResult, LpStatus};
pub use mwss::max_weight_stable_set;
