//! Exact fractional colouring toolkit for graphs of maximum degree `Δ`
//! without `K_Δ`.
//!
//! All weights, probabilities and bounds are exact rationals. The crate
//! computes weighted fractional chromatic numbers with checkable certificates,
//! evaluates the closed-form bound constants `p(Δ, d)`, `μ(Δ)` and `ỹ(Δ)`,
//! implements the two-stage random stable set distribution used by the
//! initial colouring phase, and detects the clique configurations that the
//! minimal-counterexample reductions exclude.

pub mod bounds;
pub mod certificate;
pub mod cliques;
pub mod error;
pub mod graph;
pub mod hall;
pub mod interval;
pub mod lp;
pub mod pipeline;
pub mod rational;
pub mod sampler;
pub mod structure;

pub use error::{Error, Result};
pub use graph::Graph;
pub use rational::Q;
