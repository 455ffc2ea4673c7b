//! Maximization of submodular continuous functions.
//!
//! The two main algorithms are [`solvers::frank_wolfe_variant`] for monotone
//! DR-submodular objectives over down-closed polytopes and
//! [`solvers::double_greedy`] for non-monotone submodular objectives over
//! boxes. [`properties`] provides sampled certificates for the lattice
//! characterizations the algorithms rely on, [`zoo`] the objective families,
//! [`geometry`] the LP oracle, projections and samplers, and [`baselines`]
//! the comparison methods.

pub mod baselines;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod model;
pub mod properties;
pub mod rng;
pub mod solvers;
pub mod zoo;

pub use error::{Error, Result};
pub use model::{
    finite_diff_gradient, lattice_ops, BoxDomain, Capabilities, Domain, FnObjective, Objective, Point, PolytopeDomain,
    SolverTrace, TraceRecord,
};
