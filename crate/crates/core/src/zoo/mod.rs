//! The objective families: quadratic programs, budget allocation, revenue
//! maximization, sensor energy, summarization and facility location.

mod facility;
mod influence;
mod quadratic;
mod revenue;
mod sensor;
mod summarization;

pub use facility::FacilityInstance;
pub use influence::{BipartiteInfluenceInstance, BudgetAllocation};
pub use quadratic::{
    gen_monotone_nqp, gen_nonmonotone_nqp, gen_nonmonotone_nqp_with, NonmonotoneNqpParams, QuadraticInstance,
};
pub use revenue::{RevenueInstance, RevenueWeights};
pub use sensor::SensorInstance;
pub use summarization::SummarizationInstance;
