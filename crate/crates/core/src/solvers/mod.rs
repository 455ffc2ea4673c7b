//! The Frank-Wolfe variant, DoubleGreedy, and the 1-D maximizers
//! DoubleGreedy relies on.

mod double_greedy;
mod frank_wolfe;
mod one_dim;

pub use double_greedy::{double_greedy, CoordinateOrder, DgConfig, DgOutput};
pub use frank_wolfe::{frank_wolfe_variant, frank_wolfe_with_oracle, fw_lower_bound, FwConfig, FwOutput};
pub use one_dim::{maximize_1d, quadratic_argmax, OneDimMode, OneDimResult, DEFAULT_1D_TOL, REVENUE_EPS};

use crate::error::Error;
use crate::model::SolverTrace;

/// A solver error together with the trace recorded before it.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{error} (after {} trace rows)", trace.len())]
pub struct Aborted {
    pub error: Error,
    pub trace: SolverTrace,
}

impl From<Aborted> for Error {
    fn from(a: Aborted) -> Self {
        a.error
    }
}
