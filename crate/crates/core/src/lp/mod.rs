//! Linear programming back ends.

pub mod ipm;
pub mod simplex;

pub use ipm::{IneqLp, IpmOptions, IpmSolution, IpmStatus};
pub use simplex::{LpStatus, SimplexSolution};
