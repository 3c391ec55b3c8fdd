//! Independent checks of transform output: kernel identities against ODE
//! solutions, PDE residuals by centered differences, and a variable-speed
//! finite-difference oracle.

mod identity;
mod ode;
mod oracle;
mod report;
mod residual;

pub use identity::{identity_check, identity_grid, identity_residual, kernel_integral};
pub use ode::{ode_pair_solve, ode_solve, DenseSolution, OdeCoefficients, OdePair};
pub use oracle::fd_variable_oracle;
pub use report::{PointResidual, ResidualReport, Verdict};
pub use residual::{pde_residual, pde_residual_at, Equation};
