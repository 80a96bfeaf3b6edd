//! Riemann–Liouville fractional integrals approximated by integer-order
//! derivatives plus moment integrals.
//!
//! The library is generic over the floating-point scalar through [`Scalar`]
//! (implemented for `f32` and `f64`). Concrete `f64` aliases are exported at
//! the crate root for the common case.
//!
//! Layout:
//! - [`special`]: gamma function, reflection helpers, ratio sequences.
//! - [`exact`]: closed forms for the test functions and a quadrature oracle
//!   for the fractional integral itself.
//! - [`decomposition`]: expansion coefficients, moments, left/right
//!   approximations, the classical analytic series, tails and error bound.
//! - [`solvers`]: fixed-step RK4 and multiple shooting for two-point BVPs.
//! - [`applications`]: a fractional integral equation and a fractional
//!   variational problem, both reduced to ordinary differential equations.

pub mod applications;
pub mod decomposition;
pub mod error;
pub mod exact;
pub mod function;
pub mod grid;
pub mod interp;
pub mod quadrature;
pub mod scalar;
pub mod solvers;
pub mod special;

pub use error::{FracError, Result};
pub use exact::{FracOrder, Interval};
pub use function::{FunctionKind, FunctionSpec};
pub use grid::{l2_error, Column, GridResult};
pub use scalar::Scalar;

pub type FracOrder64 = exact::FracOrder<f64>;
pub type Interval64 = exact::Interval<f64>;
pub type FunctionSpec64 = function::FunctionSpec<f64>;
pub type CoefficientSet64 = decomposition::CoefficientSet<f64>;
pub type GridResult64 = grid::GridResult<f64>;
pub type OdeSystem64 = solvers::OdeSystem<f64>;
pub type Trajectory64 = solvers::Trajectory<f64>;
pub type BvpProblem64 = solvers::BvpProblem<f64>;
pub type IntegralEquationProblem64 = applications::IntegralEquationProblem<f64>;
pub type VariationalProblem64 = applications::VariationalProblem<f64>;

pub type FracOrder32 = exact::FracOrder<f32>;
pub type FunctionSpec32 = function::FunctionSpec<f32>;
pub type CoefficientSet32 = decomposition::CoefficientSet<f32>;
