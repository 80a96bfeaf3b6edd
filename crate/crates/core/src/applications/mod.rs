//! Two problems whose fractional integrals are replaced by the decomposition,
//! turning them into ordinary differential equations.
//!
//! Both reductions carry factors `(t-a)^{-1}` and worse at the left end, so
//! they are integrated in the log variable `s = ln(t-a)` from a small offset
//! `t0 > a`.

mod integral_equation;
mod variational;

pub use integral_equation::{
    reduce_integral_equation, solve_integral_equation, EquationMethod, IntegralEquationProblem,
    IntegralEquationSolution, PowerLawStart, ReducedEquation,
};
pub use variational::{
    cost_quadrature, functional_cost, reduce_variational, solve_variational, CostReport,
    VariationalProblem, VariationalReduction, VariationalSolution,
};
