//! Fixed-step RK4 for initial value problems and multiple shooting for
//! two-point boundary value problems.

mod bvp;
mod ode;

pub use bvp::{solve_bvp_shooting, BvpProblem, BvpSolution, NEWTON_MAX_ITERATIONS};
pub use ode::{
    integrate_rk4, integrate_segment, richardson_estimate, OdeSystem, RhsFn, Trajectory,
};
