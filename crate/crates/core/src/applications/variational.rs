//! Minimise `J[x] = ∫_a^b (I^α x(t) - g(t))² dt` with fixed end values.
//!
//! The fractional integral is replaced by the `n = 2` decomposition and
//! treated as a control `u = A0 τ^α x + A1 τ^{α+1} x' + Σ B_p τ^{α+1-p} V_p`.
//! Stationarity of the Hamiltonian `(u-g)² + λ1 x' + Σ λ_p V_p'` gives
//! `u = g - λ1 / (2 A1 τ^{1+α})` and the state/costate system
//!
//! ```text
//! x'   = -(A0/A1) x/τ - Σ (B_p/A1) τ^{-p} V_p + u / (A1 τ^{1+α})
//! V_p' = (p-1) τ^{p-2} x
//! λ1'  = (A0/A1) λ1/τ - Σ (p-1) τ^{p-2} λ_p
//! λ_p' = (B_p/A1) τ^{-p} λ1
//! ```
//!
//! with `x(a)`, `V_p(a) = 0`, `x(b)` and `λ_p(b) = 0`.

use std::sync::Arc;

use crate::decomposition::{CoefficientSet, ExpansionParams};
use crate::error::{FracError, Result};
use crate::exact::{rl_integral_oracle, FracOrder, Interval};
use crate::function::FunctionSpec;
use crate::grid::{l2_error, GridResult};
use crate::quadrature::{trapezoid, QuadratureOptions};
use crate::scalar::Scalar;
use crate::solvers::{solve_bvp_shooting, BvpProblem, BvpSolution};
use crate::special::gamma;

#[derive(Debug, Clone)]
pub struct VariationalProblem<T> {
    pub alpha: FracOrder<T>,
    /// `g` in `(I^α x - g)²`.
    pub target: FunctionSpec<T>,
    pub interval: Interval<T>,
    /// `(x(a), x(b))`.
    pub boundary: (T, T),
    pub truncation: usize,
    /// Integration starts at `a + start_offset * (b - a)`.
    pub start_offset: T,
    pub segments: usize,
    pub exact_minimizer: Option<FunctionSpec<T>>,
}

impl<T: Scalar> VariationalProblem<T> {
    pub fn new(
        alpha: FracOrder<T>,
        target: FunctionSpec<T>,
        interval: Interval<T>,
        boundary: (T, T),
        truncation: usize,
    ) -> Self {
        Self {
            alpha,
            target,
            interval,
            boundary,
            truncation,
            start_offset: T::lit(1e-6),
            segments: 32,
            exact_minimizer: None,
        }
    }

    /// `g(t) = t` on `[0, 1]` with `x(0) = 0`, `x(1) = Γ(α+1.5)/Γ(1.5)`.
    ///
    /// At `α = 1/2` the minimiser is `Γ(2)/Γ(1.5) √t` with `J = 0`; other
    /// orders carry no closed-form minimiser.
    pub fn reference_instance(alpha: FracOrder<T>, truncation: usize) -> Result<Self> {
        let al = alpha.value();
        let end = gamma(al + T::lit(1.5))? / gamma(T::lit(1.5))?;
        let mut p = Self::new(
            alpha,
            FunctionSpec::power(T::one()),
            Interval::new(T::zero(), T::one())?,
            (T::zero(), end),
            truncation,
        );
        if al == T::lit(0.5) {
            p.exact_minimizer = Some(FunctionSpec::power(T::lit(0.5)).scaled(end));
        }
        Ok(p)
    }
}

/// The shooting problem in `s = ln(t - a)` plus what is needed to read the
/// control back.
#[derive(Debug, Clone)]
pub struct VariationalReduction<T> {
    pub bvp: BvpProblem<T>,
    pub a0: T,
    pub a1: T,
    /// `B_2..B_N`.
    pub b: Vec<T>,
    pub t0: T,
    a: T,
    alpha: T,
    target: FunctionSpec<T>,
}

impl<T: Scalar> VariationalReduction<T> {
    /// State layout `(x, V_2..V_N, λ1, λ_2..λ_N)`; `dy/dt` at `t > a`.
    pub fn time_derivative(&self, t: T, y: &[T]) -> Vec<T> {
        time_rhs(
            self.a,
            self.alpha,
            self.a0,
            self.a1,
            &self.b,
            &self.target,
            t,
            y,
        )
    }

    /// Optimal control `u = g - λ1 / (2 A1 τ^{1+α})`.
    pub fn control(&self, t: T, lambda1: T) -> T {
        control(self.a, self.alpha, self.a1, &self.target, t, lambda1)
    }
}

fn control<T: Scalar>(a: T, alpha: T, a1: T, g: &FunctionSpec<T>, t: T, lambda1: T) -> T {
    let tau = t - a;
    g.eval(t) - lambda1 / (T::lit(2.0) * a1 * tau.powf(T::one() + alpha))
}

#[allow(clippy::too_many_arguments)]
fn time_rhs<T: Scalar>(
    a: T,
    alpha: T,
    a0: T,
    a1: T,
    b: &[T],
    g: &FunctionSpec<T>,
    t: T,
    y: &[T],
) -> Vec<T> {
    let m = b.len() + 1;
    let tau = t - a;
    let (x, lam1) = (y[0], y[m]);
    let u = control(a, alpha, a1, g, t, lam1);
    let mut out = vec![T::zero(); 2 * m];
    let mut dx = -(a0 / a1) * x / tau + u / (a1 * tau.powf(T::one() + alpha));
    let mut dl = (a0 / a1) * lam1 / tau;
    for (k, &bp) in b.iter().enumerate() {
        let p = k + 2;
        let pm1 = T::from_usize_lossy(p - 1);
        dx = dx - (bp / a1) * tau.powi(-(p as i32)) * y[k + 1];
        out[k + 1] = pm1 * tau.powi(p as i32 - 2) * x;
        dl = dl - pm1 * tau.powi(p as i32 - 2) * y[m + k + 1];
        out[m + k + 1] = (bp / a1) * tau.powi(-(p as i32)) * lam1;
    }
    out[0] = dx;
    out[m] = dl;
    out
}

pub fn reduce_variational<T: Scalar>(p: &VariationalProblem<T>) -> Result<VariationalReduction<T>> {
    if p.truncation < 2 {
        return Err(FracError::InvalidInput(format!(
            "truncation must be at least 2, got {}",
            p.truncation
        )));
    }
    if !(p.start_offset > T::zero() && p.start_offset < T::one()) {
        return Err(FracError::InvalidInput(format!(
            "start offset must lie in (0, 1), got {}",
            p.start_offset
        )));
    }
    let set = CoefficientSet::left(p.alpha, ExpansionParams::new(2, p.truncation)?)?;
    let (a0, a1) = (set.a()[0], set.a()[1]);
    if a1 == T::zero() {
        return Err(FracError::ReductionFailure(
            "coefficient of x' vanishes".into(),
        ));
    }
    let b = set.b().to_vec();
    let m = b.len() + 1;
    let (a, end) = (p.interval.a(), p.interval.b());
    let tau0 = p.start_offset * (end - a);
    let alpha = p.alpha.value();
    let rhs = {
        let b = b.clone();
        let g = p.target.clone();
        Arc::new(move |s: T, y: &[T], dy: &mut [T]| {
            let tau = s.exp();
            let dt = time_rhs(a, alpha, a0, a1, &b, &g, a + tau, y);
            for (o, v) in dy.iter_mut().zip(dt) {
                *o = v * tau;
            }
        })
    };
    let mut known_initial = vec![(0, p.boundary.0)];
    known_initial.extend((1..m).map(|i| (i, T::zero())));
    let mut known_terminal = vec![(0, p.boundary.1)];
    known_terminal.extend((m + 1..2 * m).map(|i| (i, T::zero())));
    let bvp = BvpProblem {
        dimension: 2 * m,
        rhs,
        span: Interval::new(tau0.ln(), (end - a).ln())?,
        known_initial,
        free_initial: (m..2 * m).collect(),
        known_terminal,
        initial_guess: vec![T::zero(); m],
        segments: p.segments,
    };
    Ok(VariationalReduction {
        bvp,
        a0,
        a1,
        b,
        t0: a + tau0,
        a,
        alpha,
        target: p.target.clone(),
    })
}

/// `∫_a^b (I^α x - g)² dt` with the fractional integral from the quadrature
/// oracle, trapezoid on `points` uniform nodes.
pub fn functional_cost<T: Scalar>(
    x: &FunctionSpec<T>,
    alpha: FracOrder<T>,
    target: &FunctionSpec<T>,
    interval: Interval<T>,
    points: usize,
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    let mut grid = GridResult::uniform(interval.a(), interval.b(), points)?;
    let a = interval.a();
    grid.push_fn("ix", |t| rl_integral_oracle(x, alpha, a, t, opts))?;
    let g: Vec<T> = grid.t.iter().map(|&t| target.eval(t)).collect();
    let e = l2_error(&grid.t, &g, grid.column("ix").expect("just pushed"))?;
    Ok(e * e)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostReport<T> {
    /// The approximated functional `∫ (u - g)² dt` over `[t0, b]`.
    pub approximate: T,
    /// The true functional of the computed `x`, by quadrature.
    pub oracle: T,
}

#[derive(Debug, Clone)]
pub struct VariationalSolution<T> {
    /// Columns `x` and, when known, `exact`.
    pub grid: GridResult<T>,
    pub cost: CostReport<T>,
    pub bvp: BvpSolution<T>,
    pub reduction: VariationalReduction<T>,
    /// The computed `x` as a spline through every integration node.
    pub x: FunctionSpec<T>,
}

/// Quadrature settings for the cost of a computed trajectory; its square-root
/// behaviour at `a` slows Simpson down, so the tolerance is looser than the
/// oracle default.
pub fn cost_quadrature<T: Scalar>() -> QuadratureOptions<T> {
    QuadratureOptions::default()
        .with_rel_tol(T::lit(1e-8))
        .with_initial_panels(64)
}

pub fn solve_variational<T: Scalar>(
    p: &VariationalProblem<T>,
    steps: usize,
    tol: T,
    points: usize,
) -> Result<VariationalSolution<T>> {
    let reduction = reduce_variational(p)?;
    let bvp = solve_bvp_shooting(&reduction.bvp, steps, tol)?;
    let a = p.interval.a();
    let m = reduction.b.len() + 1;
    let traj = &bvp.trajectory;

    let mut knots = vec![a];
    let mut xs = vec![p.boundary.0];
    for (s, y) in traj.t.iter().zip(&traj.states) {
        knots.push(a + s.exp());
        xs.push(y[0]);
    }
    let x = FunctionSpec::from_samples(knots, xs)?;

    let mut grid = GridResult::uniform(a, p.interval.b(), points)?;
    let x_grid: Vec<T> = grid
        .t
        .iter()
        .map(|&t| {
            if t <= reduction.t0 {
                x.eval(t)
            } else {
                traj.sample(&reduction.bvp.rhs, (t - a).ln())[0]
            }
        })
        .collect();
    grid.push_column("x", x_grid)?;
    if let Some(exact) = &p.exact_minimizer {
        grid.push_fn("exact", |t| Ok(exact.eval(t)))?;
    }

    // ∫ (u - g)² dt = ∫ (λ1 / (2 A1 τ^{1+α}))² τ ds
    let alpha = p.alpha.value();
    let integrand: Vec<T> = traj
        .t
        .iter()
        .zip(&traj.states)
        .map(|(&s, y)| {
            let tau = s.exp();
            let d = y[m] / (T::lit(2.0) * reduction.a1 * tau.powf(T::one() + alpha));
            d * d * tau
        })
        .collect();
    let approximate = trapezoid(&traj.t, &integrand);
    let oracle = functional_cost(
        &x,
        p.alpha,
        &p.target,
        p.interval,
        points,
        &cost_quadrature(),
    )?;
    Ok(VariationalSolution {
        grid,
        cost: CostReport {
            approximate,
            oracle,
        },
        bvp,
        reduction,
        x,
    })
}
