//! `I^α x(t) = f(t)` on `[a, b]`.
//!
//! With `n = 2` the approximation reads
//! `c0 τ^α x + c1 τ^{α+1} x' + Σ_p B_p τ^{α+1-p} V_p = f`, `τ = t - a`,
//! and the moments follow `V_p' = (p-1) τ^{p-2} x`. The analytic series with
//! one term has the same shape without moments.
//!
//! Homogeneous solutions behave like `τ^λ` with `λ` well above the forced
//! exponent, so `x(a)` alone does not pin the solution and forward
//! integration amplifies any error. The integrated state is therefore the
//! deviation from the power law matching the forcing's leading term, which
//! starts at zero and stays zero when the forcing is an exact power.

use std::sync::Arc;

use crate::decomposition::{CoefficientSet, ExpansionParams};
use crate::error::{FracError, Result};
use crate::exact::{FracOrder, Interval};
use crate::function::{FunctionKind, FunctionSpec};
use crate::grid::GridResult;
use crate::scalar::Scalar;
use crate::solvers::{integrate_rk4, OdeSystem, Trajectory};
use crate::special::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationMethod {
    /// Classical series; only one term is usable with a single initial value.
    AnalyticSeries { terms: usize },
    /// Decomposition with `n = 2` and truncation `N >= 2`.
    Decomposition { truncation: usize },
}

#[derive(Debug, Clone)]
pub struct IntegralEquationProblem<T> {
    pub alpha: FracOrder<T>,
    pub forcing: FunctionSpec<T>,
    pub interval: Interval<T>,
    /// `x(a)`.
    pub initial_value: T,
    pub method: EquationMethod,
    /// Integration starts at `a + start_offset * (b - a)`.
    pub start_offset: T,
    pub exact_solution: Option<FunctionSpec<T>>,
}

impl<T: Scalar> IntegralEquationProblem<T> {
    pub fn new(
        alpha: FracOrder<T>,
        forcing: FunctionSpec<T>,
        interval: Interval<T>,
        initial_value: T,
        method: EquationMethod,
    ) -> Self {
        Self {
            alpha,
            forcing,
            interval,
            initial_value,
            method,
            start_offset: T::lit(0.05),
            exact_solution: None,
        }
    }

    /// `I^{1/2} x = Γ(4.5)/24 t^4` on `[0, 1]`, `x(0) = 0`, solved by `t^{3.5}`.
    pub fn reference_instance(method: EquationMethod) -> Result<Self> {
        let scale = gamma(T::lit(4.5))? / T::lit(24.0);
        let mut p = Self::new(
            FracOrder::new(T::lit(0.5))?,
            FunctionSpec::power(T::lit(4.0)).scaled(scale),
            Interval::new(T::zero(), T::one())?,
            T::zero(),
            method,
        );
        p.exact_solution = Some(FunctionSpec::power(T::lit(3.5)));
        Ok(p)
    }
}

/// Leading behaviour `f ≈ F τ^σ`, `x ≈ c τ^μ` with `μ = σ - α` at the start
/// offset `τ0`. The reduced equation is satisfied exactly by the power law
/// when the forcing is an exact power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawStart<T> {
    pub forcing_exponent: T,
    pub forcing_coefficient: T,
    pub exponent: T,
    pub coefficient: T,
    pub t0: T,
}

#[derive(Debug, Clone)]
pub struct ReducedEquation<T> {
    /// Deviation of `(x, V_2, ..., V_N)` from the power-law state, in the
    /// variable `s = ln(t - a)`. See [`ReducedEquation::state`].
    pub system: OdeSystem<T>,
    pub c0: T,
    pub c1: T,
    /// `B_2..B_N`; empty for the analytic series.
    pub moment_coeffs: Vec<T>,
    pub start: PowerLawStart<T>,
    a: T,
    alpha: T,
    forcing: FunctionSpec<T>,
}

impl<T: Scalar> ReducedEquation<T> {
    /// `dy/dt` at physical time `t > a`.
    pub fn time_derivative(&self, t: T, y: &[T]) -> Vec<T> {
        time_rhs(
            self.a,
            self.alpha,
            self.c0,
            self.c1,
            &self.moment_coeffs,
            &self.forcing,
            t,
            y,
        )
    }

    /// `(x, V_2, ..., V_N)` at `t` given the integrated deviation.
    pub fn state(&self, t: T, deviation: &[T]) -> Vec<T> {
        let mut y = power_state(
            self.start.coefficient,
            self.start.exponent,
            t - self.a,
            deviation.len(),
        );
        for (v, e) in y.iter_mut().zip(deviation) {
            *v = *v + *e;
        }
        y
    }

    /// `x` from the power law alone.
    pub fn power_law(&self, t: T) -> T {
        let tau = t - self.a;
        if tau <= T::zero() {
            if self.start.exponent > T::zero() {
                T::zero()
            } else {
                self.start.coefficient
            }
        } else {
            self.start.coefficient * tau.powf(self.start.exponent)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn time_rhs<T: Scalar>(
    a: T,
    alpha: T,
    c0: T,
    c1: T,
    b: &[T],
    f: &FunctionSpec<T>,
    t: T,
    y: &[T],
) -> Vec<T> {
    let tau = t - a;
    let mut moment_sum = T::zero();
    let mut out = vec![T::zero(); y.len()];
    for (k, &bp) in b.iter().enumerate() {
        let p = k + 2;
        moment_sum = moment_sum + bp * tau.powi(1 - p as i32) * y[k + 1];
        out[k + 1] = T::from_usize_lossy(p - 1) * tau.powi(p as i32 - 2) * y[0];
    }
    out[0] = (f.eval(t) * tau.powf(-alpha) - c0 * y[0] - moment_sum) / (c1 * tau);
    out
}

/// `x = c τ^μ`, `V_p = c (p-1)/(p-1+μ) τ^{p-1+μ}`.
fn power_state<T: Scalar>(c: T, mu: T, tau: T, dim: usize) -> Vec<T> {
    if c == T::zero() {
        return vec![T::zero(); dim];
    }
    (0..dim)
        .map(|k| {
            if k == 0 {
                c * tau.powf(mu)
            } else {
                let pm1 = T::from_usize_lossy(k);
                c * pm1 / (pm1 + mu) * tau.powf(pm1 + mu)
            }
        })
        .collect()
}

fn forcing_power_law<T: Scalar>(f: &FunctionSpec<T>, a: T, tau0: T) -> Result<(T, T)> {
    if let FunctionKind::Power(g) = f.kind() {
        if a == T::zero() {
            return Ok((g, f.scale()));
        }
    }
    let f1 = f.eval(a + tau0);
    let f2 = f.eval(a + tau0 * T::lit(0.5));
    if f1 == T::zero() && f2 == T::zero() {
        return Ok((T::one(), T::zero()));
    }
    if f1 * f2 <= T::zero() {
        return Err(FracError::ReductionFailure(
            "forcing changes sign near the left end; no power-law start".into(),
        ));
    }
    let sigma = (f1 / f2).log2();
    Ok((sigma, f1 / tau0.powf(sigma)))
}

pub fn reduce_integral_equation<T: Scalar>(
    p: &IntegralEquationProblem<T>,
) -> Result<ReducedEquation<T>> {
    let alpha = p.alpha.value();
    let (c0, c1, moment_coeffs) = match p.method {
        EquationMethod::AnalyticSeries { terms } => {
            if terms != 1 {
                return Err(FracError::InvalidInput(format!(
                    "the analytic series needs {terms} initial conditions; only the one-term series is supported"
                )));
            }
            let g = gamma(alpha)?;
            (
                T::one() / (alpha * g),
                -T::one() / ((T::one() + alpha) * g),
                Vec::new(),
            )
        }
        EquationMethod::Decomposition { truncation } => {
            let set = CoefficientSet::left(p.alpha, ExpansionParams::new(2, truncation)?)?;
            (set.a()[0], set.a()[1], set.b().to_vec())
        }
    };
    if c1 == T::zero() {
        return Err(FracError::ReductionFailure(
            "coefficient of x' vanishes".into(),
        ));
    }
    let (a, b) = (p.interval.a(), p.interval.b());
    if !(p.start_offset > T::zero() && p.start_offset < T::one()) {
        return Err(FracError::InvalidInput(format!(
            "start offset must lie in (0, 1), got {}",
            p.start_offset
        )));
    }
    let tau0 = p.start_offset * (b - a);
    let (sigma, big_f) = forcing_power_law(&p.forcing, a, tau0)?;
    let mu = sigma - alpha;
    let mut denom = c0 + c1 * mu;
    for (k, &bp) in moment_coeffs.iter().enumerate() {
        let pm1 = T::from_usize_lossy(k + 1);
        denom = denom + bp * pm1 / (pm1 + mu);
    }
    if denom == T::zero() {
        return Err(FracError::ReductionFailure(
            "power-law start is resonant".into(),
        ));
    }
    let c = big_f / denom;
    if c != T::zero() && mu < T::zero() {
        return Err(FracError::InvalidInput(format!(
            "forcing behaves like (t-a)^{sigma}; the solution is unbounded at a"
        )));
    }
    let expected_xa = if mu > T::zero() || c == T::zero() {
        T::zero()
    } else {
        c
    };
    if (p.initial_value - expected_xa).abs() > T::lit(1e-8) * (T::one() + expected_xa.abs()) {
        return Err(FracError::InvalidInput(format!(
            "initial value {} is inconsistent with the forcing, which requires x(a) = {expected_xa}",
            p.initial_value
        )));
    }

    let dim = 1 + moment_coeffs.len();
    let rhs = {
        let f = p.forcing.clone();
        let b = moment_coeffs.clone();
        Arc::new(move |s: T, e: &[T], de: &mut [T]| {
            let tau = s.exp();
            let base = power_state(c, mu, tau, e.len());
            let y: Vec<T> = base.iter().zip(e).map(|(v, ek)| *v + *ek).collect();
            let dt = time_rhs(a, alpha, c0, c1, &b, &f, a + tau, &y);
            for (k, (o, v)) in de.iter_mut().zip(dt).enumerate() {
                // d/ds of the power-law component is its exponent times itself
                let exponent = if k == 0 {
                    mu
                } else {
                    T::from_usize_lossy(k) + mu
                };
                *o = v * tau - exponent * base[k];
            }
        })
    };
    let system = OdeSystem::new(
        dim,
        rhs,
        Interval::new(tau0.ln(), (b - a).ln())?,
        vec![T::zero(); dim],
    )?;
    Ok(ReducedEquation {
        system,
        c0,
        c1,
        moment_coeffs,
        start: PowerLawStart {
            forcing_exponent: sigma,
            forcing_coefficient: big_f,
            exponent: mu,
            coefficient: c,
            t0: a + tau0,
        },
        a,
        alpha,
        forcing: p.forcing.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct IntegralEquationSolution<T> {
    /// Columns `x` and, when known, `exact`.
    pub grid: GridResult<T>,
    /// Least-squares `c` in `x ≈ c (t-a)^μ` over `t >= a + (b-a)/10`.
    pub fitted_coefficient: T,
    pub reduced: ReducedEquation<T>,
    /// Deviation from the power law at the nodes, in the log variable.
    pub trajectory: Trajectory<T>,
}

impl<T: Scalar> IntegralEquationSolution<T> {
    pub fn x(&self) -> &[T] {
        self.grid.column("x").expect("solution column")
    }
}

pub fn solve_integral_equation<T: Scalar>(
    p: &IntegralEquationProblem<T>,
    steps: usize,
    points: usize,
) -> Result<IntegralEquationSolution<T>> {
    let reduced = reduce_integral_equation(p)?;
    let trajectory = integrate_rk4(&reduced.system, steps)?;
    let (a, b) = (p.interval.a(), p.interval.b());
    let mut grid = GridResult::uniform(a, b, points)?;
    let t0 = reduced.start.t0;
    let x: Vec<T> = grid
        .t
        .iter()
        .map(|&t| {
            if t <= t0 {
                reduced.power_law(t)
            } else {
                let e = trajectory.sample(&reduced.system.rhs, (t - a).ln());
                reduced.state(t, &e)[0]
            }
        })
        .collect();

    let mu = reduced.start.exponent;
    let cut = a + (b - a) * T::lit(0.1);
    let (mut num, mut den) = (T::zero(), T::zero());
    for (&t, &xv) in grid.t.iter().zip(&x) {
        if t >= cut {
            let g = (t - a).powf(mu);
            num = num + xv * g;
            den = den + g * g;
        }
    }
    let fitted_coefficient = if den > T::zero() {
        num / den
    } else {
        T::zero()
    };

    grid.push_column("x", x)?;
    if let Some(exact) = &p.exact_solution {
        grid.push_fn("exact", |t| Ok(exact.eval(t)))?;
    }
    Ok(IntegralEquationSolution {
        grid,
        fitted_coefficient,
        reduced,
        trajectory,
    })
}
