use std::fmt;
use std::sync::Arc;

use crate::error::{FracError, Result};
use crate::exact::Interval;
use crate::scalar::Scalar;

/// `rhs(t, y, dy)` writes `dy/dt` into `dy`.
pub type RhsFn<T> = Arc<dyn Fn(T, &[T], &mut [T]) + Send + Sync>;

#[derive(Clone)]
pub struct OdeSystem<T> {
    pub dimension: usize,
    pub rhs: RhsFn<T>,
    pub span: Interval<T>,
    pub initial: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for OdeSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OdeSystem")
            .field("dimension", &self.dimension)
            .field("span", &self.span)
            .field("initial", &self.initial)
            .finish()
    }
}

impl<T: Scalar> OdeSystem<T> {
    pub fn new(
        dimension: usize,
        rhs: RhsFn<T>,
        span: Interval<T>,
        initial: Vec<T>,
    ) -> Result<Self> {
        if initial.len() != dimension {
            return Err(FracError::InvalidInput(format!(
                "initial state has {} entries for dimension {dimension}",
                initial.len()
            )));
        }
        Ok(Self {
            dimension,
            rhs,
            span,
            initial,
        })
    }
}

/// Nodes `t` and states `states[k]` at `t[k]`, both endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub t: Vec<T>,
    pub states: Vec<Vec<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn final_state(&self) -> &[T] {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn component(&self, index: usize) -> Vec<T> {
        self.states.iter().map(|y| y[index]).collect()
    }

    /// Cubic Hermite interpolation between the bracketing nodes, with slopes
    /// taken from `rhs`. Clamps outside the node range.
    pub fn sample(&self, rhs: &RhsFn<T>, t: T) -> Vec<T> {
        let n = self.t.len();
        if n == 1 || t <= self.t[0] {
            return self.states[0].clone();
        }
        if t >= self.t[n - 1] {
            return self.states[n - 1].clone();
        }
        let k = self.t.partition_point(|&x| x <= t).clamp(1, n - 1) - 1;
        let (t0, t1) = (self.t[k], self.t[k + 1]);
        let (y0, y1) = (&self.states[k], &self.states[k + 1]);
        let dim = y0.len();
        let mut d0 = vec![T::zero(); dim];
        let mut d1 = vec![T::zero(); dim];
        rhs(t0, y0, &mut d0);
        rhs(t1, y1, &mut d1);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = (T::one() + two * s) * (T::one() - s) * (T::one() - s);
        let h10 = s * (T::one() - s) * (T::one() - s);
        let h01 = s * s * (three - two * s);
        let h11 = s * s * (s - T::one());
        (0..dim)
            .map(|i| h00 * y0[i] + h10 * h * d0[i] + h01 * y1[i] + h11 * h * d1[i])
            .collect()
    }
}

fn rk4_step<T: Scalar>(rhs: &RhsFn<T>, t: T, h: T, y: &[T], out: &mut [T], work: &mut [Vec<T>; 5]) {
    let dim = y.len();
    let half = T::lit(0.5);
    let [k1, k2, k3, k4, tmp] = work;
    rhs(t, y, k1);
    for i in 0..dim {
        tmp[i] = y[i] + half * h * k1[i];
    }
    rhs(t + half * h, tmp, k2);
    for i in 0..dim {
        tmp[i] = y[i] + half * h * k2[i];
    }
    rhs(t + half * h, tmp, k3);
    for i in 0..dim {
        tmp[i] = y[i] + h * k3[i];
    }
    rhs(t + h, tmp, k4);
    let sixth = h / T::lit(6.0);
    for i in 0..dim {
        out[i] = y[i] + sixth * (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i]);
    }
}

/// `steps` equal RK4 steps from `t0` to `t1` starting at `y0`.
pub fn integrate_segment<T: Scalar>(
    rhs: &RhsFn<T>,
    t0: T,
    t1: T,
    y0: &[T],
    steps: usize,
) -> Result<Trajectory<T>> {
    let dim = y0.len();
    let steps = steps.max(1);
    let h = (t1 - t0) / T::from_usize_lossy(steps);
    let mut work: [Vec<T>; 5] = std::array::from_fn(|_| vec![T::zero(); dim]);
    let mut t = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    t.push(t0);
    states.push(y0.to_vec());
    for k in 0..steps {
        let tk = t0 + h * T::from_usize_lossy(k);
        let mut next = vec![T::zero(); dim];
        rk4_step(rhs, tk, h, &states[k], &mut next, &mut work);
        let t_next = if k + 1 == steps {
            t1
        } else {
            t0 + h * T::from_usize_lossy(k + 1)
        };
        if next.iter().any(|v| !v.is_finite()) {
            return Err(FracError::IntegrationBlowUp { t: t_next.as_f64() });
        }
        t.push(t_next);
        states.push(next);
    }
    Ok(Trajectory { t, states })
}

/// Classical RK4 with `steps` equal steps over the system's span.
pub fn integrate_rk4<T: Scalar>(sys: &OdeSystem<T>, steps: usize) -> Result<Trajectory<T>> {
    if steps < 16 {
        return Err(FracError::InvalidInput(format!(
            "RK4 needs at least 16 steps, got {steps}"
        )));
    }
    if sys.initial.len() != sys.dimension {
        return Err(FracError::InvalidInput(
            "initial state does not match the dimension".into(),
        ));
    }
    integrate_segment(&sys.rhs, sys.span.a(), sys.span.b(), &sys.initial, steps)
}

/// Per-component error estimate of the final state of the `2 * steps` run,
/// `|y_h - y_{h/2}| / 15`.
pub fn richardson_estimate<T: Scalar>(sys: &OdeSystem<T>, steps: usize) -> Result<Vec<T>> {
    let coarse = integrate_rk4(sys, steps)?;
    let fine = integrate_rk4(sys, 2 * steps)?;
    Ok(coarse
        .final_state()
        .iter()
        .zip(fine.final_state())
        .map(|(c, f)| (*c - *f).abs() / T::lit(15.0))
        .collect())
}
