//! Natural cubic spline on strictly increasing knots.

use crate::error::{FracError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct CubicSpline<T> {
    knots: Vec<T>,
    values: Vec<T>,
    /// Second derivatives at the knots.
    curvature: Vec<T>,
}

impl<T: Scalar> CubicSpline<T> {
    pub fn natural(knots: Vec<T>, values: Vec<T>) -> Result<Self> {
        let n = knots.len();
        if n < 2 || values.len() != n {
            return Err(FracError::InvalidInput(format!(
                "spline needs at least two matching samples, got {} knots and {} values",
                n,
                values.len()
            )));
        }
        if knots.windows(2).any(|w| w[1] <= w[0] || w[1].is_nan()) {
            return Err(FracError::InvalidInput(
                "spline knots must be strictly increasing".into(),
            ));
        }
        let mut curvature = vec![T::zero(); n];
        if n > 2 {
            // Thomas algorithm on the interior equations
            let m = n - 2;
            let six = T::lit(6.0);
            let two = T::lit(2.0);
            let mut diag = vec![T::zero(); m];
            let mut upper = vec![T::zero(); m];
            let mut rhs = vec![T::zero(); m];
            for i in 0..m {
                let h0 = knots[i + 1] - knots[i];
                let h1 = knots[i + 2] - knots[i + 1];
                diag[i] = two * (h0 + h1);
                upper[i] = h1;
                rhs[i] =
                    six * ((values[i + 2] - values[i + 1]) / h1 - (values[i + 1] - values[i]) / h0);
                if i > 0 {
                    let w = h0 / diag[i - 1];
                    diag[i] = diag[i] - w * upper[i - 1];
                    rhs[i] = rhs[i] - w * rhs[i - 1];
                }
            }
            for i in (0..m).rev() {
                let next = if i + 1 < m {
                    curvature[i + 2]
                } else {
                    T::zero()
                };
                curvature[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
            }
        }
        Ok(Self {
            knots,
            values,
            curvature,
        })
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    fn segment(&self, t: T) -> usize {
        let idx = self.knots.partition_point(|&k| k <= t);
        idx.clamp(1, self.knots.len() - 1) - 1
    }

    pub fn eval(&self, t: T) -> T {
        self.derivative(0, t)
    }

    /// Derivative of the given order (0 is the value); zero above order 3.
    pub fn derivative(&self, order: usize, t: T) -> T {
        if order > 3 {
            return T::zero();
        }
        let i = self.segment(t);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - t) / h;
        let b = (t - self.knots[i]) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        let six = T::lit(6.0);
        let three = T::lit(3.0);
        match order {
            0 => a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / six,
            1 => {
                (y1 - y0) / h - (three * a * a - T::one()) / six * h * m0
                    + (three * b * b - T::one()) / six * h * m1
            }
            2 => a * m0 + b * m1,
            _ => (m1 - m0) / h,
        }
    }
}
