//! Composite Simpson quadrature with panel doubling.

use crate::error::{FracError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions<T> {
    /// Starting panel count (rounded up to an even number, at least 16).
    pub initial_panels: usize,
    /// Stop when successive estimates differ by less than this, relatively.
    pub rel_tol: T,
    pub max_panels: usize,
}

impl<T: Scalar> Default for QuadratureOptions<T> {
    fn default() -> Self {
        Self {
            initial_panels: 16,
            rel_tol: T::lit(1e-10),
            max_panels: 1 << 22,
        }
    }
}

impl<T: Scalar> QuadratureOptions<T> {
    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_initial_panels(mut self, panels: usize) -> Self {
        self.initial_panels = panels;
        self
    }
}

/// Integrates `f` over `[lo, hi]`, doubling the panel count until two
/// successive Simpson estimates agree to `rel_tol` (or to the roundoff floor
/// of the integrand's magnitude).
pub fn simpson<T, F>(f: F, lo: T, hi: T, opts: &QuadratureOptions<T>) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    if lo == hi {
        return Ok(T::zero());
    }
    let mut n = opts.initial_panels.max(16);
    n += n % 2;
    let width = hi - lo;
    let nf = T::from_usize_lossy(n);
    let h0 = width / nf;

    let f_lo = f(lo);
    let f_hi = f(hi);
    let ends = f_lo + f_hi;
    let ends_abs = f_lo.abs() + f_hi.abs();
    let (mut odd, mut odd_abs) = (T::zero(), T::zero());
    let (mut even, mut even_abs) = (T::zero(), T::zero());
    for k in 1..n {
        let v = f(lo + h0 * T::from_usize_lossy(k));
        if k % 2 == 1 {
            odd = odd + v;
            odd_abs = odd_abs + v.abs();
        } else {
            even = even + v;
            even_abs = even_abs + v.abs();
        }
    }
    let three = T::lit(3.0);
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    let estimate = |h: T, odd: T, even: T| h / three * (ends + four * odd + two * even);
    let mut previous = estimate(h0, odd, even);
    check_finite(previous, n)?;

    loop {
        if n * 2 > opts.max_panels {
            return Err(FracError::QuadratureNonConvergence {
                last: previous.as_f64(),
                previous: previous.as_f64(),
                panels: n,
            });
        }
        let n2 = n * 2;
        let h = width / T::from_usize_lossy(n2);
        even = even + odd;
        even_abs = even_abs + odd_abs;
        odd = T::zero();
        odd_abs = T::zero();
        for k in (1..n2).step_by(2) {
            let v = f(lo + h * T::from_usize_lossy(k));
            odd = odd + v;
            odd_abs = odd_abs + v.abs();
        }
        let current = estimate(h, odd, even);
        check_finite(current, n2)?;
        let magnitude = (h / three * (ends_abs + four * odd_abs + two * even_abs)).abs();
        let floor = T::lit(64.0) * T::epsilon() * magnitude;
        let diff = (current - previous).abs();
        if diff <= opts.rel_tol * current.abs() || diff <= floor {
            return Ok(current);
        }
        if n2 * 2 > opts.max_panels {
            return Err(FracError::QuadratureNonConvergence {
                last: current.as_f64(),
                previous: previous.as_f64(),
                panels: n2,
            });
        }
        previous = current;
        n = n2;
    }
}

fn check_finite<T: Scalar>(v: T, panels: usize) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(FracError::QuadratureNonConvergence {
            last: v.as_f64(),
            previous: f64::NAN,
            panels,
        })
    }
}

/// Trapezoid rule on (possibly non-uniform) samples.
pub fn trapezoid<T: Scalar>(t: &[T], y: &[T]) -> T {
    debug_assert_eq!(t.len(), y.len());
    let half = T::lit(0.5);
    t.windows(2)
        .zip(y.windows(2))
        .fold(T::zero(), |acc, (tw, yw)| {
            acc + half * (tw[1] - tw[0]) * (yw[0] + yw[1])
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_and_transcendental() {
        let opts = QuadratureOptions::default();
        assert_relative_eq!(
            simpson(|x: f64| x * x * x, 0.0, 2.0, &opts).unwrap(),
            4.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            simpson(f64::exp, 0.0, 1.0, &opts).unwrap(),
            std::f64::consts::E - 1.0,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            simpson(f64::sin, 0.0, std::f64::consts::PI, &opts).unwrap(),
            2.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn zero_and_empty() {
        let opts = QuadratureOptions::default();
        assert_eq!(simpson(|_: f64| 0.0, 0.0, 1.0, &opts).unwrap(), 0.0);
        assert_eq!(simpson(|x: f64| x, 1.0, 1.0, &opts).unwrap(), 0.0);
        // exact cancellation settles on the roundoff floor
        let v = simpson(|x: f64| x.sin(), -1.0, 1.0, &opts).unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn reports_last_estimates_on_failure() {
        let opts = QuadratureOptions {
            max_panels: 64,
            ..QuadratureOptions::default()
        };
        match simpson(|x: f64| x.sqrt(), 0.0, 1.0, &opts) {
            Err(FracError::QuadratureNonConvergence {
                last,
                previous,
                panels,
            }) => {
                assert_eq!(panels, 64);
                assert!((last - 2.0 / 3.0).abs() < 1e-2);
                assert!((previous - 2.0 / 3.0).abs() < 1e-2);
                assert_ne!(last, previous);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn trapezoid_constant() {
        let t = [0.0, 0.3, 1.0];
        assert_relative_eq!(trapezoid(&t, &[1.0, 1.0, 1.0]), 1.0);
    }
}
