//! Ground truth for fractional integrals: closed forms for the test functions
//! and a quadrature oracle built directly on the integral definition.

use crate::error::{FracError, Result};
use crate::function::FunctionSpec;
use crate::quadrature::{simpson, QuadratureOptions};
use crate::scalar::{is_integer, Scalar};
use crate::special::gamma;

/// Cap on the number of series terms in the exp/sin closed forms.
pub const SERIES_TERM_CAP: usize = 10_000;

/// Order of integration `α > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder<T>(T);

impl<T: Scalar> FracOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if alpha > T::zero() && alpha.is_finite() {
            Ok(Self(alpha))
        } else {
            Err(FracError::InvalidInput(format!(
                "order must be positive and finite, got {alpha}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    pub fn is_integer(self) -> bool {
        is_integer(self.0)
    }
}

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    a: T,
    b: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if a < b && a.is_finite() && b.is_finite() {
            Ok(Self { a, b })
        } else {
            Err(FracError::InvalidInput(format!(
                "interval needs a < b, got [{a}, {b}]"
            )))
        }
    }

    #[inline]
    pub fn a(&self) -> T {
        self.a
    }

    #[inline]
    pub fn b(&self) -> T {
        self.b
    }

    #[inline]
    pub fn length(&self) -> T {
        self.b - self.a
    }
}

/// `I^α t^γ` from 0: `Γ(γ+1) / Γ(γ+α+1) · t^{γ+α}`.
pub fn exact_power_integral<T: Scalar>(exponent: T, alpha: FracOrder<T>, t: T) -> Result<T> {
    if t < T::zero() {
        return Err(FracError::InvalidInput(format!(
            "power rule needs t >= 0, got {t}"
        )));
    }
    if exponent <= -T::one() {
        return Err(FracError::InvalidInput(format!(
            "power rule needs γ > -1, got {exponent}"
        )));
    }
    let a = alpha.value();
    let ratio = gamma(exponent + T::one())? / gamma(exponent + a + T::one())?;
    Ok(ratio * t.powf(exponent + a))
}

/// Sums `Σ_k c_k` for a term sequence defined by its first term and a ratio,
/// stopping once the next term drops below `1e-14` of the partial sum.
fn sum_series<T, R>(first: T, mut ratio: R) -> Result<T>
where
    T: Scalar,
    R: FnMut(usize) -> T,
{
    let tol = T::lit(1e-14).max(T::epsilon());
    let mut term = first;
    let mut sum = first;
    for k in 0..SERIES_TERM_CAP {
        term = term * ratio(k);
        sum = sum + term;
        if term.abs() < tol * sum.abs() || term == T::zero() {
            return Ok(sum);
        }
    }
    Err(FracError::SeriesNonConvergence {
        terms: SERIES_TERM_CAP,
    })
}

/// `I^α e^t` from 0: `t^α Σ_k t^k / Γ(k+α+1)`.
pub fn exact_exp_integral<T: Scalar>(alpha: FracOrder<T>, t: T) -> Result<T> {
    if t < T::zero() {
        return Err(FracError::InvalidInput(format!(
            "series needs t >= 0, got {t}"
        )));
    }
    if t == T::zero() {
        return Ok(T::zero());
    }
    let a = alpha.value();
    let first = t.powf(a) / gamma(a + T::one())?;
    sum_series(first, |k| t / (T::from_usize_lossy(k) + a + T::one()))
}

/// `I^α sin t` from 0: `Σ_k (-1)^k t^{2k+1+α} / Γ(2k+2+α)`.
pub fn exact_sin_integral<T: Scalar>(alpha: FracOrder<T>, t: T) -> Result<T> {
    alternating_trig_series(alpha, t, 1)
}

/// `I^α cos t` from 0: `Σ_k (-1)^k t^{2k+α} / Γ(2k+1+α)`.
pub fn exact_cos_integral<T: Scalar>(alpha: FracOrder<T>, t: T) -> Result<T> {
    alternating_trig_series(alpha, t, 0)
}

fn alternating_trig_series<T: Scalar>(alpha: FracOrder<T>, t: T, shift: usize) -> Result<T> {
    if t < T::zero() {
        return Err(FracError::InvalidInput(format!(
            "series needs t >= 0, got {t}"
        )));
    }
    if t == T::zero() {
        return Ok(T::zero());
    }
    let a = alpha.value();
    let s = T::from_usize_lossy(shift);
    let first = t.powf(s + a) / gamma(s + a + T::one())?;
    sum_series(first, |k| {
        let m = T::lit(2.0) * T::from_usize_lossy(k) + s + a;
        -t * t / ((m + T::one()) * (m + T::lit(2.0)))
    })
}

/// Exponent of the substitution `τ = t - (t-a) s^m`: `m = ⌈α⌉/α`, so the
/// kernel weight becomes the polynomial `s^{⌈α⌉-1}` (constant for `α ≤ 1`).
fn substitution_power<T: Scalar>(alpha: T) -> T {
    alpha.ceil() / alpha
}

/// Left fractional integral `(1/Γ(α)) ∫_a^t (t-τ)^{α-1} x(τ) dτ` by
/// composite Simpson after substituting `τ = t - (t-a) s^m`, which turns the
/// weak endpoint singularity into a bounded integrand.
pub fn rl_integral_oracle<T: Scalar>(
    x: &FunctionSpec<T>,
    alpha: FracOrder<T>,
    a: T,
    t: T,
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    if t < a {
        return Err(FracError::InvalidInput(format!(
            "left integral needs t >= a, got t = {t}, a = {a}"
        )));
    }
    if t == a {
        return Ok(T::zero());
    }
    kernel_integral(alpha, t - a, opts, |w| x.eval(t - w))
}

/// Right fractional integral `(1/Γ(α)) ∫_t^b (τ-t)^{α-1} x(τ) dτ`.
pub fn rl_right_integral_oracle<T: Scalar>(
    x: &FunctionSpec<T>,
    alpha: FracOrder<T>,
    t: T,
    b: T,
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    if t > b {
        return Err(FracError::InvalidInput(format!(
            "right integral needs t <= b, got t = {t}, b = {b}"
        )));
    }
    if t == b {
        return Ok(T::zero());
    }
    kernel_integral(alpha, b - t, opts, |w| x.eval(t + w))
}

/// `(1/Γ(α)) ∫_0^len w^{α-1} g(w) dw` with `w = len · s^m`.
fn kernel_integral<T, G>(
    alpha: FracOrder<T>,
    len: T,
    opts: &QuadratureOptions<T>,
    g: G,
) -> Result<T>
where
    T: Scalar,
    G: Fn(T) -> T,
{
    let a = alpha.value();
    let m = substitution_power(a);
    let weight_exp = m * a - T::one();
    let flat = weight_exp.abs() <= T::epsilon() * T::lit(8.0);
    let integrand = |s: T| {
        let w = if m == T::one() {
            len * s
        } else {
            len * s.powf(m)
        };
        let weight = if flat {
            T::one()
        } else {
            s.powi(weight_exp.round().to_i32().unwrap_or(0))
        };
        weight * g(w)
    };
    let core = simpson(integrand, T::zero(), T::one(), opts)?;
    Ok(len.powf(a) * m * core / gamma(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ord(a: f64) -> FracOrder<f64> {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn validated_types() {
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(-0.5).is_err());
        assert!(FracOrder::new(f64::INFINITY).is_err());
        assert!(ord(2.0).is_integer());
        assert!(!ord(0.5).is_integer());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert_eq!(Interval::new(0.0, 2.0).unwrap().length(), 2.0);
    }

    #[test]
    fn power_rule_examples() {
        // Γ(4)/Γ(4.5) and Γ(11)/Γ(11.5) from mpmath at 30 digits
        assert_relative_eq!(
            exact_power_integral(3.0, ord(0.5), 1.0).unwrap(),
            0.515_830_476_386_52,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            exact_power_integral(0.0, ord(1.0), 1.0).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            exact_power_integral(10.0, ord(0.5), 1.0).unwrap(),
            0.304_955_960_839_043_4,
            max_relative = 1e-13
        );
        assert!(exact_power_integral(3.0, ord(0.5), -1.0).is_err());
    }

    #[test]
    fn exp_series_examples() {
        assert_eq!(exact_exp_integral(ord(0.5), 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            exact_exp_integral(ord(1.0), 1.0).unwrap(),
            std::f64::consts::E - 1.0,
            max_relative = 1e-14
        );
        // Σ 1/Γ(k+1.5), mpmath nsum and tanh-sinh quadrature agree to 30 digits
        assert_relative_eq!(
            exact_exp_integral(ord(0.5), 1.0).unwrap(),
            2.290_698_252_303_238,
            max_relative = 1e-13
        );
    }

    #[test]
    fn sin_series_examples() {
        assert_eq!(exact_sin_integral(ord(0.5), 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            exact_sin_integral(ord(1.0), std::f64::consts::PI).unwrap(),
            2.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            exact_sin_integral(ord(0.5), 1.0).unwrap(),
            0.669_684_259_577_663_6,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            exact_cos_integral(ord(1.0), 1.2).unwrap(),
            1.2f64.sin(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn oracle_examples() {
        let opts = QuadratureOptions::default();
        let x3 = FunctionSpec::power(3.0);
        let got = rl_integral_oracle(&x3, ord(0.5), 0.0, 1.0, &opts).unwrap();
        assert!((got - exact_power_integral(3.0, ord(0.5), 1.0).unwrap()).abs() < 1e-8);

        let zero = FunctionSpec::zero();
        assert_eq!(
            rl_integral_oracle(&zero, ord(0.3), 0.0, 0.8, &opts).unwrap(),
            0.0
        );

        let e = FunctionSpec::exp();
        let got = rl_integral_oracle(&e, ord(0.5), 0.0, 1.0, &opts).unwrap();
        assert!((got - exact_exp_integral(ord(0.5), 1.0).unwrap()).abs() < 1e-8);

        assert_eq!(
            rl_integral_oracle(&e, ord(0.5), 0.3, 0.3, &opts).unwrap(),
            0.0
        );
        assert!(rl_integral_oracle(&e, ord(0.5), 0.3, 0.1, &opts).is_err());
    }

    #[test]
    fn right_oracle_examples() {
        let opts = QuadratureOptions::default();
        let one = FunctionSpec::power(0.0);
        assert_relative_eq!(
            rl_right_integral_oracle(&one, ord(1.0), 0.0, 1.0, &opts).unwrap(),
            1.0,
            max_relative = 1e-12
        );
        assert_eq!(
            rl_right_integral_oracle(&FunctionSpec::zero(), ord(0.5), 0.0, 1.0, &opts).unwrap(),
            0.0
        );
        // (1/√π) ∫_0^1 τ^{2.5} dτ, mpmath tanh-sinh quadrature
        let x3 = FunctionSpec::power(3.0);
        assert_relative_eq!(
            rl_right_integral_oracle(&x3, ord(0.5), 0.0, 1.0, &opts).unwrap(),
            0.161_197_023_870_787_5,
            max_relative = 1e-9
        );
    }

    #[test]
    fn oracle_above_one() {
        // α = 2 is ∫_a^t (t-τ) x(τ) dτ; for x = 1 that is (t-a)²/2
        let opts = QuadratureOptions::default();
        let one = FunctionSpec::power(0.0);
        assert_relative_eq!(
            rl_integral_oracle(&one, ord(2.0), 0.5, 1.5, &opts).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        let got = rl_integral_oracle(&FunctionSpec::exp(), ord(2.5), 0.0, 1.0, &opts).unwrap();
        assert_relative_eq!(
            got,
            exact_exp_integral(ord(2.5), 1.0).unwrap(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn shifted_closed_forms() {
        let opts = QuadratureOptions::default();
        for f in [FunctionSpec::exp(), FunctionSpec::sin()] {
            let exact = f.exact_left_integral(ord(0.7), 0.4, 1.3).unwrap().unwrap();
            let oracle = rl_integral_oracle(&f, ord(0.7), 0.4, 1.3, &opts).unwrap();
            assert_relative_eq!(exact, oracle, max_relative = 1e-9);
        }
    }
}
