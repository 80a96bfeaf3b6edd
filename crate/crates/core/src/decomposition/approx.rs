use crate::decomposition::moments::normalized_moment;
use crate::decomposition::{CoefficientSet, Side};
use crate::error::{FracError, Result};
use crate::exact::FracOrder;
use crate::function::FunctionSpec;
use crate::quadrature::QuadratureOptions;
use crate::scalar::Scalar;
use crate::special::gamma;

/// Left decomposition approximation of `I^α x(t)` on `[a, t]`.
pub fn approx_left<T: Scalar>(
    x: &FunctionSpec<T>,
    coeffs: &CoefficientSet<T>,
    a: T,
    t: T,
) -> Result<T> {
    approx_left_with(x, coeffs, a, t, &QuadratureOptions::default())
}

pub fn approx_left_with<T: Scalar>(
    x: &FunctionSpec<T>,
    coeffs: &CoefficientSet<T>,
    a: T,
    t: T,
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    if coeffs.side() != Side::Left {
        return Err(FracError::InvalidInput(
            "left approximation needs left-side coefficients".into(),
        ));
    }
    if t < a {
        return Err(FracError::InvalidInput(format!(
            "left approximation needs t >= a, got t = {t}, a = {a}"
        )));
    }
    evaluate(x, coeffs, a, t, opts)
}

/// Right decomposition approximation of the right integral on `[t, b]`.
pub fn approx_right<T: Scalar>(
    x: &FunctionSpec<T>,
    coeffs: &CoefficientSet<T>,
    t: T,
    b: T,
) -> Result<T> {
    approx_right_with(x, coeffs, t, b, &QuadratureOptions::default())
}

pub fn approx_right_with<T: Scalar>(
    x: &FunctionSpec<T>,
    coeffs: &CoefficientSet<T>,
    t: T,
    b: T,
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    if coeffs.side() != Side::Right {
        return Err(FracError::InvalidInput(
            "right approximation needs right-side coefficients".into(),
        ));
    }
    if t > b {
        return Err(FracError::InvalidInput(format!(
            "right approximation needs t <= b, got t = {t}, b = {b}"
        )));
    }
    evaluate(x, coeffs, b, t, opts)
}

// `base` is the far endpoint of the integral (a on the left, b on the right);
// the right-side sign pattern already lives in the coefficients.
fn evaluate<T: Scalar>(
    x: &FunctionSpec<T>,
    coeffs: &CoefficientSet<T>,
    base: T,
    t: T,
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    let params = coeffs.params();
    x.require_order(params.n() - 1)?;
    let len = (t - base).abs();
    if len == T::zero() {
        return Ok(T::zero());
    }
    let alpha = coeffs.alpha().value();
    let mut sum = T::zero();
    let mut pow = len.powf(alpha);
    for (i, &ai) in coeffs.a().iter().enumerate() {
        if ai != T::zero() {
            sum = sum + ai * pow * x.derivative(i, t)?;
        }
        pow = pow * len;
    }
    // (len)^{α+n-1-p} V_p collapses to len^α times the normalized moment
    let head = len.powf(alpha);
    for (k, &bp) in coeffs.b().iter().enumerate() {
        if bp != T::zero() {
            sum = sum + bp * head * normalized_moment(x, k + 1, base, t, opts)?;
        }
    }
    Ok(sum)
}

/// Classical series `(1/Γ(α)) Σ_{k=0}^{N} (-1)^k (t-a)^{k+α} x^(k)(t) / ((k+α) k!)`.
pub fn approx_analytic_series<T: Scalar>(
    x: &FunctionSpec<T>,
    alpha: FracOrder<T>,
    terms: usize,
    a: T,
    t: T,
) -> Result<T> {
    x.require_order(terms)?;
    if t < a {
        return Err(FracError::InvalidInput(format!(
            "series needs t >= a, got t = {t}, a = {a}"
        )));
    }
    if t == a {
        return Ok(T::zero());
    }
    let al = alpha.value();
    let len = t - a;
    let mut pow = len.powf(al);
    let mut factorial = T::one();
    let mut sum = T::zero();
    for k in 0..=terms {
        let kf = T::from_usize_lossy(k);
        if k > 0 {
            factorial = factorial * kf;
        }
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        sum = sum + sign * pow * x.derivative(k, t)? / ((kf + al) * factorial);
        pow = pow * len;
    }
    Ok(sum / gamma(al)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::ExpansionParams;
    use crate::exact::{exact_power_integral, rl_integral_oracle, rl_right_integral_oracle};
    use approx::assert_relative_eq;

    fn ord(a: f64) -> FracOrder<f64> {
        FracOrder::new(a).unwrap()
    }

    fn left(alpha: f64, n: usize, big: usize) -> CoefficientSet<f64> {
        CoefficientSet::left(ord(alpha), ExpansionParams::new(n, big).unwrap()).unwrap()
    }

    fn right(alpha: f64, n: usize, big: usize) -> CoefficientSet<f64> {
        CoefficientSet::right(ord(alpha), ExpansionParams::new(n, big).unwrap()).unwrap()
    }

    #[test]
    fn left_examples() {
        let x3 = FunctionSpec::power(3.0);
        let got = approx_left(&x3, &left(0.5, 3, 5), 0.0, 1.0).unwrap();
        assert!((got - exact_power_integral(3.0, ord(0.5), 1.0).unwrap()).abs() < 0.05);
        assert_eq!(
            approx_left(&FunctionSpec::zero(), &left(0.5, 3, 5), 0.0, 1.0).unwrap(),
            0.0
        );
        assert_eq!(approx_left(&x3, &left(0.5, 3, 5), 0.2, 0.2).unwrap(), 0.0);
        assert!(approx_left(&x3, &right(0.5, 3, 5), 0.0, 1.0).is_err());
    }

    #[test]
    fn integer_orders_are_exact() {
        let opts = QuadratureOptions::default();
        for (alpha, n, big) in [
            (1.0, 1, 1),
            (1.0, 2, 4),
            (2.0, 1, 3),
            (2.0, 3, 5),
            (3.0, 2, 6),
        ] {
            for x in [
                FunctionSpec::exp(),
                FunctionSpec::sin(),
                FunctionSpec::power(4.0),
            ] {
                let got = approx_left(&x, &left(alpha, n, big), 0.1, 0.9).unwrap();
                let want = rl_integral_oracle(&x, ord(alpha), 0.1, 0.9, &opts).unwrap();
                assert!(
                    (got - want).abs() < 1e-9,
                    "α = {alpha}, n = {n}, N = {big}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn error_shrinks_with_truncation() {
        let opts = QuadratureOptions::default();
        let x = FunctionSpec::exp();
        let want = rl_integral_oracle(&x, ord(0.5), 0.0, 1.0, &opts).unwrap();
        let errs: Vec<f64> = [2, 4, 8, 16, 32]
            .iter()
            .map(|&big| (approx_left(&x, &left(0.5, 2, big), 0.0, 1.0).unwrap() - want).abs())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn right_examples() {
        let opts = QuadratureOptions::default();
        assert_eq!(
            approx_right(&FunctionSpec::zero(), &right(0.5, 1, 3), 0.0, 1.0).unwrap(),
            0.0
        );
        let one = FunctionSpec::power(0.0);
        let oracle = rl_right_integral_oracle(&one, ord(0.5), 0.0, 1.0, &opts).unwrap();
        let got = approx_right(&one, &right(0.5, 1, 3), 0.0, 1.0).unwrap();
        // for a constant the only error is the B tail: |tail_B| x (b-t)^α
        let tail =
            crate::decomposition::tail_b(ord(0.5), ExpansionParams::new(1, 3).unwrap()).unwrap();
        assert!((got - oracle).abs() <= tail.abs() + 1e-12);
    }

    #[test]
    fn right_converges_for_odd_n() {
        let opts = QuadratureOptions::default();
        let x = FunctionSpec::exp();
        let want = rl_right_integral_oracle(&x, ord(0.3), 0.2, 1.0, &opts).unwrap();
        for n in 1..=3 {
            let got = approx_right(&x, &right(0.3, n, 40), 0.2, 1.0).unwrap();
            assert!((got - want).abs() < 2e-3, "n = {n}: {got} vs {want}");
        }
    }

    #[test]
    fn reflection_symmetry() {
        // right integral of x at t on [t, b] equals left integral of y(s) = x(a+b-s) at a+b-t
        let (a, b) = (0.0, 1.0);
        let x = FunctionSpec::custom_with_derivatives(
            std::sync::Arc::new(|s: f64| s.exp() + s * s),
            vec![
                std::sync::Arc::new(|s: f64| s.exp() + 2.0 * s),
                std::sync::Arc::new(|s: f64| s.exp() + 2.0),
            ],
        );
        let y = FunctionSpec::custom_with_derivatives(
            std::sync::Arc::new(move |s: f64| (a + b - s).exp() + (a + b - s).powi(2)),
            vec![
                std::sync::Arc::new(move |s: f64| -(a + b - s).exp() - 2.0 * (a + b - s)),
                std::sync::Arc::new(move |s: f64| (a + b - s).exp() + 2.0),
            ],
        );
        for t in [0.1, 0.35, 0.8] {
            let r = approx_right(&x, &right(0.5, 3, 6), t, b).unwrap();
            let l = approx_left(&y, &left(0.5, 3, 6), a, a + b - t).unwrap();
            assert!((r - l).abs() < 1e-10, "t = {t}: {r} vs {l}");
        }
    }

    #[test]
    fn analytic_series_examples() {
        let x3 = FunctionSpec::power(3.0);
        let got = approx_analytic_series(&x3, ord(0.5), 3, 0.0, 1.0).unwrap();
        assert_relative_eq!(
            got,
            exact_power_integral(3.0, ord(0.5), 1.0).unwrap(),
            max_relative = 1e-12
        );
        assert_eq!(
            approx_analytic_series(&FunctionSpec::zero(), ord(0.5), 3, 0.0, 1.0).unwrap(),
            0.0
        );
        // t^0.5 x and t^1.5 x' weights for N = 1: 1/(0.5 Γ(0.5)) and 1/(1.5 Γ(0.5))
        let one = FunctionSpec::power(0.0);
        let lin = FunctionSpec::power(1.0);
        let c0 = approx_analytic_series(&one, ord(0.5), 1, 0.0, 1.0).unwrap();
        let c1 = c0 - approx_analytic_series(&lin, ord(0.5), 1, 0.0, 1.0).unwrap();
        assert!((c0 - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-12);
        assert!((c1 - 0.3761).abs() < 1e-4);
    }

    #[test]
    fn power_three_and_a_half_matches_integral_equation_scale() {
        // the N = 2 solution of the integral equation is about 1.34457 t^{3.5},
        // so the approximation of t^{3.5} must be the forcing over 1.34457
        let x = FunctionSpec::power(3.5);
        let got = approx_left(&x, &left(0.5, 2, 2), 0.0, 1.0).unwrap();
        let forcing = gamma(4.5).unwrap() / 24.0;
        assert!((got * 1.34457 - forcing).abs() < 1e-4, "{}", got * 1.34457);
    }

    #[test]
    fn missing_derivatives() {
        let x = FunctionSpec::custom_with_derivatives(std::sync::Arc::new(|s: f64| s), vec![]);
        assert!(matches!(
            approx_left(&x, &left(0.5, 2, 3), 0.0, 1.0),
            Err(FracError::MissingDerivative { .. })
        ));
        assert!(approx_analytic_series(&x, ord(0.5), 1, 0.0, 1.0).is_err());
    }
}
