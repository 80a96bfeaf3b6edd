//! Gamma function on the real line and the coefficient helpers built on it.

use crate::error::{FracError, Result};
use crate::scalar::{is_integer, Scalar};

// Lanczos approximation (g = 10.900511, 11 terms), coefficients from
// G. R. Pugh, "An Analysis of the Lanczos Gamma Approximation" (2004), p. 116.
const LANCZOS_G: f64 = 10.900511;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

/// True for 0, -1, -2, ...
#[inline]
pub fn is_gamma_pole<T: Scalar>(x: T) -> bool {
    x <= T::zero() && is_integer(x)
}

/// `sin(pi x)` with exact zeros at the integers and argument reduction to
/// `[-1/2, 1/2]` so large arguments keep their accuracy.
pub fn sin_pi<T: Scalar>(x: T) -> T {
    if is_integer(x) {
        return T::zero();
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let mut r = x - two * (x / two).round();
    if r > half {
        r = T::one() - r;
    } else if r < -half {
        r = -T::one() - r;
    }
    (T::PI() * r).sin()
}

fn lanczos<T: Scalar>(x: T) -> T {
    let sum = LANCZOS_COEFFS
        .iter()
        .enumerate()
        .skip(1)
        .fold(T::lit(LANCZOS_COEFFS[0]), |s, (k, &c)| {
            s + T::lit(c) / (x + T::from_usize_lossy(k) - T::one())
        });
    let half = T::lit(0.5);
    let base = (x - half + T::lit(LANCZOS_G)) / T::E();
    sum * T::lit(TWO_SQRT_E_OVER_PI) * base.powf(x - half)
}

/// Euler's gamma function.
///
/// Lanczos approximation for `x >= 0.5`, reflection
/// `Γ(x) Γ(1 - x) = π / sin(πx)` below that.
pub fn gamma<T: Scalar>(x: T) -> Result<T> {
    if x.is_nan() {
        return Err(FracError::InvalidInput("gamma of NaN".into()));
    }
    if is_gamma_pole(x) {
        return Err(FracError::GammaPole { arg: x.as_f64() });
    }
    if x < T::lit(0.5) {
        Ok(T::PI() / (sin_pi(x) * lanczos(T::one() - x)))
    } else {
        Ok(lanczos(x))
    }
}

/// `1 / (Γ(α) Γ(1 - α)) = sin(πα) / π`; exactly zero at integer `α`.
pub fn reciprocal_gamma_product<T: Scalar>(alpha: T) -> T {
    sin_pi(alpha) / T::PI()
}

/// `[Γ(start), Γ(start + 1), ..., Γ(start + count - 1)]`, one gamma call and
/// then the recurrence `Γ(z + 1) = z Γ(z)`.
pub fn gamma_ratio_sequence<T: Scalar>(start: T, count: usize) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    for k in 0..count {
        let z = start + T::from_usize_lossy(k);
        if is_gamma_pole(z) {
            return Err(FracError::GammaPole { arg: z.as_f64() });
        }
    }
    let mut g = gamma(start)?;
    out.push(g);
    for k in 1..count {
        g = g * (start + T::from_usize_lossy(k - 1));
        out.push(g);
    }
    Ok(out)
}

/// Partial sums `Σ_{q=0}^{m} (z)_q / q!` of the binomial series of `(1 - 1)^{-z}`,
/// generated with the ratio `(z + q) / (q + 1)`. No gamma evaluations, so the
/// result is smooth in `z` through the integers.
pub(crate) fn rising_binomial_partial_sum<T: Scalar>(z: T, upto: usize) -> T {
    let mut term = T::one();
    let mut sum = T::one();
    for q in 0..upto {
        let qf = T::from_usize_lossy(q);
        term = term * (z + qf) / (qf + T::one());
        sum = sum + term;
    }
    sum
}
