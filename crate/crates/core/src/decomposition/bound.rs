use crate::decomposition::ExpansionParams;
use crate::error::{FracError, Result};
use crate::exact::FracOrder;
use crate::function::FunctionSpec;
use crate::quadrature::{simpson, QuadratureOptions};
use crate::scalar::Scalar;
use crate::special::gamma;

/// Upper bound on the remainder of the binomial expansion at truncation `N`:
///
/// ```text
/// L_n (t-a)^{α+n} e^{(α+n-1)² + α+n-1} / (Γ(α+n) (α+n-1) N^{α+n-1})
/// ```
///
/// with `L_n = max_{[a,t]} |x^(n)|`.
pub fn truncation_bound<T: Scalar>(
    x: &FunctionSpec<T>,
    alpha: FracOrder<T>,
    params: ExpansionParams,
    a: T,
    t: T,
) -> Result<T> {
    if t < a {
        return Err(FracError::InvalidInput(format!(
            "bound needs t >= a, got t = {t}, a = {a}"
        )));
    }
    let n = params.n();
    let ln = x.max_abs_derivative(n, a, t)?;
    if ln == T::zero() || t == a {
        return Ok(T::zero());
    }
    let nf = T::from_usize_lossy(n);
    let m = alpha.value() + nf - T::one();
    let big = T::from_usize_lossy(params.truncation());
    Ok(ln * (t - a).powf(m + T::one()) * (m * m + m).exp()
        / (gamma(m + T::one())? * m * big.powf(m)))
}

/// The exact `n`-fold integration-by-parts form with the kernel
/// `(1-s)^{α+n-1}` replaced by its binomial series up to `s^N`:
///
/// ```text
/// Σ_{i<n} (t-a)^{α+i} x^(i)(a) / Γ(α+i+1)
///   + (t-a)^{α+n} / Γ(α+n) ∫_0^1 Σ_{p=0}^{N} c_p s^p x^(n)(a + s(t-a)) ds
/// ```
///
/// Its distance from the true integral is what [`truncation_bound`] controls.
pub fn binomial_truncated_form<T: Scalar>(
    x: &FunctionSpec<T>,
    alpha: FracOrder<T>,
    params: ExpansionParams,
    a: T,
    t: T,
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    let n = params.n();
    x.require_order(n)?;
    if t < a {
        return Err(FracError::InvalidInput(format!("t = {t} is below a = {a}")));
    }
    if t == a {
        return Ok(T::zero());
    }
    let al = alpha.value();
    let len = t - a;
    let mut sum = T::zero();
    for i in 0..n {
        let e = al + T::from_usize_lossy(i);
        sum = sum + len.powf(e) * x.derivative(i, a)? / gamma(e + T::one())?;
    }
    let beta = al + T::from_usize_lossy(n) - T::one();
    let mut coeffs = Vec::with_capacity(params.truncation() + 1);
    let mut c = T::one();
    for p in 0..=params.truncation() {
        coeffs.push(c);
        let pf = T::from_usize_lossy(p);
        c = c * (pf - beta) / (pf + T::one());
    }
    // order n was checked above, so the derivative cannot fail here
    let integral = simpson(
        |s| {
            let poly = coeffs.iter().rev().fold(T::zero(), |acc, &cp| acc * s + cp);
            poly * x.derivative(n, a + s * len).unwrap_or_else(|_| T::nan())
        },
        T::zero(),
        T::one(),
        opts,
    )?;
    Ok(sum + len.powf(beta + T::one()) * integral / gamma(beta + T::one())?)
}
