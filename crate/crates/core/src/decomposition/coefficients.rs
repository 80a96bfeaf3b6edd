use crate::decomposition::{ExpansionParams, Side};
use crate::error::{FracError, Result};
use crate::exact::FracOrder;
use crate::scalar::Scalar;
use crate::special::{
    gamma, gamma_ratio_sequence, reciprocal_gamma_product, rising_binomial_partial_sum,
};

fn check_index(params: ExpansionParams, i: usize) -> Result<()> {
    if i >= params.n() {
        return Err(FracError::InvalidInput(format!(
            "coefficient index i = {i} must be below n = {}",
            params.n()
        )));
    }
    Ok(())
}

/// `A_i(α, N) = (1/Γ(α+i+1)) [1 + Σ_{p=n-i}^{N} Γ(p-α-n+1) / (Γ(-α-i) (p-n+1+i)!)]`.
///
/// The gammas run through [`gamma_ratio_sequence`]. At integer `α` the ratio
/// `Γ(q-α-i)/Γ(-α-i)` is taken as its limit, the rising factorial
/// `(-α-i)_q`, so the coefficients stay continuous in `α`.
pub fn coeff_a<T: Scalar>(alpha: FracOrder<T>, params: ExpansionParams, i: usize) -> Result<T> {
    check_index(params, i)?;
    let a = alpha.value();
    let ifl = T::from_usize_lossy(i);
    let upto = params.truncation() - params.n() + 1 + i;
    let norm = gamma(a + ifl + T::one())?;
    if alpha.is_integer() {
        return Ok(rising_binomial_partial_sum(-a - ifl, upto) / norm);
    }
    // q = p - n + 1 + i runs over 1..=upto; Γ(q - α - i) starts at q = 1
    let gammas = gamma_ratio_sequence(T::one() - a - ifl, upto)?;
    let denom = gamma(-a - ifl)?;
    let mut factorial = T::one();
    let mut bracket = T::one();
    for (k, g) in gammas.into_iter().enumerate() {
        factorial = factorial * T::from_usize_lossy(k + 1);
        bracket = bracket + g / (denom * factorial);
    }
    Ok(bracket / norm)
}

/// `B(α, p) = Γ(p-α-n+1) / (Γ(α) Γ(1-α) (p-n+1)!)` for `n <= p <= N`.
///
/// Non-integer `α` goes through `sin(πα)/π`; integer `α` uses the limit
/// `Π_{j=1}^{k-1} (j-α) / (Γ(α) k!)` with `k = p-n+1`.
pub fn coeff_b<T: Scalar>(alpha: FracOrder<T>, params: ExpansionParams, p: usize) -> Result<T> {
    if p < params.n() || p > params.truncation() {
        return Err(FracError::InvalidInput(format!(
            "moment index p = {p} outside {}..={}",
            params.n(),
            params.truncation()
        )));
    }
    let k = p - params.n() + 1;
    let a = alpha.value();
    if alpha.is_integer() {
        let mut v = T::one() / gamma(a)?;
        for j in 1..=k {
            let jf = T::from_usize_lossy(j);
            if j < k {
                v = v * (jf - a);
            }
            v = v / jf;
        }
        return Ok(v);
    }
    let g = *gamma_ratio_sequence(T::one() - a, k)?
        .last()
        .expect("k >= 1");
    let mut factorial = T::one();
    for j in 1..=k {
        factorial = factorial * T::from_usize_lossy(j);
    }
    Ok(reciprocal_gamma_product(a) * g / factorial)
}

/// Value of the part of the `A_i` series dropped at truncation `N`:
/// `-(1/Γ(α+i+1)) Σ_{q=0}^{N-n+1+i} (-α-i)_q / q!`.
///
/// Summed with the rising-factorial ratio, independently of the gamma route
/// used by [`coeff_a`]. Depends on `(α, i, N-n)` only.
pub fn tail_a<T: Scalar>(alpha: FracOrder<T>, params: ExpansionParams, i: usize) -> Result<T> {
    check_index(params, i)?;
    let a = alpha.value();
    let ifl = T::from_usize_lossy(i);
    let upto = params.truncation() - params.n() + 1 + i;
    Ok(-rising_binomial_partial_sum(-a - ifl, upto) / gamma(a + ifl + T::one())?)
}

/// `-(1/(Γ(α)Γ(1-α))) Σ_{p=0}^{N-n+1} Γ(p-α) / p!`, which is also
/// `(1/Γ(α+1)) Σ_p (-α)_p / p!`; the latter form serves integer `α`.
pub fn tail_b<T: Scalar>(alpha: FracOrder<T>, params: ExpansionParams) -> Result<T> {
    let a = alpha.value();
    let upto = params.truncation() - params.n() + 1;
    if alpha.is_integer() {
        return Ok(rising_binomial_partial_sum(-a, upto) / gamma(a + T::one())?);
    }
    let gammas = gamma_ratio_sequence(-a, upto + 1)?;
    let mut factorial = T::one();
    let mut sum = T::zero();
    for (p, g) in gammas.into_iter().enumerate() {
        if p > 0 {
            factorial = factorial * T::from_usize_lossy(p);
        }
        sum = sum + g / factorial;
    }
    Ok(-reciprocal_gamma_product(a) * sum)
}

/// `A_0..A_{n-1}` and `B_n..B_N` for a fixed order, parameters and side.
///
/// Right-side coefficients are `(-1)^i A_i` and `B_p` unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet<T> {
    alpha: FracOrder<T>,
    params: ExpansionParams,
    side: Side,
    a: Vec<T>,
    b: Vec<T>,
    integer_order: bool,
}

impl<T: Scalar> CoefficientSet<T> {
    pub fn new(alpha: FracOrder<T>, params: ExpansionParams, side: Side) -> Result<Self> {
        let mut a = (0..params.n())
            .map(|i| coeff_a(alpha, params, i))
            .collect::<Result<Vec<_>>>()?;
        if side == Side::Right {
            for v in a.iter_mut().skip(1).step_by(2) {
                *v = -*v;
            }
        }
        let b = (params.n()..=params.truncation())
            .map(|p| coeff_b(alpha, params, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha,
            params,
            side,
            a,
            b,
            integer_order: alpha.is_integer(),
        })
    }

    pub fn left(alpha: FracOrder<T>, params: ExpansionParams) -> Result<Self> {
        Self::new(alpha, params, Side::Left)
    }

    pub fn right(alpha: FracOrder<T>, params: ExpansionParams) -> Result<Self> {
        Self::new(alpha, params, Side::Right)
    }

    /// Same set with every `A_i` replaced by zero.
    pub fn without_a(mut self) -> Self {
        self.a.iter_mut().for_each(|v| *v = T::zero());
        self
    }

    pub fn alpha(&self) -> FracOrder<T> {
        self.alpha
    }

    pub fn params(&self) -> ExpansionParams {
        self.params
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// `A_0..A_{n-1}`.
    pub fn a(&self) -> &[T] {
        &self.a
    }

    /// `B_n..B_N`.
    pub fn b(&self) -> &[T] {
        &self.b
    }

    /// True when `α` is an integer and the limit forms were used.
    pub fn is_integer_order(&self) -> bool {
        self.integer_order
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;
    use approx::assert_relative_eq;

    fn ord(a: f64) -> FracOrder<f64> {
        FracOrder::new(a).unwrap()
    }

    fn pars(n: usize, big: usize) -> ExpansionParams {
        ExpansionParams::new(n, big).unwrap()
    }

    #[test]
    fn coeff_a_examples() {
        assert!((coeff_a(ord(0.5), pars(3, 3), 0).unwrap() - 0.5642).abs() < 5e-5);
        assert!((coeff_a(ord(0.5), pars(3, 4), 1).unwrap() + 0.04702).abs() < 5e-6);
        // bracket 1 - 1.5 + 0.375 over Γ(2.5)
        assert_relative_eq!(
            coeff_a(ord(0.5), pars(2, 2), 1).unwrap(),
            -0.125 / gamma(2.5).unwrap(),
            max_relative = 1e-13
        );
        assert!(coeff_a(ord(0.5), pars(2, 2), 2).is_err());
    }

    #[test]
    fn coeff_b_examples() {
        let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
        assert_relative_eq!(
            coeff_b(ord(0.5), pars(3, 5), 3).unwrap(),
            inv_sqrt_pi,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            coeff_b(ord(0.5), pars(3, 5), 4).unwrap(),
            0.25 * inv_sqrt_pi,
            max_relative = 1e-13
        );
        assert!(coeff_b(ord(0.5), pars(3, 5), 2).is_err());
        assert!(coeff_b(ord(0.5), pars(3, 5), 6).is_err());
    }

    #[test]
    fn integer_order_limits_are_continuous() {
        let params = pars(2, 6);
        for alpha in [1.0, 2.0, 3.0] {
            for eps in [1e-7, -1e-7] {
                for i in 0..2 {
                    let exact = coeff_a(ord(alpha), params, i).unwrap();
                    let near = coeff_a(ord(alpha + eps), params, i).unwrap();
                    assert!((exact - near).abs() < 1e-5, "A_{i} at {alpha}");
                }
                for p in 2..=6 {
                    let exact = coeff_b(ord(alpha), params, p).unwrap();
                    let near = coeff_b(ord(alpha + eps), params, p).unwrap();
                    assert!((exact - near).abs() < 1e-5, "B_{p} at {alpha}");
                }
            }
        }
    }

    #[test]
    fn order_one_coefficients() {
        // I^1 x(t) = (t-a) ∫_0^1 x: A vanishes, only the first moment survives
        let set = CoefficientSet::left(ord(1.0), pars(1, 4)).unwrap();
        assert!(set.is_integer_order());
        assert_eq!(set.a(), &[0.0]);
        assert_relative_eq!(set.b()[0], 1.0, max_relative = 1e-14);
        assert_eq!(&set.b()[1..], &[0.0, 0.0, 0.0]);
        for i in 0..3 {
            for big in 3..7 {
                assert_eq!(tail_a(ord(1.0), pars(3, big), i).unwrap(), 0.0);
            }
        }
        assert_eq!(tail_b(ord(1.0), pars(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn tail_b_routes_agree() {
        for alpha in [0.1, 0.5, 0.9, 1.5, 2.3] {
            for big in 3..10 {
                let params = pars(3, big);
                let spec_route = tail_b(ord(alpha), params).unwrap();
                let pochhammer = -tail_a(ord(alpha), pars(1, big - 2), 0).unwrap();
                assert!(
                    (spec_route - pochhammer).abs() < 1e-12,
                    "α = {alpha}, N = {big}"
                );
            }
        }
    }

    #[test]
    fn b_recurrence_route() {
        for alpha in [0.3f64, 0.5, 1.7] {
            let params = pars(2, 12);
            let mut expect = 1.0 / gamma(alpha).unwrap();
            for k in 1..=11 {
                let got = coeff_b(ord(alpha), params, k + 1).unwrap();
                assert_relative_eq!(got, expect, max_relative = 1e-11);
                expect *= (k as f64 - alpha) / (k as f64 + 1.0);
            }
        }
    }

    #[test]
    fn right_side_signs() {
        let params = pars(4, 6);
        let l = CoefficientSet::left(ord(0.5), params).unwrap();
        let r = CoefficientSet::right(ord(0.5), params).unwrap();
        for i in 0..4 {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(r.a()[i], s * l.a()[i]);
        }
        assert_eq!(r.b(), l.b());
        assert!(l.clone().without_a().a().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn single_precision() {
        let a = coeff_a(FracOrder::new(0.5f32).unwrap(), pars(3, 3), 0).unwrap();
        assert!((a - 0.5642).abs() < 1e-4);
    }
}
