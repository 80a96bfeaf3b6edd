//! Real functions on an interval together with their derivatives.

use std::fmt;
use std::sync::Arc;

use crate::error::{FracError, Result};
use crate::exact::{self, FracOrder};
use crate::interp::CubicSpline;
use crate::scalar::{is_integer, Scalar};

pub type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Grid used to estimate `max |x^(n)|` for functions without a closed form.
pub const DERIVATIVE_MAX_SAMPLES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionKind<T> {
    /// `t^γ`
    Power(T),
    Exp,
    Sin,
    Custom,
}

#[derive(Clone)]
struct CustomFn<T> {
    eval: RealFn<T>,
    derivatives: Vec<RealFn<T>>,
    /// Highest order served by central differences when `derivatives` is empty.
    fd_order: usize,
    fd_span: T,
}

/// `scale * base(t)` where `base` is one of the built-ins (analytic derivatives
/// of every order) or a user closure (analytic derivatives when supplied,
/// central differences otherwise).
#[derive(Clone)]
pub struct FunctionSpec<T> {
    kind: FunctionKind<T>,
    scale: T,
    custom: Option<CustomFn<T>>,
}

impl<T: fmt::Debug> fmt::Debug for FunctionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("kind", &self.kind)
            .field("scale", &self.scale)
            .field(
                "analytic_derivatives",
                &self.custom.as_ref().map(|c| c.derivatives.len()),
            )
            .finish()
    }
}

impl<T: Scalar> FunctionSpec<T> {
    pub fn power(exponent: T) -> Self {
        Self::builtin(FunctionKind::Power(exponent))
    }

    pub fn exp() -> Self {
        Self::builtin(FunctionKind::Exp)
    }

    pub fn sin() -> Self {
        Self::builtin(FunctionKind::Sin)
    }

    /// The zero function (`0 * t^0`).
    pub fn zero() -> Self {
        Self::power(T::zero()).scaled(T::zero())
    }

    fn builtin(kind: FunctionKind<T>) -> Self {
        Self {
            kind,
            scale: T::one(),
            custom: None,
        }
    }

    /// A closure whose derivatives up to `fd_order` are taken by central
    /// differences; `span` is the length of the working interval and sets the
    /// step sizes.
    pub fn custom<F>(eval: F, fd_order: usize, span: T) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self {
            kind: FunctionKind::Custom,
            scale: T::one(),
            custom: Some(CustomFn {
                eval: Arc::new(eval),
                derivatives: Vec::new(),
                fd_order,
                fd_span: span,
            }),
        }
    }

    /// A closure with analytic derivatives; `derivatives[i]` is the `(i+1)`-th.
    pub fn custom_with_derivatives(eval: RealFn<T>, derivatives: Vec<RealFn<T>>) -> Self {
        Self {
            kind: FunctionKind::Custom,
            scale: T::one(),
            custom: Some(CustomFn {
                eval,
                derivatives,
                fd_order: 0,
                fd_span: T::one(),
            }),
        }
    }

    /// Natural cubic spline through samples; derivatives up to order 3 are
    /// those of the spline.
    pub fn from_samples(t: Vec<T>, x: Vec<T>) -> Result<Self> {
        let spline = Arc::new(CubicSpline::natural(t, x)?);
        let eval: RealFn<T> = {
            let s = Arc::clone(&spline);
            Arc::new(move |t| s.eval(t))
        };
        let derivatives = (1..=3)
            .map(|order| {
                let s = Arc::clone(&spline);
                Arc::new(move |t| s.derivative(order, t)) as RealFn<T>
            })
            .collect();
        Ok(Self::custom_with_derivatives(eval, derivatives))
    }

    pub fn scaled(mut self, factor: T) -> Self {
        self.scale = self.scale * factor;
        self
    }

    pub fn kind(&self) -> FunctionKind<T> {
        self.kind
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    /// Highest derivative order available (`usize::MAX` for built-ins).
    pub fn max_order(&self) -> usize {
        match &self.custom {
            None => usize::MAX,
            Some(c) if c.derivatives.is_empty() => c.fd_order,
            Some(c) => c.derivatives.len(),
        }
    }

    /// True when derivatives come from finite differences.
    pub fn is_finite_difference(&self) -> bool {
        matches!(&self.custom, Some(c) if c.derivatives.is_empty() && c.fd_order > 0)
    }

    pub fn require_order(&self, order: usize) -> Result<()> {
        if order > self.max_order() {
            Err(FracError::MissingDerivative {
                needed: order,
                available: self.max_order(),
            })
        } else {
            Ok(())
        }
    }

    pub fn eval(&self, t: T) -> T {
        if self.scale == T::zero() {
            return T::zero();
        }
        self.scale * self.base(t)
    }

    fn base(&self, t: T) -> T {
        match self.kind {
            FunctionKind::Power(g) => t.powf(g),
            FunctionKind::Exp => t.exp(),
            FunctionKind::Sin => t.sin(),
            FunctionKind::Custom => (self.custom.as_ref().expect("custom body").eval)(t),
        }
    }

    /// `x^(order)(t)`.
    pub fn derivative(&self, order: usize, t: T) -> Result<T> {
        if order == 0 {
            return Ok(self.eval(t));
        }
        self.require_order(order)?;
        if self.scale == T::zero() {
            return Ok(T::zero());
        }
        let d = match self.kind {
            FunctionKind::Power(g) => {
                let c = falling_factorial(g, order);
                if c == T::zero() {
                    T::zero()
                } else {
                    c * t.powf(g - T::from_usize_lossy(order))
                }
            }
            FunctionKind::Exp => t.exp(),
            FunctionKind::Sin => match order % 4 {
                0 => t.sin(),
                1 => t.cos(),
                2 => -t.sin(),
                _ => -t.cos(),
            },
            FunctionKind::Custom => {
                let c = self.custom.as_ref().expect("custom body");
                if c.derivatives.is_empty() {
                    central_difference(&*c.eval, order, t, c.fd_span)
                } else {
                    (c.derivatives[order - 1])(t)
                }
            }
        };
        Ok(self.scale * d)
    }

    /// `max_{τ ∈ [lo, hi]} |x^(order)(τ)|`: closed form for built-ins, a
    /// 1024-point sample otherwise.
    pub fn max_abs_derivative(&self, order: usize, lo: T, hi: T) -> Result<T> {
        self.require_order(order)?;
        let s = self.scale.abs();
        if s == T::zero() {
            return Ok(T::zero());
        }
        match self.kind {
            FunctionKind::Power(g) if lo >= T::zero() => {
                let c = falling_factorial(g, order).abs();
                if c == T::zero() {
                    return Ok(T::zero());
                }
                let e = g - T::from_usize_lossy(order);
                let at = if e >= T::zero() { hi } else { lo };
                Ok(s * c * at.powf(e))
            }
            FunctionKind::Exp => Ok(s * hi.exp()),
            FunctionKind::Sin => {
                // |sin(τ + order·π/2)| reaches 1 where τ + order·π/2 = π/2 + kπ
                let phase = T::from_usize_lossy(order % 4) * T::FRAC_PI_2();
                let k_lo = ((lo + phase - T::FRAC_PI_2()) / T::PI()).ceil();
                let peak = T::FRAC_PI_2() + k_lo * T::PI() - phase;
                if peak <= hi {
                    Ok(s)
                } else {
                    let f = |x: T| (x + phase).sin().abs();
                    Ok(s * f(lo).max(f(hi)))
                }
            }
            _ => {
                let n = DERIVATIVE_MAX_SAMPLES;
                let mut m = T::zero();
                for k in 0..n {
                    let tau = lo + (hi - lo) * T::from_usize_lossy(k) / T::from_usize_lossy(n - 1);
                    m = m.max(self.derivative(order, tau)?.abs());
                }
                Ok(m)
            }
        }
    }

    /// Closed-form left fractional integral from `a` to `t`, when one exists
    /// (power with `a = 0`, exponential, sine).
    pub fn exact_left_integral(&self, alpha: FracOrder<T>, a: T, t: T) -> Option<Result<T>> {
        if self.scale == T::zero() {
            return Some(Ok(T::zero()));
        }
        let s = self.scale;
        match self.kind {
            FunctionKind::Power(g) if a == T::zero() => {
                Some(exact::exact_power_integral(g, alpha, t).map(|v| s * v))
            }
            FunctionKind::Exp => {
                Some(exact::exact_exp_integral(alpha, t - a).map(|v| s * a.exp() * v))
            }
            FunctionKind::Sin => Some((|| {
                let w = t - a;
                let sin_part = exact::exact_sin_integral(alpha, w)?;
                let cos_part = exact::exact_cos_integral(alpha, w)?;
                Ok(s * (a.sin() * cos_part + a.cos() * sin_part))
            })()),
            _ => None,
        }
    }

    /// Short label for CSV headers.
    pub fn label(&self) -> String {
        let base = match self.kind {
            FunctionKind::Power(g) => format!("t^{g}"),
            FunctionKind::Exp => "exp(t)".to_string(),
            FunctionKind::Sin => "sin(t)".to_string(),
            FunctionKind::Custom => "custom".to_string(),
        };
        if self.scale == T::one() {
            base
        } else {
            format!("{}*{}", self.scale, base)
        }
    }
}

/// `g (g-1) ... (g-k+1)`
fn falling_factorial<T: Scalar>(g: T, k: usize) -> T {
    if is_integer(g) && g >= T::zero() && T::from_usize_lossy(k) > g {
        return T::zero();
    }
    (0..k).fold(T::one(), |acc, j| acc * (g - T::from_usize_lossy(j)))
}

/// Central difference of order `k`, step `span · eps^{1/(k+2)}`.
fn central_difference<T: Scalar>(f: &dyn Fn(T) -> T, k: usize, t: T, span: T) -> T {
    let kf = T::from_usize_lossy(k);
    let h = span * T::epsilon().powf(T::one() / (kf + T::lit(2.0)));
    let half = T::lit(0.5);
    let mut binom = T::one();
    let mut acc = T::zero();
    for j in 0..=k {
        let jf = T::from_usize_lossy(j);
        let sign = if j % 2 == 0 { T::one() } else { -T::one() };
        acc = acc + sign * binom * f(t + (kf * half - jf) * h);
        binom = binom * (kf - jf) / (jf + T::one());
    }
    acc / h.powi(k as i32)
}
