use crate::decomposition::{ExpansionParams, Side};
use crate::error::{FracError, Result};
use crate::function::FunctionSpec;
use crate::quadrature::{simpson, QuadratureOptions};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState<T> {
    pub p: usize,
    pub value: T,
    pub side: Side,
}

/// `∫_0^1 k s^{k-1} x(base + s (far - base)) ds`.
///
/// `V_p(t)` is `(t-a)^k` times this with `base = a`, `far = t`; `W_p(t)` is
/// `(b-t)^k` times it with `base = b`, `far = t`.
pub fn normalized_moment<T: Scalar>(
    x: &FunctionSpec<T>,
    k: usize,
    base: T,
    far: T,
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    if k == 0 {
        return Err(FracError::InvalidInput(
            "moment weight index starts at 1".into(),
        ));
    }
    let kf = T::from_usize_lossy(k);
    let span = far - base;
    let weight = |s: T| {
        if k == 1 {
            T::one()
        } else {
            kf * s.powi(k as i32 - 1)
        }
    };
    simpson(
        |s| weight(s) * x.eval(base + s * span),
        T::zero(),
        T::one(),
        opts,
    )
}

/// `V_p(hi)` on `[lo, hi]` (left) or `W_p(lo)` on `[lo, hi]` (right), for
/// `p = n..=N`.
pub fn moments<T: Scalar>(
    x: &FunctionSpec<T>,
    params: ExpansionParams,
    side: Side,
    lo: T,
    hi: T,
    opts: &QuadratureOptions<T>,
) -> Result<Vec<MomentState<T>>> {
    if lo > hi {
        return Err(FracError::InvalidInput(format!(
            "moment interval reversed: [{lo}, {hi}]"
        )));
    }
    let (base, far) = match side {
        Side::Left => (lo, hi),
        Side::Right => (hi, lo),
    };
    let len = hi - lo;
    (params.n()..=params.truncation())
        .map(|p| {
            let k = p - params.n() + 1;
            let value = if len == T::zero() {
                T::zero()
            } else {
                len.powi(k as i32) * normalized_moment(x, k, base, far, opts)?
            };
            Ok(MomentState { p, value, side })
        })
        .collect()
}
