//! Expansion of the fractional integral into integer derivatives of `x` at
//! the evaluation point plus a finite set of moment integrals.
//!
//! For smoothness order `n` and truncation order `N` the left approximation is
//!
//! ```text
//! Σ_{i<n} A_i (t-a)^{α+i} x^(i)(t) + Σ_{p=n}^{N} B_p (t-a)^{α+n-1-p} V_p(t)
//! V_p(t) = ∫_a^t (p-n+1) (τ-a)^{p-n} x(τ) dτ
//! ```

mod approx;
mod bound;
mod coefficients;
mod moments;

pub use approx::{
    approx_analytic_series, approx_left, approx_left_with, approx_right, approx_right_with,
};
pub use bound::{binomial_truncated_form, truncation_bound};
pub use coefficients::{coeff_a, coeff_b, tail_a, tail_b, CoefficientSet};
pub use moments::{moments, normalized_moment, MomentState};

use crate::error::{FracError, Result};

/// Smoothness order `n >= 1` and truncation order `N >= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExpansionParams {
    n: usize,
    truncation: usize,
}

impl ExpansionParams {
    pub fn new(n: usize, truncation: usize) -> Result<Self> {
        if n == 0 {
            return Err(FracError::InvalidInput(
                "derivative order n must be at least 1".into(),
            ));
        }
        if truncation < n {
            return Err(FracError::InvalidInput(format!(
                "truncation N = {truncation} is below n = {n}"
            )));
        }
        Ok(Self { n, truncation })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `N`.
    #[inline]
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Number of moment terms, `N - n + 1`.
    #[inline]
    pub fn moment_count(&self) -> usize {
        self.truncation - self.n + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}
