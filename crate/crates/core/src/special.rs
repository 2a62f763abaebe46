//! Log-gamma, digamma and log-beta.
//!
//! Backed by `statrs` (Lanczos approximation with g = 10.9 for log-gamma,
//! asymptotic series with upward recurrence for digamma).

use statrs::function::gamma;

/// The special functions used by the family catalog.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpecialFunctionKit;

impl SpecialFunctionKit {
    pub fn log_gamma(&self, x: f64) -> f64 {
        ln_gamma(x)
    }

    pub fn digamma(&self, x: f64) -> f64 {
        digamma(x)
    }

    pub fn log_beta(&self, a: f64, b: f64) -> f64 {
        ln_beta(a, b)
    }
}

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

#[inline]
pub fn digamma(x: f64) -> f64 {
    gamma::digamma(x)
}

/// `ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b)`.
#[inline]
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln n!`
#[inline]
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}
