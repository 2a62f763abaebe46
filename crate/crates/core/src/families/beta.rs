use std::sync::Arc;

use super::{positive, CatalogEntry, Named, NamedParams};
use crate::error::{Error, Result};
use crate::expfam::{ExpFamily, Family, Support};
use crate::special::{digamma, ln_beta, ln_gamma};

const NAME: &str = "beta";

/// Beta densities on `(0, 1)`.
///
/// `t(x) = (ln x, ln(1 − x))`, `θ = (α − 1, β − 1)`,
/// `F(θ) = ln B(θ₁ + 1, θ₂ + 1)`, `Θ = (−1, ∞)²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Beta;

impl ExpFamily for Beta {
    fn name(&self) -> &'static str {
        NAME
    }

    fn natural_dim(&self) -> usize {
        2
    }

    fn source_dim(&self) -> usize {
        2
    }

    fn support(&self) -> Support {
        Support::Interval {
            lower: 0.0,
            upper: 1.0,
        }
    }

    fn log_normalizer(&self, theta: &[f64]) -> f64 {
        ln_beta(theta[0] + 1.0, theta[1] + 1.0)
    }

    fn grad_log_normalizer(&self, theta: &[f64]) -> Vec<f64> {
        let (a, b) = (theta[0] + 1.0, theta[1] + 1.0);
        let s = digamma(a + b);
        vec![digamma(a) - s, digamma(b) - s]
    }

    fn in_domain(&self, theta: &[f64]) -> bool {
        theta.len() == 2
            && theta[0].is_finite()
            && theta[1].is_finite()
            && theta[0] > -1.0
            && theta[1] > -1.0
    }

    fn natural_from_source(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        positive(NAME, "alpha", lambda[0])?;
        positive(NAME, "beta", lambda[1])?;
        Ok(vec![lambda[0] - 1.0, lambda[1] - 1.0])
    }

    fn source_log_density(&self, lambda: &[f64], x: &[f64]) -> f64 {
        if !self.support().contains(x) {
            return f64::NEG_INFINITY;
        }
        let (a, b) = (lambda[0], lambda[1]);
        (a - 1.0) * x[0].ln() + (b - 1.0) * (-x[0]).ln_1p() - ln_beta(a, b)
    }

    fn sufficient_stat(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0].ln(), (-x[0]).ln_1p()]
    }

    fn sufficient_stat_from_upper(&self, gap: f64) -> Vec<f64> {
        vec![(-gap).ln_1p(), gap.ln()]
    }

    fn natural_dot_stat(&self, theta: &[f64], x: &[f64]) -> f64 {
        theta[0] * x[0].ln() + theta[1] * (-x[0]).ln_1p()
    }

    fn omega_points(&self) -> Vec<Vec<f64>> {
        vec![vec![0.25], vec![0.5], vec![0.75]]
    }
}

/// The energy expression exactly as printed in the usual comparison table,
/// `B²(α,β) Γ(2α−1) Γ(2β−1) / Γ(2α+2β−2)`.
///
/// It places `B²(α, β)` in the numerator; the density-squared integral has
/// it in the denominator. Kept only to document the disagreement.
pub fn table_literal_energy(alpha: f64, beta: f64) -> f64 {
    (2.0 * ln_beta(alpha, beta) + ln_gamma(2.0 * alpha - 1.0) + ln_gamma(2.0 * beta - 1.0)
        - ln_gamma(2.0 * alpha + 2.0 * beta - 2.0))
    .exp()
}

pub(super) fn source_from_named(params: &NamedParams) -> Result<Vec<f64>> {
    let n = Named::new(NAME, params);
    n.only(&["alpha", "beta"])?;
    Ok(vec![n.scalar(&["alpha"])?, n.scalar(&["beta"])?])
}

pub(super) fn entry() -> CatalogEntry {
    let descriptor: Family = Arc::new(Beta);
    CatalogEntry {
        descriptor,
        source_space_doc: "alpha > 0, beta > 0; energy needs both > 1/2",
        closed_form_energy: Some(Arc::new(|l: &[f64]| {
            let (a, b) = (l[0], l[1]);
            positive(NAME, "alpha", a)?;
            positive(NAME, "beta", b)?;
            if a <= 0.5 || b <= 0.5 {
                return Err(Error::DomainViolation(format!(
                    "beta energy undefined for ({a}, {b}): both parameters must exceed 1/2"
                )));
            }
            Ok((ln_beta(2.0 * a - 1.0, 2.0 * b - 1.0) - 2.0 * ln_beta(a, b)).exp())
        })),
        closed_form_entropy: Some(Arc::new(|l: &[f64]| {
            let (a, b) = (l[0], l[1]);
            positive(NAME, "alpha", a)?;
            positive(NAME, "beta", b)?;
            Ok(
                ln_beta(a, b) - (a - 1.0) * digamma(a) - (b - 1.0) * digamma(b)
                    + (a + b - 2.0) * digamma(a + b),
            )
        })),
        default_source: vec![2.0, 2.0],
        default_grid: vec![
            vec![1.0, 1.0],
            vec![2.0, 2.0],
            vec![0.75, 1.5],
            vec![3.0, 5.0],
            vec![1.5, 0.8],
        ],
    }
}
