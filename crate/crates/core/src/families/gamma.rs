use std::sync::Arc;

use super::{positive, CatalogEntry, Named, NamedParams};
use crate::error::{Error, Result};
use crate::expfam::{ExpFamily, Family, Support};
use crate::special::{digamma, ln_beta, ln_gamma};

const NAME: &str = "gamma";

/// Gamma densities `x^{α−1} e^{−x/β} / (Γ(α) β^α)` with shape α and
/// **scale** β.
///
/// `t(x) = (ln x, x)`, `θ = (α − 1, −1/β)`,
/// `F(θ) = ln Γ(θ₁ + 1) − (θ₁ + 1) ln(−θ₂)`, `Θ = (−1, ∞) × (−∞, 0)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gamma;

impl ExpFamily for Gamma {
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
        Support::HalfLine {
            lower: 0.0,
            closed: false,
        }
    }

    fn log_normalizer(&self, theta: &[f64]) -> f64 {
        let shape = theta[0] + 1.0;
        ln_gamma(shape) - shape * (-theta[1]).ln()
    }

    fn grad_log_normalizer(&self, theta: &[f64]) -> Vec<f64> {
        let shape = theta[0] + 1.0;
        vec![digamma(shape) - (-theta[1]).ln(), -shape / theta[1]]
    }

    fn in_domain(&self, theta: &[f64]) -> bool {
        theta.len() == 2
            && theta[0].is_finite()
            && theta[1].is_finite()
            && theta[0] > -1.0
            && theta[1] < 0.0
    }

    fn natural_from_source(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        positive(NAME, "shape", lambda[0])?;
        positive(NAME, "scale", lambda[1])?;
        Ok(vec![lambda[0] - 1.0, -1.0 / lambda[1]])
    }

    fn source_log_density(&self, lambda: &[f64], x: &[f64]) -> f64 {
        if !self.support().contains(x) {
            return f64::NEG_INFINITY;
        }
        let (a, b) = (lambda[0], lambda[1]);
        (a - 1.0) * x[0].ln() - x[0] / b - ln_gamma(a) - a * b.ln()
    }

    fn sufficient_stat(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0].ln(), x[0]]
    }

    fn natural_dot_stat(&self, theta: &[f64], x: &[f64]) -> f64 {
        theta[0] * x[0].ln() + theta[1] * x[0]
    }

    fn omega_points(&self) -> Vec<Vec<f64>> {
        vec![vec![1.0], vec![2.0], vec![3.0]]
    }
}

pub(super) fn source_from_named(params: &NamedParams) -> Result<Vec<f64>> {
    let n = Named::new(NAME, params);
    n.only(&["alpha", "shape", "beta", "scale"])?;
    Ok(vec![
        n.scalar(&["alpha", "shape"])?,
        n.scalar(&["beta", "scale"])?,
    ])
}

pub(super) fn entry() -> CatalogEntry {
    let descriptor: Family = Arc::new(Gamma);
    CatalogEntry {
        descriptor,
        source_space_doc: "alpha > 0 (shape), beta > 0 (scale); energy needs alpha > 1/2",
        closed_form_energy: Some(Arc::new(|l: &[f64]| {
            let (a, b) = (l[0], l[1]);
            positive(NAME, "shape", a)?;
            positive(NAME, "scale", b)?;
            if a <= 0.5 {
                return Err(Error::DomainViolation(format!(
                    "gamma energy undefined for shape {a} <= 1/2"
                )));
            }
            Ok(1.0 / (b * (2.0 * a - 1.0) * ln_beta(a, 0.5).exp()))
        })),
        closed_form_entropy: Some(Arc::new(|l: &[f64]| {
            let (a, b) = (l[0], l[1]);
            positive(NAME, "shape", a)?;
            positive(NAME, "scale", b)?;
            Ok(a + b.ln() + ln_gamma(a) + (1.0 - a) * digamma(a))
        })),
        default_source: vec![2.0, 1.0],
        default_grid: vec![
            vec![0.75, 1.0],
            vec![1.0, 1.0],
            vec![2.0, 0.5],
            vec![3.5, 2.0],
            vec![5.0, 1.5],
        ],
    }
}
