use std::sync::Arc;

use super::{positive, CatalogEntry, Named, NamedParams};
use crate::error::Result;
use crate::expfam::{ExpFamily, Family, Support};

const NAME: &str = "exponential";

/// Rate-parameterised exponential distributions `λ e^{−λx}` on `[0, ∞)`.
///
/// `t(x) = −x`, `θ = λ`, `F(θ) = −log θ`, `Θ = (0, ∞)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Exponential;

impl ExpFamily for Exponential {
    fn name(&self) -> &'static str {
        NAME
    }

    fn natural_dim(&self) -> usize {
        1
    }

    fn source_dim(&self) -> usize {
        1
    }

    fn support(&self) -> Support {
        Support::HalfLine {
            lower: 0.0,
            closed: true,
        }
    }

    fn log_normalizer(&self, theta: &[f64]) -> f64 {
        -theta[0].ln()
    }

    fn grad_log_normalizer(&self, theta: &[f64]) -> Vec<f64> {
        vec![-1.0 / theta[0]]
    }

    fn in_domain(&self, theta: &[f64]) -> bool {
        theta.len() == 1 && theta[0].is_finite() && theta[0] > 0.0
    }

    fn natural_from_source(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        positive(NAME, "rate", lambda[0])?;
        Ok(vec![lambda[0]])
    }

    fn source_log_density(&self, lambda: &[f64], x: &[f64]) -> f64 {
        if !self.support().contains(x) {
            return f64::NEG_INFINITY;
        }
        lambda[0].ln() - lambda[0] * x[0]
    }

    fn sufficient_stat(&self, x: &[f64]) -> Vec<f64> {
        vec![-x[0]]
    }

    fn natural_dot_stat(&self, theta: &[f64], x: &[f64]) -> f64 {
        -theta[0] * x[0]
    }

    fn omega_points(&self) -> Vec<Vec<f64>> {
        vec![vec![0.0], vec![1.0], vec![2.0]]
    }
}

pub(super) fn source_from_named(params: &NamedParams) -> Result<Vec<f64>> {
    let n = Named::new(NAME, params);
    n.only(&["lambda", "rate"])?;
    Ok(vec![n.scalar(&["lambda", "rate"])?])
}

pub(super) fn entry() -> CatalogEntry {
    let descriptor: Family = Arc::new(Exponential);
    CatalogEntry {
        descriptor,
        source_space_doc: "lambda > 0 (rate)",
        closed_form_energy: Some(Arc::new(|l: &[f64]| {
            positive(NAME, "rate", l[0])?;
            Ok(l[0] / 2.0)
        })),
        closed_form_entropy: Some(Arc::new(|l: &[f64]| {
            positive(NAME, "rate", l[0])?;
            Ok(1.0 - l[0].ln())
        })),
        default_source: vec![2.0],
        default_grid: vec![vec![0.5], vec![1.0], vec![2.0], vec![3.0], vec![7.0]],
    }
}
