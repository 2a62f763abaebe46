use std::sync::Arc;

use super::{positive, CatalogEntry, Named, NamedParams};
use crate::error::{Error, Result};
use crate::expfam::{ExpFamily, Family, Support};

const NAME: &str = "pareto";

/// Pareto densities `a kᵃ / x^{a+1}` on `[k, ∞)` for a fixed scale `k`.
///
/// `t(x) = −ln x`, `θ = a + 1`, `F(θ) = −ln(θ − 1) − (θ − 1) ln k`,
/// `Θ = (1, ∞)`.
#[derive(Debug, Clone, Copy)]
pub struct Pareto {
    scale: f64,
}

impl Pareto {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "pareto scale must be positive, got {scale}"
            )));
        }
        Ok(Pareto { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl ExpFamily for Pareto {
    fn name(&self) -> &'static str {
        NAME
    }

    fn id(&self) -> String {
        format!("{NAME}(k={})", self.scale)
    }

    fn natural_dim(&self) -> usize {
        1
    }

    fn source_dim(&self) -> usize {
        1
    }

    fn support(&self) -> Support {
        Support::HalfLine {
            lower: self.scale,
            closed: true,
        }
    }

    fn log_normalizer(&self, theta: &[f64]) -> f64 {
        let a = theta[0] - 1.0;
        -a.ln() - a * self.scale.ln()
    }

    fn grad_log_normalizer(&self, theta: &[f64]) -> Vec<f64> {
        vec![-1.0 / (theta[0] - 1.0) - self.scale.ln()]
    }

    fn in_domain(&self, theta: &[f64]) -> bool {
        theta.len() == 1 && theta[0].is_finite() && theta[0] > 1.0
    }

    fn natural_from_source(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        positive(NAME, "shape", lambda[0])?;
        Ok(vec![lambda[0] + 1.0])
    }

    fn source_log_density(&self, lambda: &[f64], x: &[f64]) -> f64 {
        if !self.support().contains(x) {
            return f64::NEG_INFINITY;
        }
        let a = lambda[0];
        a.ln() + a * self.scale.ln() - (a + 1.0) * x[0].ln()
    }

    fn sufficient_stat(&self, x: &[f64]) -> Vec<f64> {
        vec![-x[0].ln()]
    }

    fn natural_dot_stat(&self, theta: &[f64], x: &[f64]) -> f64 {
        -theta[0] * x[0].ln()
    }

    fn omega_points(&self) -> Vec<Vec<f64>> {
        let k = self.scale;
        vec![vec![k], vec![2.0 * k], vec![3.0 * k]]
    }
}

pub(super) fn source_from_named(params: &NamedParams) -> Result<(f64, Vec<f64>)> {
    let n = Named::new(NAME, params);
    n.only(&["a", "shape", "k", "scale"])?;
    let k = n.scalar_or(&["k", "scale"], 1.0)?;
    positive(NAME, "scale", k)?;
    Ok((k, vec![n.scalar(&["a", "shape"])?]))
}

pub(super) fn entry(k: f64) -> Result<CatalogEntry> {
    let family = Pareto::new(k)?;
    let descriptor: Family = Arc::new(family);
    Ok(CatalogEntry {
        descriptor,
        source_space_doc: "a > 0 (shape); the scale k is fixed per family",
        closed_form_energy: Some(Arc::new(move |l: &[f64]| {
            let a = l[0];
            positive(NAME, "shape", a)?;
            Ok(a * a / (k * (2.0 * a + 1.0)))
        })),
        closed_form_entropy: Some(Arc::new(move |l: &[f64]| {
            let a = l[0];
            positive(NAME, "shape", a)?;
            Ok(1.0 + 1.0 / a + (k / a).ln())
        })),
        default_source: vec![1.0],
        default_grid: vec![vec![0.5], vec![1.0], vec![2.5], vec![4.0], vec![10.0]],
    })
}
