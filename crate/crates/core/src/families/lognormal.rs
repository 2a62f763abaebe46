use std::f64::consts::PI;
use std::sync::Arc;

use super::{finite, positive, CatalogEntry, Named, NamedParams};
use crate::error::Result;
use crate::expfam::{ExpFamily, Family, Support};

const NAME: &str = "lognormal";

/// Log-normal densities with source parameter `(μ, σ)` of the underlying
/// normal.
///
/// `t(x) = (ln x, ln² x)`. The `−ln x` term of the density is absorbed into
/// the first natural coordinate, so `θ = (μ/σ² − 1, −1/(2σ²))`, `k ≡ 0` and
/// `F(θ) = −(θ₁ + 1)²/(4θ₂) + ½ log(−π/θ₂)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogNormal;

impl ExpFamily for LogNormal {
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
        let (a, t2) = (theta[0] + 1.0, theta[1]);
        -a * a / (4.0 * t2) + 0.5 * (-PI / t2).ln()
    }

    fn grad_log_normalizer(&self, theta: &[f64]) -> Vec<f64> {
        let (a, t2) = (theta[0] + 1.0, theta[1]);
        vec![-a / (2.0 * t2), a * a / (4.0 * t2 * t2) - 1.0 / (2.0 * t2)]
    }

    fn in_domain(&self, theta: &[f64]) -> bool {
        theta.len() == 2 && theta[0].is_finite() && theta[1].is_finite() && theta[1] < 0.0
    }

    fn natural_from_source(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        let (mu, sigma) = (lambda[0], lambda[1]);
        finite(NAME, "mu", mu)?;
        positive(NAME, "sigma", sigma)?;
        let var = sigma * sigma;
        Ok(vec![mu / var - 1.0, -0.5 / var])
    }

    fn source_log_density(&self, lambda: &[f64], x: &[f64]) -> f64 {
        if !self.support().contains(x) {
            return f64::NEG_INFINITY;
        }
        let (mu, sigma) = (lambda[0], lambda[1]);
        let lx = x[0].ln();
        let z = (lx - mu) / sigma;
        -lx - sigma.ln() - 0.5 * (2.0 * PI).ln() - 0.5 * z * z
    }

    fn sufficient_stat(&self, x: &[f64]) -> Vec<f64> {
        let l = x[0].ln();
        vec![l, l * l]
    }

    fn natural_dot_stat(&self, theta: &[f64], x: &[f64]) -> f64 {
        let l = x[0].ln();
        theta[0] * l + theta[1] * l * l
    }

    fn omega_points(&self) -> Vec<Vec<f64>> {
        vec![vec![1.0], vec![2.0], vec![0.5]]
    }
}

pub(super) fn source_from_named(params: &NamedParams) -> Result<Vec<f64>> {
    let n = Named::new(NAME, params);
    n.only(&["mu", "sigma"])?;
    Ok(vec![n.scalar(&["mu"])?, n.scalar(&["sigma"])?])
}

pub(super) fn entry() -> CatalogEntry {
    let descriptor: Family = Arc::new(LogNormal);
    CatalogEntry {
        descriptor,
        source_space_doc: "mu real, sigma > 0 (parameters of log x)",
        closed_form_energy: Some(Arc::new(|l: &[f64]| {
            let (mu, sigma) = (l[0], l[1]);
            positive(NAME, "sigma", sigma)?;
            Ok((sigma * sigma / 4.0 - mu).exp() / (2.0 * sigma * PI.sqrt()))
        })),
        closed_form_entropy: Some(Arc::new(|l: &[f64]| {
            let (mu, sigma) = (l[0], l[1]);
            positive(NAME, "sigma", sigma)?;
            Ok((sigma * (mu + 0.5).exp() * (2.0 * PI).sqrt()).ln())
        })),
        default_source: vec![0.0, 1.0],
        default_grid: vec![
            vec![0.0, 1.0],
            vec![1.0, 0.5],
            vec![-0.5, 0.8],
            vec![0.3, 1.5],
            vec![2.0, 0.3],
        ],
    }
}
