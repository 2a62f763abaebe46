use std::f64::consts::{E, PI};
use std::sync::Arc;

use super::{finite, invalid, positive, CatalogEntry, Named, NamedParams};
use crate::error::Result;
use crate::expfam::{ExpFamily, Family, Support};

const NAME: &str = "normal";

/// Univariate normal densities, source parameter `(μ, σ²)`.
///
/// `t(x) = (x, x²)`, `θ = (μ/σ², −1/(2σ²))`,
/// `F(θ) = −θ₁²/(4θ₂) + ½ log(−π/θ₂)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Normal;

impl ExpFamily for Normal {
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
        Support::RealLine { dim: 1 }
    }

    fn log_normalizer(&self, theta: &[f64]) -> f64 {
        let (t1, t2) = (theta[0], theta[1]);
        -t1 * t1 / (4.0 * t2) + 0.5 * (-PI / t2).ln()
    }

    fn grad_log_normalizer(&self, theta: &[f64]) -> Vec<f64> {
        let (t1, t2) = (theta[0], theta[1]);
        vec![
            -t1 / (2.0 * t2),
            t1 * t1 / (4.0 * t2 * t2) - 1.0 / (2.0 * t2),
        ]
    }

    fn in_domain(&self, theta: &[f64]) -> bool {
        theta.len() == 2 && theta[0].is_finite() && theta[1].is_finite() && theta[1] < 0.0
    }

    fn natural_from_source(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        let (mu, var) = (lambda[0], lambda[1]);
        finite(NAME, "mean", mu)?;
        positive(NAME, "variance", var)?;
        Ok(vec![mu / var, -0.5 / var])
    }

    fn source_log_density(&self, lambda: &[f64], x: &[f64]) -> f64 {
        let (mu, var) = (lambda[0], lambda[1]);
        let z = x[0] - mu;
        -0.5 * (2.0 * PI * var).ln() - z * z / (2.0 * var)
    }

    fn sufficient_stat(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0], x[0] * x[0]]
    }

    fn natural_dot_stat(&self, theta: &[f64], x: &[f64]) -> f64 {
        theta[0] * x[0] + theta[1] * x[0] * x[0]
    }

    fn omega_points(&self) -> Vec<Vec<f64>> {
        vec![vec![0.0], vec![1.0], vec![-1.0]]
    }
}

pub(super) fn source_from_named(params: &NamedParams) -> Result<Vec<f64>> {
    let n = Named::new(NAME, params);
    n.only(&["mu", "sigma", "var"])?;
    let mu = n.scalar(&["mu"])?;
    let var = match (params.contains_key("sigma"), params.contains_key("var")) {
        (true, false) => {
            let s = n.scalar(&["sigma"])?;
            positive(NAME, "sigma", s)?;
            s * s
        }
        (false, true) => n.scalar(&["var"])?,
        _ => return Err(invalid(NAME, "give exactly one of sigma or var")),
    };
    Ok(vec![mu, var])
}

pub(super) fn entry() -> CatalogEntry {
    let descriptor: Family = Arc::new(Normal);
    CatalogEntry {
        descriptor,
        source_space_doc: "mu real, var = sigma^2 > 0",
        closed_form_energy: Some(Arc::new(|l: &[f64]| {
            positive(NAME, "variance", l[1])?;
            Ok(1.0 / (2.0 * l[1].sqrt() * PI.sqrt()))
        })),
        closed_form_entropy: Some(Arc::new(|l: &[f64]| {
            positive(NAME, "variance", l[1])?;
            Ok(0.5 * (2.0 * PI * E * l[1]).ln())
        })),
        default_source: vec![0.0, 1.0],
        default_grid: vec![
            vec![0.0, 1.0],
            vec![1.0, 0.25],
            vec![-2.0, 4.0],
            vec![0.5, 2.0],
            vec![3.0, 0.5],
        ],
    }
}
