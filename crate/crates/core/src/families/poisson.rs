use std::sync::Arc;

use super::{positive, CatalogEntry, Named, NamedParams};
use crate::error::Result;
use crate::expfam::{Evaluated, ExpFamily, Family, Support};
use crate::series::SeriesConfig;
use crate::special::ln_factorial;

const NAME: &str = "poisson";

/// Poisson mass functions `λˣ e^{−λ} / x!`.
///
/// `t(x) = x`, `θ = ln λ`, `F(θ) = e^θ`, `k(x) = −ln x!`, `Θ = ℝ`.
/// Carrier expectations are truncated series (see [`SeriesConfig`]).
#[derive(Debug, Clone, Copy, Default)]
pub struct Poisson;

fn index(x: &[f64]) -> u64 {
    x[0] as u64
}

impl ExpFamily for Poisson {
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
        Support::NonNegativeIntegers
    }

    fn log_normalizer(&self, theta: &[f64]) -> f64 {
        theta[0].exp()
    }

    fn grad_log_normalizer(&self, theta: &[f64]) -> Vec<f64> {
        vec![theta[0].exp()]
    }

    fn in_domain(&self, theta: &[f64]) -> bool {
        theta.len() == 1 && theta[0].is_finite()
    }

    fn natural_from_source(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        positive(NAME, "intensity", lambda[0])?;
        Ok(vec![lambda[0].ln()])
    }

    fn source_log_density(&self, lambda: &[f64], x: &[f64]) -> f64 {
        if !self.support().contains(x) {
            return f64::NEG_INFINITY;
        }
        let l = lambda[0];
        x[0] * l.ln() - l - ln_factorial(index(x))
    }

    fn sufficient_stat(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0]]
    }

    fn carrier(&self, x: &[f64]) -> f64 {
        -ln_factorial(index(x))
    }

    fn has_zero_carrier(&self) -> bool {
        false
    }

    /// `log E_{p_θ}[1/x!] = log Σ e^{xθ − e^θ} / (x!)²`.
    fn log_carrier_expectation(&self, theta: &[f64], cfg: &SeriesConfig) -> Evaluated {
        let (t, f) = (theta[0], theta[0].exp());
        let s = cfg.sum(|x| x as f64 * t - f - 2.0 * ln_factorial(x));
        Evaluated {
            value: s.log_value,
            series: Some(s),
        }
    }

    /// `E_{p_θ}[−ln x!]`.
    fn carrier_entropy_term(&self, theta: &[f64], cfg: &SeriesConfig) -> Evaluated {
        let (t, f) = (theta[0], theta[0].exp());
        let s = cfg.sum(|x| {
            if x < 2 {
                f64::NEG_INFINITY
            } else {
                let lf = ln_factorial(x);
                x as f64 * t - f - lf + lf.ln()
            }
        });
        Evaluated {
            value: -s.value(),
            series: Some(s),
        }
    }

    fn omega_points(&self) -> Vec<Vec<f64>> {
        vec![vec![0.0], vec![1.0], vec![2.0]]
    }
}

/// `e^{−2λ} Σ λ^{2i} / (i!)²`
pub fn energy_series(lambda: f64, cfg: &SeriesConfig) -> f64 {
    let ll = lambda.ln();
    cfg.sum(|i| 2.0 * i as f64 * ll - 2.0 * lambda - 2.0 * ln_factorial(i))
        .value()
}

/// `λ(1 − ln λ) + e^{−λ} Σ λⁱ ln i! / i!`
pub fn entropy_series(lambda: f64, cfg: &SeriesConfig) -> f64 {
    let ll = lambda.ln();
    let s = cfg.sum(|i| {
        if i < 2 {
            f64::NEG_INFINITY
        } else {
            let lf = ln_factorial(i);
            i as f64 * ll - lambda - lf + lf.ln()
        }
    });
    lambda * (1.0 - ll) + s.value()
}

pub(super) fn source_from_named(params: &NamedParams) -> Result<Vec<f64>> {
    let n = Named::new(NAME, params);
    n.only(&["lambda", "rate"])?;
    Ok(vec![n.scalar(&["lambda", "rate"])?])
}

pub(super) fn entry() -> CatalogEntry {
    let descriptor: Family = Arc::new(Poisson);
    CatalogEntry {
        descriptor,
        source_space_doc: "lambda > 0 (intensity)",
        closed_form_energy: Some(Arc::new(|l: &[f64]| {
            positive(NAME, "intensity", l[0])?;
            Ok(energy_series(l[0], &SeriesConfig::default()))
        })),
        closed_form_entropy: Some(Arc::new(|l: &[f64]| {
            positive(NAME, "intensity", l[0])?;
            Ok(entropy_series(l[0], &SeriesConfig::default()))
        })),
        default_source: vec![1.0],
        default_grid: vec![vec![0.5], vec![1.0], vec![2.0], vec![5.0], vec![12.0]],
    }
}
