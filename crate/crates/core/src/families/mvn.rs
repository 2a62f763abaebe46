use std::f64::consts::{E, PI};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{invalid, CatalogEntry, Named, NamedParams};
use crate::error::{Error, Result};
use crate::expfam::{ExpFamily, Family, Support};

const NAME: &str = "mvn";

/// Multivariate normal densities on `ℝ^d`, source parameter `(μ, Σ)` with
/// `Σ` flattened row-major.
///
/// `t(x) = (x, −½ x xᵀ)`, `θ = (Σ⁻¹μ, Σ⁻¹)`,
/// `F(θ) = ½ θ_vᵀ θ_M⁻¹ θ_v − ½ ln|θ_M| + (d/2) ln 2π`.
/// The matrix block is symmetrised before factorisation, so `F` is also
/// defined (and differentiable entry-wise) off the symmetric subspace.
#[derive(Debug, Clone, Copy)]
pub struct MultivariateNormal {
    d: usize,
}

const SYMMETRY_RTOL: f64 = 1e-10;

struct Factored {
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    log_det: f64,
}

fn factor(m: DMatrix<f64>) -> Option<Factored> {
    let chol = m.cholesky()?;
    let log_det = 2.0
        * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|v| v.ln())
            .sum::<f64>();
    log_det.is_finite().then_some(Factored { chol, log_det })
}

impl MultivariateNormal {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "mvn dimension must be at least 1".into(),
            ));
        }
        Ok(MultivariateNormal { d })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn split<'a>(&self, theta: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        theta.split_at(self.d)
    }

    fn symmetric_block(&self, block: &[f64]) -> DMatrix<f64> {
        let m = DMatrix::from_row_slice(self.d, self.d, block);
        (&m + m.transpose()) * 0.5
    }

    fn is_symmetric(&self, block: &[f64]) -> bool {
        let d = self.d;
        let scale = block.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        (0..d).all(|i| {
            (0..i).all(|j| (block[i * d + j] - block[j * d + i]).abs() <= SYMMETRY_RTOL * scale)
        })
    }

    /// Mean and covariance of `p_θ`.
    pub fn moments(&self, theta: &[f64]) -> Option<(DVector<f64>, DMatrix<f64>)> {
        let (v, m) = self.split(theta);
        let f = factor(self.symmetric_block(m))?;
        let mean = f.chol.solve(&DVector::from_column_slice(v));
        Some((mean, f.chol.inverse()))
    }

    fn source_parts(&self, lambda: &[f64]) -> Result<(DVector<f64>, Factored)> {
        let d = self.d;
        if lambda.iter().any(|v| !v.is_finite()) {
            return Err(invalid(NAME, "parameters must be finite"));
        }
        let (mu, cov) = lambda.split_at(d);
        if !self.is_symmetric(cov) {
            return Err(invalid(NAME, "covariance must be symmetric"));
        }
        let f = factor(self.symmetric_block(cov)).ok_or(Error::NotPositiveDefinite)?;
        Ok((DVector::from_column_slice(mu), f))
    }
}

impl ExpFamily for MultivariateNormal {
    fn name(&self) -> &'static str {
        NAME
    }

    fn id(&self) -> String {
        format!("{NAME}(d={})", self.d)
    }

    fn natural_dim(&self) -> usize {
        self.d + self.d * self.d
    }

    fn source_dim(&self) -> usize {
        self.d + self.d * self.d
    }

    fn support(&self) -> Support {
        Support::RealLine { dim: self.d }
    }

    fn log_normalizer(&self, theta: &[f64]) -> f64 {
        let (v, m) = self.split(theta);
        let Some(f) = factor(self.symmetric_block(m)) else {
            return f64::NAN;
        };
        let v = DVector::from_column_slice(v);
        let mean = f.chol.solve(&v);
        0.5 * v.dot(&mean) - 0.5 * f.log_det + 0.5 * self.d as f64 * (2.0 * PI).ln()
    }

    fn grad_log_normalizer(&self, theta: &[f64]) -> Vec<f64> {
        let Some((mean, cov)) = self.moments(theta) else {
            return vec![f64::NAN; self.natural_dim()];
        };
        let second = (cov + &mean * mean.transpose()) * -0.5;
        let mut out = mean.as_slice().to_vec();
        // row-major flattening
        out.extend(second.transpose().as_slice());
        out
    }

    fn in_domain(&self, theta: &[f64]) -> bool {
        if theta.len() != self.natural_dim() || theta.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let (_, m) = self.split(theta);
        self.is_symmetric(m) && factor(self.symmetric_block(m)).is_some()
    }

    fn natural_from_source(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        let (mu, f) = self.source_parts(lambda)?;
        let p = f.chol.inverse();
        let precision = (&p + p.transpose()) * 0.5;
        let mut out = (&precision * mu).as_slice().to_vec();
        out.extend(precision.transpose().as_slice());
        Ok(out)
    }

    fn source_log_density(&self, lambda: &[f64], x: &[f64]) -> f64 {
        let Ok((mu, f)) = self.source_parts(lambda) else {
            return f64::NAN;
        };
        let z = DVector::from_column_slice(x) - mu;
        let w = f.chol.solve(&z);
        -0.5 * self.d as f64 * (2.0 * PI).ln() - 0.5 * f.log_det - 0.5 * z.dot(&w)
    }

    fn sufficient_stat(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        for xi in x {
            for xj in x {
                out.push(-0.5 * xi * xj);
            }
        }
        out
    }

    fn natural_dot_stat(&self, theta: &[f64], x: &[f64]) -> f64 {
        let d = self.d;
        let (v, m) = self.split(theta);
        let mut lin = 0.0;
        let mut quad = 0.0;
        for i in 0..d {
            lin += v[i] * x[i];
            let row = &m[i * d..(i + 1) * d];
            quad += x[i] * row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
        lin - 0.5 * quad
    }

    fn omega_points(&self) -> Vec<Vec<f64>> {
        let zero = vec![0.0; self.d];
        let mut e1 = zero.clone();
        e1[0] = 1.0;
        let minus_e1: Vec<f64> = e1.iter().map(|v| -v).collect();
        vec![zero, e1, minus_e1]
    }
}

pub(super) fn source_from_named(params: &NamedParams) -> Result<(usize, Vec<f64>)> {
    let n = Named::new(NAME, params);
    n.only(&["mu", "cov", "sigma"])?;
    let mu = n.list(&["mu"])?;
    let cov = n.list(&["cov", "sigma"])?;
    let d = mu.len();
    if d == 0 || cov.len() != d * d {
        return Err(invalid(
            NAME,
            format!("mu has {d} entries so cov needs {} (row-major)", d * d),
        ));
    }
    let mut coords = mu;
    coords.extend(cov);
    Ok((d, coords))
}

fn log_det_of_source(d: usize, lambda: &[f64]) -> Result<f64> {
    let fam = MultivariateNormal::new(d)?;
    Ok(fam.source_parts(lambda)?.1.log_det)
}

/// Source parameter `(μ, Σ)` flattened.
pub fn source_coords(mu: &[f64], cov: &DMatrix<f64>) -> Vec<f64> {
    let mut out = mu.to_vec();
    out.extend(cov.transpose().as_slice());
    out
}

fn default_grid(d: usize) -> Vec<Vec<f64>> {
    let id = DMatrix::<f64>::identity(d, d);
    let equi = |rho: f64, scale: f64| {
        DMatrix::from_fn(d, d, |i, j| if i == j { scale } else { rho * scale })
    };
    let diag = |a: f64, b: f64| {
        DMatrix::from_fn(d, d, |i, j| {
            if i != j {
                0.0
            } else if i % 2 == 0 {
                a
            } else {
                b
            }
        })
    };
    let alt: Vec<f64> = (0..d)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let e1: Vec<f64> = (0..d).map(|i| if i == 0 { 0.5 } else { 0.2 }).collect();
    let last: Vec<f64> = (0..d)
        .map(|i| if i == 0 { -1.0 } else { 0.5 * i as f64 })
        .collect();
    vec![
        source_coords(&vec![0.0; d], &id),
        source_coords(&alt, &diag(2.0, 1.0)),
        source_coords(&e1, &equi(0.3, 0.8)),
        source_coords(&last, &diag(1.5, 0.7)),
        source_coords(&vec![0.0; d], &equi(0.6, 1.2)),
    ]
}

pub(super) fn entry(d: usize) -> Result<CatalogEntry> {
    let family = MultivariateNormal::new(d)?;
    let descriptor: Family = Arc::new(family);
    let df = d as f64;
    let mut default_source = vec![0.0; d];
    default_source.extend(DMatrix::<f64>::identity(d, d).as_slice());
    Ok(CatalogEntry {
        descriptor,
        source_space_doc: "mu in R^d, cov symmetric positive definite (row-major d*d)",
        closed_form_energy: Some(Arc::new(move |l: &[f64]| {
            let log_det = log_det_of_source(d, l)?;
            Ok((-0.5 * df * PI.ln() - df * 2f64.ln() - 0.5 * log_det).exp())
        })),
        closed_form_entropy: Some(Arc::new(move |l: &[f64]| {
            let log_det = log_det_of_source(d, l)?;
            Ok(0.5 * (df * (2.0 * PI * E).ln() + log_det))
        })),
        default_source,
        default_grid: default_grid(d),
    })
}
