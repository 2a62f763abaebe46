//! Exponential families in canonical form
//! `p_θ(x) = exp(⟨θ, t(x)⟩ − F(θ) + k(x))`.
//!
//! A family is described by an implementation of [`ExpFamily`]. Parameters
//! are plain coordinate vectors tagged with the identifier of the family they
//! belong to; matrix-valued blocks (multivariate normal) are flattened
//! row-major.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{LatticeSum, SeriesConfig};

/// Shared handle to a family descriptor.
pub type Family = Arc<dyn ExpFamily>;

/// Support of the densities of a family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Support {
    /// `ℝ^dim`, Lebesgue measure.
    RealLine { dim: usize },
    /// `[lower, ∞)` when `closed`, `(lower, ∞)` otherwise.
    HalfLine { lower: f64, closed: bool },
    /// The open interval `(lower, upper)`.
    Interval { lower: f64, upper: f64 },
    /// `{0, 1, 2, …}`, counting measure.
    NonNegativeIntegers,
}

impl Support {
    pub fn dim(&self) -> usize {
        match *self {
            Support::RealLine { dim } => dim,
            _ => 1,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Support::NonNegativeIntegers)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let v = x[0];
        match *self {
            Support::RealLine { .. } => true,
            Support::HalfLine { lower, closed } => {
                if closed {
                    v >= lower
                } else {
                    v > lower
                }
            }
            Support::Interval { lower, upper } => v > lower && v < upper,
            Support::NonNegativeIntegers => v >= 0.0 && v.fract() == 0.0,
        }
    }
}

/// A value computed either exactly or by a truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    pub series: Option<LatticeSum>,
}

impl Evaluated {
    pub fn exact(value: f64) -> Self {
        Evaluated {
            value,
            series: None,
        }
    }
}

/// Canonical decomposition of an exponential family.
///
/// The log-normalizer `F`, its gradient and the carrier expectations are the
/// ingredients of every closed form; `sufficient_stat` and `carrier` are what
/// the quadrature oracle integrates.
pub trait ExpFamily: fmt::Debug + Send + Sync {
    /// Stable string identifier of the family kind ("normal", "pareto", …).
    fn name(&self) -> &'static str;

    /// Identifier of this particular family. Families constructed with a
    /// fixed shape (Pareto scale, MVN dimension) extend the name.
    fn id(&self) -> String {
        self.name().to_owned()
    }

    fn natural_dim(&self) -> usize;

    fn source_dim(&self) -> usize;

    fn support(&self) -> Support;

    /// `F(θ)`.
    fn log_normalizer(&self, theta: &[f64]) -> f64;

    /// `∇F(θ)`, the moment parameter `η`.
    fn grad_log_normalizer(&self, theta: &[f64]) -> Vec<f64>;

    /// Membership test for the open convex natural parameter space `Θ`.
    fn in_domain(&self, theta: &[f64]) -> bool;

    /// `θ(λ)`; fails with `InvalidSourceParam` when `λ ∉ Λ`.
    fn natural_from_source(&self, lambda: &[f64]) -> Result<Vec<f64>>;

    /// Log density written directly in source coordinates.
    fn source_log_density(&self, lambda: &[f64], x: &[f64]) -> f64;

    /// `t(x)`.
    fn sufficient_stat(&self, x: &[f64]) -> Vec<f64>;

    /// `⟨θ, t(x)⟩`.
    fn natural_dot_stat(&self, theta: &[f64], x: &[f64]) -> f64 {
        dot(theta, &self.sufficient_stat(x))
    }

    /// `t(upper − gap)` for families with a bounded support, evaluated
    /// without forming `upper − gap` where precision matters.
    fn sufficient_stat_from_upper(&self, gap: f64) -> Vec<f64> {
        match self.support() {
            Support::Interval { upper, .. } => self.sufficient_stat(&[upper - gap]),
            _ => self.sufficient_stat(&[f64::NAN]),
        }
    }

    /// `k(x)`.
    fn carrier(&self, _x: &[f64]) -> f64 {
        0.0
    }

    fn has_zero_carrier(&self) -> bool {
        true
    }

    /// `log E_{p_θ}[exp(k(x))]`; zero when `k ≡ 0`.
    fn log_carrier_expectation(&self, _theta: &[f64], _cfg: &SeriesConfig) -> Evaluated {
        Evaluated::exact(0.0)
    }

    /// `E_{p_θ}[exp(k(x))]`.
    fn carrier_expectation(&self, theta: &[f64], cfg: &SeriesConfig) -> Evaluated {
        let e = self.log_carrier_expectation(theta, cfg);
        Evaluated {
            value: e.value.exp(),
            series: e.series,
        }
    }

    /// `E_{p_θ}[k(x)]`; zero when `k ≡ 0`.
    fn carrier_entropy_term(&self, _theta: &[f64], _cfg: &SeriesConfig) -> Evaluated {
        Evaluated::exact(0.0)
    }

    /// Distinguished support points used by the likelihood-ratio formulas.
    fn omega_points(&self) -> Vec<Vec<f64>>;

    /// `log p_θ(x)`, `−∞` outside the support.
    fn log_density(&self, theta: &[f64], x: &[f64]) -> f64 {
        if !self.support().contains(x) {
            return f64::NEG_INFINITY;
        }
        self.natural_dot_stat(theta, x) - self.log_normalizer(theta) + self.carrier(x)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Σ cᵢ θᵢ`, coordinate-wise.
pub fn linear_combination(thetas: &[&[f64]], coeffs: &[f64]) -> Vec<f64> {
    let n = thetas.first().map_or(0, |t| t.len());
    let mut out = vec![0.0; n];
    for (theta, &c) in thetas.iter().zip(coeffs) {
        for (o, &v) in out.iter_mut().zip(theta.iter()) {
            *o += c * v;
        }
    }
    out
}

/// Natural parameter `θ ∈ Θ` of a specific family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaturalParam {
    family_id: String,
    coords: Vec<f64>,
}

impl NaturalParam {
    pub fn new(family: &dyn ExpFamily, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != family.natural_dim() {
            return Err(Error::DimensionMismatch {
                expected: family.natural_dim(),
                got: coords.len(),
            });
        }
        if !family.in_domain(&coords) {
            return Err(Error::DomainViolation(format!(
                "{coords:?} is not a natural parameter of {}",
                family.id()
            )));
        }
        Ok(NaturalParam {
            family_id: family.id(),
            coords,
        })
    }

    pub fn family_id(&self) -> &str {
        &self.family_id
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Source parameter `λ ∈ Λ` of a specific family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceParam {
    family_id: String,
    coords: Vec<f64>,
}

impl SourceParam {
    pub fn new(family: &dyn ExpFamily, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != family.source_dim() {
            return Err(Error::InvalidSourceParam {
                family: family.id(),
                reason: format!(
                    "expected {} coordinates, got {}",
                    family.source_dim(),
                    coords.len()
                ),
            });
        }
        family.natural_from_source(&coords)?;
        Ok(SourceParam {
            family_id: family.id(),
            coords,
        })
    }

    pub fn family_id(&self) -> &str {
        &self.family_id
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Maps a source parameter to its natural parameter.
pub fn to_natural(family: &dyn ExpFamily, lambda: &SourceParam) -> Result<NaturalParam> {
    ensure_same_family(family, lambda.family_id())?;
    let theta = family.natural_from_source(lambda.coords())?;
    NaturalParam::new(family, theta)
}

pub(crate) fn ensure_same_family(family: &dyn ExpFamily, id: &str) -> Result<()> {
    let fid = family.id();
    if fid != id {
        return Err(Error::FamilyMismatch {
            left: fid,
            right: id.to_owned(),
        });
    }
    Ok(())
}

/// Tests whether `Σ coeffs[i]·thetas[i]` lies in the natural parameter space.
pub fn check_combination(
    family: &dyn ExpFamily,
    thetas: &[&NaturalParam],
    coeffs: &[f64],
) -> Result<bool> {
    if thetas.len() != coeffs.len() {
        return Err(Error::InvalidArgument(format!(
            "{} parameters but {} coefficients",
            thetas.len(),
            coeffs.len()
        )));
    }
    for t in thetas {
        ensure_same_family(family, t.family_id())?;
    }
    let coords: Vec<&[f64]> = thetas.iter().map(|t| t.coords()).collect();
    Ok(family.in_domain(&linear_combination(&coords, coeffs)))
}

/// A member `p_θ` of a family.
#[derive(Debug, Clone)]
pub struct Density {
    family: Family,
    theta: NaturalParam,
}

impl Density {
    pub fn new(family: Family, theta: NaturalParam) -> Result<Self> {
        ensure_same_family(family.as_ref(), theta.family_id())?;
        Ok(Density { family, theta })
    }

    pub fn from_source(family: Family, lambda: &[f64]) -> Result<Self> {
        let source = SourceParam::new(family.as_ref(), lambda.to_vec())?;
        let theta = to_natural(family.as_ref(), &source)?;
        Ok(Density { family, theta })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn theta(&self) -> &NaturalParam {
        &self.theta
    }

    pub fn coords(&self) -> &[f64] {
        self.theta.coords()
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        self.family.log_density(self.coords(), x)
    }

    pub fn same_family(&self, other: &Density) -> Result<()> {
        ensure_same_family(self.family.as_ref(), other.theta.family_id())
    }
}

/// Finite mixture `Σ wᵢ pᵢ` of densities of one family.
#[derive(Debug, Clone)]
pub struct Mixture {
    weights: Vec<f64>,
    components: Vec<Density>,
}

impl Mixture {
    pub const WEIGHT_SUM_TOL: f64 = 1e-12;

    pub fn new(weights: Vec<f64>, components: Vec<Density>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidMixture("no components".into()));
        }
        if weights.len() != components.len() {
            return Err(Error::InvalidMixture(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMixture(format!(
                "weights must be nonnegative: {weights:?}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > Self::WEIGHT_SUM_TOL {
            return Err(Error::InvalidMixture(format!(
                "weights sum to {total}, not 1"
            )));
        }
        for c in &components[1..] {
            components[0].same_family(c)?;
        }
        Ok(Mixture {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Density] {
        &self.components
    }

    pub fn family(&self) -> &Family {
        self.components[0].family()
    }
}

/// Finite-difference steps and tolerances of the family invariant checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantTolerances {
    /// Central-difference step relative to `max(1, |θᵢ|)`.
    pub fd_relative_step: f64,
    pub gradient_rtol: f64,
    pub normalization_rtol: f64,
    pub mean_rtol: f64,
}

impl Default for InvariantTolerances {
    fn default() -> Self {
        InvariantTolerances {
            fd_relative_step: 1e-5,
            gradient_rtol: 1e-5,
            normalization_rtol: 1e-7,
            mean_rtol: 1e-6,
        }
    }
}

/// Central-difference approximation of `∇F(θ)`.
pub fn finite_difference_gradient(
    family: &dyn ExpFamily,
    theta: &[f64],
    tol: &InvariantTolerances,
) -> Vec<f64> {
    let mut work = theta.to_vec();
    (0..theta.len())
        .map(|i| {
            let h = tol.fd_relative_step * theta[i].abs().max(1.0);
            work[i] = theta[i] + h;
            let fp = family.log_normalizer(&work);
            work[i] = theta[i] - h;
            let fm = family.log_normalizer(&work);
            work[i] = theta[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}
