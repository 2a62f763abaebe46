//! Brute-force reference values by adaptive quadrature (continuous
//! supports) or truncated lattice sums (counting measure).
//!
//! The oracle only sees the sufficient statistic, the carrier and the
//! support of a family. Normalizing constants are integrated numerically as
//! well, so no closed-form ingredient (`F`, `∇F`, carrier expectations)
//! enters any result here.

mod domain;
mod quadrature;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expfam::{dot, Density, ExpFamily, Mixture, Support};
use crate::series::find_mode;

use domain::{Engine, Integral, Location};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfiniteTransform {
    /// `x = lo + e^u` followed by a rational map of `u`.
    LogSubstitution,
    /// `x = lo + s/(1 − s)`.
    RationalMap,
}

impl std::str::FromStr for InfiniteTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log_substitution" | "log" => Ok(InfiniteTransform::LogSubstitution),
            "rational_map" | "rational" => Ok(InfiniteTransform::RationalMap),
            other => Err(Error::InvalidArgument(format!(
                "unknown transform {other:?} (log_substitution | rational_map)"
            ))),
        }
    }
}

/// Accuracy controls. The transform applies to half-line supports; the real
/// line always uses the rational map and bounded intervals an
/// endpoint-avoiding exponential map towards each end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub transform: InfiniteTransform,
    pub series_term_ratio_cutoff: f64,
    pub series_max_terms: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            transform: InfiniteTransform::LogSubstitution,
            series_term_ratio_cutoff: 1e-15,
            series_max_terms: 1_000_000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.series_term_ratio_cutoff > 0.0
            && self.max_subdivisions > 0
            && self.series_max_terms > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "quadrature tolerances and limits must be positive: {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Which expectation [`moment_expectation`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moment {
    /// `E[t(x)]`, one result per coordinate.
    SufficientStat,
    /// `E[exp(k(x))]`
    ExpCarrier,
    /// `E[k(x)]`
    Carrier,
}

/// Share of the tolerance given to each term of a composite estimate.
const SHARE: f64 = 0.25;
/// Normalizing constants are integrated this much tighter than the target.
const NORMALIZER_SHARE: f64 = 0.01;

/// A density with its normalizing constant integrated numerically.
struct Prepared<'a> {
    family: &'a dyn ExpFamily,
    theta: &'a [f64],
    log_z: f64,
    log_z_error: f64,
    evaluations: usize,
    converged: bool,
}

fn unnormalized(family: &dyn ExpFamily, theta: &[f64], loc: Location<'_>) -> f64 {
    match loc {
        Location::Point(x) => {
            if !family.support().contains(x) {
                return f64::NEG_INFINITY;
            }
            family.natural_dot_stat(theta, x) + family.carrier(x)
        }
        Location::BelowUpper(gap) => {
            let Support::Interval { lower, upper } = family.support() else {
                return f64::NEG_INFINITY;
            };
            if !(gap > 0.0 && gap < upper - lower) {
                return f64::NEG_INFINITY;
            }
            dot(theta, &family.sufficient_stat_from_upper(gap)) + family.carrier(&[upper - gap])
        }
    }
}

fn stat_at(family: &dyn ExpFamily, loc: Location<'_>) -> Vec<f64> {
    match loc {
        Location::Point(x) => family.sufficient_stat(x),
        Location::BelowUpper(gap) => family.sufficient_stat_from_upper(gap),
    }
}

fn carrier_at(family: &dyn ExpFamily, loc: Location<'_>) -> f64 {
    match (loc, family.support()) {
        (Location::Point(x), _) => family.carrier(x),
        (Location::BelowUpper(gap), Support::Interval { upper, .. }) => {
            family.carrier(&[upper - gap])
        }
        _ => f64::NAN,
    }
}

/// Modes of the component densities on a lattice support, so a sweep over a
/// multimodal integrand covers every bump.
fn lattice_anchors(parts: &[&Prepared<'_>]) -> Vec<u64> {
    parts
        .iter()
        .filter(|p| p.family.support().is_discrete())
        .map(|p| find_mode(|i| p.log_p(Location::Point(&[i as f64]))))
        .collect()
}

impl Prepared<'_> {
    fn log_p(&self, loc: Location<'_>) -> f64 {
        let u = unnormalized(self.family, self.theta, loc);
        if u == f64::NEG_INFINITY {
            u
        } else {
            u - self.log_z
        }
    }
}

fn prepare<'a>(p: &'a Density, cfg: &QuadratureConfig) -> Result<Prepared<'a>> {
    let family = p.family().as_ref();
    let theta = p.coords();
    let engine = engine(family.support(), cfg)?;
    let r = engine.log_integrate_exp(&|loc| unnormalized(family, theta, loc), NORMALIZER_SHARE);
    if !r.value.is_finite() {
        return Err(Error::NotConverged {
            estimate: r.value,
            error: r.error,
        });
    }
    Ok(Prepared {
        family,
        theta,
        log_z: r.value,
        log_z_error: r.error,
        evaluations: r.evaluations,
        converged: r.error <= cfg.rel_tol * SHARE,
    })
}

fn finish(
    value: f64,
    raw: Integral,
    extra_error: f64,
    parts: &[&Prepared<'_>],
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    let error_estimate = raw.error + extra_error;
    let evaluations = raw.evaluations + parts.iter().map(|p| p.evaluations).sum::<usize>();
    let converged = raw.converged
        && parts.iter().all(|p| p.converged)
        && value.is_finite()
        && error_estimate <= cfg.abs_tol.max(cfg.rel_tol * value.abs());
    if !converged {
        return Err(Error::NotConverged {
            estimate: value,
            error: error_estimate,
        });
    }
    Ok(OracleResult {
        value,
        error_estimate,
        evaluations,
        converged,
    })
}

/// Tensor-product quadrature cost grows exponentially with the dimension.
pub const MAX_DIMENSION: usize = 3;

fn engine(support: Support, cfg: &QuadratureConfig) -> Result<Engine> {
    if support.dim() > MAX_DIMENSION {
        return Err(Error::InvalidArgument(format!(
            "the oracle integrates at most {MAX_DIMENSION} dimensions, got {}",
            support.dim()
        )));
    }
    Ok(Engine::new(support, cfg))
}

fn same_support(p: &Density, q: &Density) -> Result<Support> {
    let (sp, sq) = (p.family().support(), q.family().support());
    if sp != sq {
        return Err(Error::InvalidArgument(format!(
            "supports differ: {sp:?} vs {sq:?}"
        )));
    }
    Ok(sp)
}

/// `log ∫ exp(⟨θ, t(x)⟩ + k(x)) dμ(x)`, the log-normalizer by quadrature.
pub fn log_normalizer(
    family: &dyn ExpFamily,
    theta: &[f64],
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    cfg.validate()?;
    let engine = engine(family.support(), cfg)?;
    let r = engine.log_integrate_exp(&|loc| unnormalized(family, theta, loc), 1.0);
    let converged = r.converged && r.value.is_finite() && r.error <= cfg.rel_tol.max(cfg.abs_tol);
    if !converged {
        return Err(Error::NotConverged {
            estimate: r.value,
            error: r.error,
        });
    }
    Ok(OracleResult {
        value: r.value,
        error_estimate: r.error,
        evaluations: r.evaluations,
        converged,
    })
}

/// `∫ exp(log_density(θ, x)) dμ(x)`; equals one when the family's
/// log-normalizer is right.
pub fn integrate_density(p: &Density, cfg: &QuadratureConfig) -> Result<OracleResult> {
    cfg.validate()?;
    let family = p.family().as_ref();
    let theta = p.coords();
    let engine = engine(family.support(), cfg)?;
    let f = |loc: Location<'_>, lj: f64| match loc {
        Location::Point(x) => (family.log_density(theta, x) + lj).exp(),
        Location::BelowUpper(gap) => {
            let u = unnormalized(family, theta, Location::BelowUpper(gap));
            (u - family.log_normalizer(theta) + lj).exp()
        }
    };
    let raw = engine.integrate(&f, 1.0);
    finish(raw.value, raw, 0.0, &[], cfg)
}

/// `I(p, q) = ∫ p q dμ`.
pub fn integrate_product(p: &Density, q: &Density, cfg: &QuadratureConfig) -> Result<OracleResult> {
    integrate_power_product(p, 1.0, q, 1.0, cfg)
}

/// `∫ p^a q^b dμ`.
pub fn integrate_power_product(
    p: &Density,
    a: f64,
    q: &Density,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    cfg.validate()?;
    let support = same_support(p, q)?;
    let pp = prepare(p, cfg)?;
    let pq = prepare(q, cfg)?;
    let engine = engine(support, cfg)?.anchored(lattice_anchors(&[&pp, &pq]));
    let f = |loc: Location<'_>, lj: f64| {
        let term = |c: f64, d: &Prepared, loc| if c == 0.0 { 0.0 } else { c * d.log_p(loc) };
        let l = term(a, &pp, loc) + term(b, &pq, loc);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            (l + lj).exp()
        }
    };
    let raw = engine.integrate(&f, SHARE);
    let extra = raw.value.abs() * (a.abs() * pp.log_z_error + b.abs() * pq.log_z_error);
    finish(raw.value, raw, extra, &[&pp, &pq], cfg)
}

/// `ρ = I(p, q) / √(I(p) I(q))` from three product integrals, relative
/// errors propagated to first order.
pub fn correlation(p: &Density, q: &Density, cfg: &QuadratureConfig) -> Result<OracleResult> {
    let pq = integrate_product(p, q, cfg)?;
    let pp = integrate_product(p, p, cfg)?;
    let qq = integrate_product(q, q, cfg)?;
    let value = pq.value / (pp.value * qq.value).sqrt();
    let rel = pq.error_estimate / pq.value
        + 0.5 * (pp.error_estimate / pp.value + qq.error_estimate / qq.value);
    Ok(OracleResult {
        value,
        error_estimate: rel * value,
        evaluations: pq.evaluations + pp.evaluations + qq.evaluations,
        converged: pq.converged && pp.converged && qq.converged,
    })
}

/// `D_CS = −log ρ`, with `ρ` from [`correlation`].
pub fn cauchy_schwarz(p: &Density, q: &Density, cfg: &QuadratureConfig) -> Result<OracleResult> {
    let rho = correlation(p, q, cfg)?;
    Ok(OracleResult {
        value: -rho.value.ln(),
        error_estimate: rho.error_estimate / rho.value,
        ..rho
    })
}

/// `J_I(p, q) = ¼ ∫ (p − q)² dμ`.
pub fn energy_jensen_divergence(
    p: &Density,
    q: &Density,
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    let sq = integrate_squared_difference(p, q, cfg)?;
    Ok(OracleResult {
        value: 0.25 * sq.value,
        error_estimate: 0.25 * sq.error_estimate,
        ..sq
    })
}

/// `I(m) = ∫ (Σ wᵢ pᵢ)² dμ`.
pub fn integrate_mixture_square(m: &Mixture, cfg: &QuadratureConfig) -> Result<OracleResult> {
    cfg.validate()?;
    let prepared = m
        .components()
        .iter()
        .map(|c| prepare(c, cfg))
        .collect::<Result<Vec<_>>>()?;
    let weights = m.weights();
    let parts: Vec<&Prepared> = prepared.iter().collect();
    let engine = engine(m.family().support(), cfg)?.anchored(lattice_anchors(&parts));
    let f = |loc: Location<'_>, lj: f64| {
        let dens: f64 = weights
            .iter()
            .zip(&prepared)
            .map(|(w, p)| w * (p.log_p(loc) + 0.5 * lj).exp())
            .sum();
        dens * dens
    };
    let raw = engine.integrate(&f, SHARE);
    let zerr = prepared.iter().map(|p| p.log_z_error).fold(0.0, f64::max);
    finish(raw.value, raw, 2.0 * raw.value.abs() * zerr, &parts, cfg)
}

/// `∫ (p − q)² dμ`.
pub fn integrate_squared_difference(
    p: &Density,
    q: &Density,
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    cfg.validate()?;
    let support = same_support(p, q)?;
    let pp = prepare(p, cfg)?;
    let pq = prepare(q, cfg)?;
    let engine = engine(support, cfg)?.anchored(lattice_anchors(&[&pp, &pq]));
    let f = |loc: Location<'_>, lj: f64| {
        let d = (pp.log_p(loc) + 0.5 * lj).exp() - (pq.log_p(loc) + 0.5 * lj).exp();
        d * d
    };
    let raw = engine.integrate(&f, SHARE);
    // a log-normalizer error δ on p moves the integral by 2δ∫p(p − q), at most
    // 2δ √I(p) √∫(p − q)²
    let energy = |d: &Prepared<'_>| {
        engine
            .integrate(
                &|loc: Location<'_>, lj: f64| (2.0 * d.log_p(loc) + lj).exp(),
                SHARE,
            )
            .value
    };
    let extra = 2.0
        * raw.value.abs().sqrt()
        * (pp.log_z_error * energy(&pp).sqrt() + pq.log_z_error * energy(&pq).sqrt());
    finish(raw.value, raw, extra, &[&pp, &pq], cfg)
}

/// `H(p) = −∫ p log p dμ`, with `0 log 0 = 0`.
pub fn entropy_integral(p: &Density, cfg: &QuadratureConfig) -> Result<OracleResult> {
    cross_entropy_integral(p, p, cfg)
}

/// `H×(p : q) = −∫ p log q dμ`.
pub fn cross_entropy_integral(
    p: &Density,
    q: &Density,
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    cfg.validate()?;
    let support = same_support(p, q)?;
    let pp = prepare(p, cfg)?;
    let pq = prepare(q, cfg)?;
    let engine = engine(support, cfg)?.anchored(lattice_anchors(&[&pp, &pq]));
    let f = |loc: Location<'_>, lj: f64| {
        let lp = pp.log_p(loc);
        if lp == f64::NEG_INFINITY {
            return 0.0;
        }
        -(lp + lj).exp() * pq.log_p(loc)
    };
    let raw = engine.integrate(&f, SHARE);
    let extra = (raw.value.abs() + 1.0) * (pp.log_z_error + pq.log_z_error);
    finish(raw.value, raw, extra, &[&pp, &pq], cfg)
}

/// `E_p[t(x)]`, `E_p[exp(k(x))]` or `E_p[k(x)]`.
pub fn moment_expectation(
    p: &Density,
    which: Moment,
    cfg: &QuadratureConfig,
) -> Result<Vec<OracleResult>> {
    cfg.validate()?;
    let pp = prepare(p, cfg)?;
    let family = pp.family;
    let engine = engine(family.support(), cfg)?.anchored(lattice_anchors(&[&pp]));
    let weighted = |g: &dyn Fn(Location<'_>) -> f64| {
        let f = |loc: Location<'_>, lj: f64| {
            let lp = pp.log_p(loc);
            if lp == f64::NEG_INFINITY {
                return 0.0;
            }
            (lp + lj).exp() * g(loc)
        };
        let raw = engine.integrate(&f, SHARE);
        let extra = raw.value.abs() * pp.log_z_error;
        finish(raw.value, raw, extra, &[&pp], cfg)
    };
    match which {
        Moment::SufficientStat => (0..family.natural_dim())
            .map(|i| weighted(&|loc| stat_at(family, loc)[i]))
            .collect(),
        Moment::ExpCarrier => Ok(vec![weighted(&|loc| carrier_at(family, loc).exp())?]),
        Moment::Carrier => Ok(vec![weighted(&|loc| carrier_at(family, loc))?]),
    }
}
