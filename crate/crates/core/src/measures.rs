//! Closed-form information measures between members of one exponential
//! family.
//!
//! With `J_F(θ₁, θ₂) = ½(F(θ₁) + F(θ₂)) − F((θ₁ + θ₂)/2)` and
//! `E_θ = E_{p_θ}[exp(k(x))]`:
//!
//! * `I(p_θ₁, p_θ₂) = exp(F(θ₁ + θ₂) − F(θ₁) − F(θ₂)) · E_{θ₁+θ₂}`
//! * `I(p_θ) = exp(F(2θ) − 2F(θ)) · E_{2θ}`
//! * `D_CS = J_F(2θ₁, 2θ₂) + ½ log E_{2θ₁} + ½ log E_{2θ₂} − log E_{θ₁+θ₂}`
//! * `ρ = exp(−D_CS)`
//!
//! Every quantity is assembled in the log domain and exponentiated last.
//! When `k ≡ 0` the same quantities are ratios of density values at any
//! support point ω (the `*_omega` functions), and the Hölder divergence is
//! evaluated that way.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expfam::{ensure_same_family, linear_combination, Density, ExpFamily, NaturalParam};
use crate::oracle::{self, OracleResult, QuadratureConfig};
use crate::series::{LatticeSum, SeriesConfig};

pub use crate::expfam::Mixture;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    OmegaTrick,
    Oracle,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_cap_reached: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<usize>,
}

impl Diagnostics {
    fn absorb(&mut self, s: Option<LatticeSum>) {
        if let Some(s) = s {
            self.series_terms = Some(self.series_terms.unwrap_or(0).max(s.terms));
            self.series_cap_reached =
                Some(self.series_cap_reached.unwrap_or(false) || s.cap_reached);
        }
    }
}

/// A computed measure. Failed preconditions are reported as errors, so a
/// report always carries a value and `valid` is always true.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub value: f64,
    pub method: Method,
    pub valid: bool,
    pub diagnostics: Diagnostics,
}

impl MeasureReport {
    fn closed(value: f64, diagnostics: Diagnostics) -> Self {
        MeasureReport {
            value,
            method: Method::ClosedForm,
            valid: true,
            diagnostics,
        }
    }

    fn omega(value: f64, omega: &[f64]) -> Self {
        MeasureReport {
            value,
            method: Method::OmegaTrick,
            valid: true,
            diagnostics: Diagnostics {
                omega: Some(omega.to_vec()),
                ..Diagnostics::default()
            },
        }
    }

    pub fn from_oracle(r: &OracleResult) -> Self {
        MeasureReport {
            value: r.value,
            method: Method::Oracle,
            valid: r.converged,
            diagnostics: Diagnostics {
                quadrature_error: Some(r.error_estimate),
                evaluations: Some(r.evaluations),
                ..Diagnostics::default()
            },
        }
    }
}

fn series_cfg() -> SeriesConfig {
    SeriesConfig::default()
}

/// `Σ cᵢ θᵢ`, failing with `DomainViolation` outside `Θ`.
fn combined(
    family: &dyn ExpFamily,
    thetas: &[&[f64]],
    coeffs: &[f64],
    what: &str,
) -> Result<Vec<f64>> {
    let c = linear_combination(thetas, coeffs);
    if family.in_domain(&c) {
        Ok(c)
    } else {
        Err(Error::DomainViolation(format!(
            "{what} = {c:?} lies outside the natural parameter space of {}",
            family.id()
        )))
    }
}

/// Orders a pair canonically so symmetric measures are bit-for-bit
/// symmetric.
fn ordered<'a>(p: &'a Density, q: &'a Density) -> (&'a Density, &'a Density) {
    let swap = p
        .coords()
        .iter()
        .zip(q.coords())
        .find_map(|(a, b)| match a.total_cmp(b) {
            std::cmp::Ordering::Equal => None,
            o => Some(o == std::cmp::Ordering::Greater),
        })
        .unwrap_or(false);
    if swap {
        (q, p)
    } else {
        (p, q)
    }
}

/// `log I(p, q)`.
fn log_cross_energy(p: &Density, q: &Density, diag: &mut Diagnostics) -> Result<f64> {
    p.same_family(q)?;
    let (p, q) = ordered(p, q);
    let family = p.family().as_ref();
    // θ + θ is exactly 2θ, so I(p, p) and I(p) share one code path
    let label = if p.coords() == q.coords() {
        "2θ"
    } else {
        "θ₁ + θ₂"
    };
    let sum = combined(family, &[p.coords(), q.coords()], &[1.0, 1.0], label)?;
    let carrier = family.log_carrier_expectation(&sum, &series_cfg());
    diag.absorb(carrier.series);
    Ok(family.log_normalizer(&sum)
        - family.log_normalizer(p.coords())
        - family.log_normalizer(q.coords())
        + carrier.value)
}

/// Informational energy `I(p) = ∫ p² dμ`.
pub fn energy(p: &Density) -> Result<MeasureReport> {
    let mut diag = Diagnostics::default();
    let log_i = log_cross_energy(p, p, &mut diag)?;
    Ok(MeasureReport::closed(log_i.exp(), diag))
}

/// Cross informational energy `I(p, q) = ∫ p q dμ`.
pub fn cross_energy(p: &Density, q: &Density) -> Result<MeasureReport> {
    let mut diag = Diagnostics::default();
    let log_i = log_cross_energy(p, q, &mut diag)?;
    Ok(MeasureReport::closed(log_i.exp(), diag))
}

fn log_cs(p: &Density, q: &Density, diag: &mut Diagnostics) -> Result<f64> {
    p.same_family(q)?;
    let (p, q) = ordered(p, q);
    let family = p.family().as_ref();
    let (a, b) = (p.coords(), q.coords());
    let twice_a = combined(family, &[a], &[2.0], "2θ₁")?;
    let twice_b = combined(family, &[b], &[2.0], "2θ₂")?;
    let sum = combined(family, &[a, b], &[1.0, 1.0], "θ₁ + θ₂")?;
    let jensen = 0.5 * (family.log_normalizer(&twice_a) + family.log_normalizer(&twice_b))
        - family.log_normalizer(&sum);
    let cfg = series_cfg();
    let (ea, eb, es) = (
        family.log_carrier_expectation(&twice_a, &cfg),
        family.log_carrier_expectation(&twice_b, &cfg),
        family.log_carrier_expectation(&sum, &cfg),
    );
    for e in [ea, eb, es] {
        diag.absorb(e.series);
    }
    let d = jensen + 0.5 * (ea.value + eb.value) - es.value;
    // nonnegative up to rounding
    Ok(d.max(0.0))
}

/// Cauchy-Schwarz divergence `D_CS(p, q) = −log ρ(p, q)`.
pub fn cauchy_schwarz(p: &Density, q: &Density) -> Result<MeasureReport> {
    let mut diag = Diagnostics::default();
    let d = log_cs(p, q, &mut diag)?;
    Ok(MeasureReport::closed(d, diag))
}

/// Onicescu correlation `ρ(p, q) = I(p, q) / √(I(p) I(q))`.
pub fn correlation(p: &Density, q: &Density) -> Result<MeasureReport> {
    let mut diag = Diagnostics::default();
    let d = log_cs(p, q, &mut diag)?;
    Ok(MeasureReport::closed((-d).exp(), diag))
}

/// Jensen divergence of the log-normalizer,
/// `J_F(θ₁, θ₂) = ½(F(θ₁) + F(θ₂)) − F((θ₁ + θ₂)/2)`.
pub fn jensen_f(
    family: &dyn ExpFamily,
    theta1: &NaturalParam,
    theta2: &NaturalParam,
) -> Result<f64> {
    ensure_same_family(family, theta1.family_id())?;
    ensure_same_family(family, theta2.family_id())?;
    let (a, b) = (theta1.coords(), theta2.coords());
    for t in [a, b] {
        if !family.in_domain(t) {
            return Err(Error::DomainViolation(format!("{t:?} is outside Θ")));
        }
    }
    let mid = combined(family, &[a, b], &[0.5, 0.5], "(θ₁ + θ₂)/2")?;
    Ok(0.5 * (family.log_normalizer(a) + family.log_normalizer(b)) - family.log_normalizer(&mid))
}

fn require_zero_carrier(family: &dyn ExpFamily) -> Result<()> {
    if family.has_zero_carrier() {
        Ok(())
    } else {
        Err(Error::CarrierNotZero(family.id()))
    }
}

/// `log p_θ(ω)`, rejecting points where the density vanishes.
fn log_lik(family: &dyn ExpFamily, theta: &[f64], omega: &[f64]) -> Result<f64> {
    let l = family.log_density(theta, omega);
    if l.is_finite() {
        Ok(l)
    } else {
        Err(Error::OutsideSupport(omega.to_vec()))
    }
}

fn check_omega(family: &dyn ExpFamily, omega: &[f64]) -> Result<()> {
    require_zero_carrier(family)?;
    if family.support().contains(omega) {
        Ok(())
    } else {
        Err(Error::OutsideSupport(omega.to_vec()))
    }
}

/// `I(p_θ) = p_θ(ω)² / p_{2θ}(ω)` for any ω in the support (`k ≡ 0`).
pub fn energy_omega(p: &Density, omega: &[f64]) -> Result<f64> {
    let family = p.family().as_ref();
    check_omega(family, omega)?;
    let twice = combined(family, &[p.coords()], &[2.0], "2θ")?;
    Ok((2.0 * log_lik(family, p.coords(), omega)? - log_lik(family, &twice, omega)?).exp())
}

/// `D_CS = l_{θ₁+θ₂}(ω) − ½(l_{2θ₁}(ω) + l_{2θ₂}(ω))` (`k ≡ 0`).
pub fn cauchy_schwarz_omega(p: &Density, q: &Density, omega: &[f64]) -> Result<f64> {
    p.same_family(q)?;
    let (p, q) = ordered(p, q);
    let family = p.family().as_ref();
    check_omega(family, omega)?;
    let (a, b) = (p.coords(), q.coords());
    let sum = combined(family, &[a, b], &[1.0, 1.0], "θ₁ + θ₂")?;
    let twice_a = combined(family, &[a], &[2.0], "2θ₁")?;
    let twice_b = combined(family, &[b], &[2.0], "2θ₂")?;
    Ok(log_lik(family, &sum, omega)?
        - 0.5 * (log_lik(family, &twice_a, omega)? + log_lik(family, &twice_b, omega)?))
}

/// `ρ = √(p_{2θ₁}(ω) p_{2θ₂}(ω)) / p_{θ₁+θ₂}(ω)` (`k ≡ 0`).
pub fn correlation_omega(p: &Density, q: &Density, omega: &[f64]) -> Result<f64> {
    Ok((-cauchy_schwarz_omega(p, q, omega)?).exp())
}

/// Hölder divergence with conjugate exponents `1/α + 1/β = 1` and power γ,
/// evaluated at the family's first ω point.
pub fn holder(p: &Density, q: &Density, alpha: f64, gamma: f64) -> Result<MeasureReport> {
    let omega = p
        .family()
        .omega_points()
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidArgument("family has no ω points".into()))?;
    holder_at(p, q, alpha, gamma, &omega)
}

/// `D_H^{α,γ}(p, q) = log p_{(γ/α)θ₁ + (γ/β)θ₂}(ω) − (1/α) log p_{γθ₁}(ω) − (1/β) log p_{γθ₂}(ω)`,
/// which equals `−log( ∫p^{γ/α} q^{γ/β} / ((∫p^γ)^{1/α} (∫q^γ)^{1/β}) )` when `k ≡ 0`.
pub fn holder_at(
    p: &Density,
    q: &Density,
    alpha: f64,
    gamma: f64,
    omega: &[f64],
) -> Result<MeasureReport> {
    p.same_family(q)?;
    let family = p.family().as_ref();
    check_omega(family, omega)?;
    let beta = conjugate(alpha, gamma)?;
    let (a, b) = (p.coords(), q.coords());
    let mix = combined(
        family,
        &[a, b],
        &[gamma / alpha, gamma / beta],
        "(γ/α)θ₁ + (γ/β)θ₂",
    )?;
    let scaled_a = combined(family, &[a], &[gamma], "γθ₁")?;
    let scaled_b = combined(family, &[b], &[gamma], "γθ₂")?;
    let value = log_lik(family, &mix, omega)?
        - log_lik(family, &scaled_a, omega)? / alpha
        - log_lik(family, &scaled_b, omega)? / beta;
    Ok(MeasureReport::omega(value, omega))
}

fn conjugate(alpha: f64, gamma: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Hölder exponent alpha must exceed 1, got {alpha}"
        )));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    Ok(alpha / (alpha - 1.0))
}

/// Hölder divergence by quadrature,
/// `−log ∫p^{γ/α} q^{γ/β} + (1/α) log ∫p^γ + (1/β) log ∫q^γ`.
/// This is the only path for families with a nonzero carrier.
pub fn holder_oracle(
    p: &Density,
    q: &Density,
    alpha: f64,
    gamma: f64,
    cfg: &QuadratureConfig,
) -> Result<MeasureReport> {
    p.same_family(q)?;
    let beta = conjugate(alpha, gamma)?;
    let cross = oracle::integrate_power_product(p, gamma / alpha, q, gamma / beta, cfg)?;
    let pg = oracle::integrate_power_product(p, gamma, p, 0.0, cfg)?;
    let qg = oracle::integrate_power_product(q, gamma, q, 0.0, cfg)?;
    let value = -cross.value.ln() + pg.value.ln() / alpha + qg.value.ln() / beta;
    let error = cross.error_estimate / cross.value
        + pg.error_estimate / (alpha * pg.value)
        + qg.error_estimate / (beta * qg.value);
    let mut report = MeasureReport::from_oracle(&OracleResult {
        value,
        error_estimate: error,
        evaluations: cross.evaluations + pg.evaluations + qg.evaluations,
        converged: cross.converged && pg.converged && qg.converged,
    });
    report.valid = report.valid && value.is_finite();
    Ok(report)
}

/// Shannon entropy `H(p_θ) = F(θ) − ⟨θ, ∇F(θ)⟩ − E_{p_θ}[k(x)]`.
pub fn shannon_entropy(p: &Density) -> Result<MeasureReport> {
    let family = p.family().as_ref();
    let theta = p.coords();
    let eta = family.grad_log_normalizer(theta);
    let k = family.carrier_entropy_term(theta, &series_cfg());
    let mut diag = Diagnostics::default();
    diag.absorb(k.series);
    let h = family.log_normalizer(theta) - crate::expfam::dot(theta, &eta) - k.value;
    Ok(MeasureReport::closed(h, diag))
}

/// The same entropy written with the convex conjugate,
/// `H = −F*(η) − E[k]` with `F*(η) = ⟨θ, η⟩ − F(θ)` at `η = ∇F(θ)`.
pub fn shannon_entropy_legendre(p: &Density) -> Result<f64> {
    let family = p.family().as_ref();
    let theta = p.coords();
    let eta = family.grad_log_normalizer(theta);
    let conjugate = crate::expfam::dot(theta, &eta) - family.log_normalizer(theta);
    Ok(-conjugate - family.carrier_entropy_term(theta, &series_cfg()).value)
}

/// Rényi entropy of order two, `−log I(p)`.
pub fn renyi2(p: &Density) -> Result<f64> {
    Ok(0.0 - energy(p)?.value.ln())
}

/// Vajda's quadratic entropy, `1 − I(p)`.
pub fn vajda2(p: &Density) -> Result<f64> {
    Ok(1.0 - energy(p)?.value)
}

/// `J_I(p, q) = ½(I(p) + I(q)) − I((p + q)/2) = ¼ ∫ (p − q)² dμ`.
pub fn energy_jensen_divergence(p: &Density, q: &Density) -> Result<MeasureReport> {
    p.same_family(q)?;
    let ip = energy(p)?;
    let iq = energy(q)?;
    let ipq = cross_energy(p, q)?;
    let mut diag = Diagnostics::default();
    for r in [&ip, &iq, &ipq] {
        if let Some(t) = r.diagnostics.series_terms {
            diag.series_terms = Some(diag.series_terms.unwrap_or(0).max(t));
        }
    }
    let value = 0.25 * (ip.value + iq.value - 2.0 * ipq.value);
    Ok(MeasureReport::closed(value.max(0.0), diag))
}

/// `I(m) = Σᵢ Σⱼ wᵢ wⱼ I(pᵢ, pⱼ)`.
pub fn mixture_energy(m: &Mixture) -> Result<MeasureReport> {
    let (w, c) = (m.weights(), m.components());
    let mut diag = Diagnostics::default();
    let mut total = 0.0;
    for i in 0..c.len() {
        for j in i..c.len() {
            let log_i = log_cross_energy(&c[i], &c[j], &mut diag).map_err(|e| match e {
                Error::DomainViolation(msg) => {
                    Error::DomainViolation(format!("components ({i}, {j}): {msg}"))
                }
                other => other,
            })?;
            let mult = if i == j { 1.0 } else { 2.0 };
            total += mult * w[i] * w[j] * log_i.exp();
        }
    }
    Ok(MeasureReport::closed(total, diag))
}

/// Margins of `H(p) + ½I(p) ≥ 1 − log 2` and `H×(p:q) ≥ 1 − √(I(p)I(q))`,
/// the cross-entropy taken from the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub entropy: f64,
    pub energy_p: f64,
    pub energy_q: f64,
    pub cross_entropy: f64,
    pub entropy_energy_margin: f64,
    pub cross_entropy_margin: f64,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.entropy_energy_margin >= 0.0 && self.cross_entropy_margin >= 0.0
    }
}

pub fn bound_checks(p: &Density, q: &Density, cfg: &QuadratureConfig) -> Result<BoundReport> {
    p.same_family(q)?;
    let entropy = shannon_entropy(p)?.value;
    let energy_p = energy(p)?.value;
    let energy_q = energy(q)?.value;
    let cross_entropy = oracle::cross_entropy_integral(p, q, cfg)?.value;
    Ok(BoundReport {
        entropy,
        energy_p,
        energy_q,
        cross_entropy,
        entropy_energy_margin: entropy + 0.5 * energy_p - (1.0 - std::f64::consts::LN_2),
        cross_entropy_margin: cross_entropy - (1.0 - (energy_p * energy_q).sqrt()),
    })
}
