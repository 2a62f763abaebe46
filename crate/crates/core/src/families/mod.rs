//! The concrete families: exponential, normal, multivariate normal,
//! log-normal, Pareto, gamma, beta and Poisson.
//!
//! Each family comes as a [`CatalogEntry`] bundling its descriptor with the
//! textbook energy/entropy expressions, a default parameter and a default
//! verification grid. The textbook expressions are kept apart from the
//! generic closed forms in [`crate::measures`] so the two can be compared.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expfam::{Family, SourceParam};

mod beta;
mod exponential;
mod gamma;
mod lognormal;
mod mvn;
mod normal;
mod pareto;
mod poisson;

pub use beta::{table_literal_energy as beta_table_literal_energy, Beta};
pub use exponential::Exponential;
pub use gamma::Gamma;
pub use lognormal::LogNormal;
pub use mvn::{source_coords as mvn_source_coords, MultivariateNormal};
pub use normal::Normal;
pub use pareto::Pareto;
pub use poisson::{
    energy_series as poisson_energy_series, entropy_series as poisson_entropy_series, Poisson,
};

/// Stable identifiers of the catalog families.
pub const FAMILY_NAMES: [&str; 8] = [
    "exponential",
    "normal",
    "mvn",
    "lognormal",
    "pareto",
    "gamma",
    "beta",
    "poisson",
];

/// A family-specific expression of the source parameter.
pub type SourceFormula = Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync>;

/// Source parameters given by name, each value a scalar or a list.
pub type NamedParams = BTreeMap<String, Vec<f64>>;

#[derive(Clone)]
pub struct CatalogEntry {
    pub descriptor: Family,
    pub source_space_doc: &'static str,
    /// Textbook informational energy in source coordinates.
    pub closed_form_energy: Option<SourceFormula>,
    /// Textbook Shannon entropy in source coordinates.
    pub closed_form_entropy: Option<SourceFormula>,
    pub default_source: Vec<f64>,
    /// At least five source parameters used by verification runs.
    pub default_grid: Vec<Vec<f64>>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("family", &self.descriptor.id())
            .field("source_space_doc", &self.source_space_doc)
            .field("default_source", &self.default_source)
            .finish()
    }
}

impl CatalogEntry {
    pub fn source(&self, coords: Vec<f64>) -> Result<SourceParam> {
        SourceParam::new(self.descriptor.as_ref(), coords)
    }
}

pub fn exponential() -> CatalogEntry {
    exponential::entry()
}

pub fn normal() -> CatalogEntry {
    normal::entry()
}

/// Multivariate normal family on `ℝ^d`.
pub fn mvn(d: usize) -> Result<CatalogEntry> {
    mvn::entry(d)
}

pub fn lognormal() -> CatalogEntry {
    lognormal::entry()
}

/// Pareto family with fixed scale `k`.
pub fn pareto(k: f64) -> Result<CatalogEntry> {
    pareto::entry(k)
}

/// Gamma family with shape α and scale β.
pub fn gamma() -> CatalogEntry {
    gamma::entry()
}

pub fn beta() -> CatalogEntry {
    beta::entry()
}

pub fn poisson() -> CatalogEntry {
    poisson::entry()
}

/// The eight families at their default shapes (Pareto with `k = 1`,
/// bivariate normal).
pub fn default_entries() -> Vec<CatalogEntry> {
    vec![
        exponential(),
        normal(),
        mvn(2).expect("d = 2"),
        lognormal(),
        pareto(1.0).expect("k = 1"),
        gamma(),
        beta(),
        poisson(),
    ]
}

/// Parses `key=value,key=value` where a value is a number or a
/// colon-separated list of numbers (`mu=0:1,cov=1:0:0:1`).
pub fn parse_named(text: &str) -> Result<NamedParams> {
    let mut out = NamedParams::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got {item:?}")))?;
        let values = value
            .split(':')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("{key}: cannot parse {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if out.insert(key.trim().to_owned(), values).is_some() {
            return Err(Error::InvalidArgument(format!("duplicate key {key:?}")));
        }
    }
    Ok(out)
}

pub(crate) struct Named<'a> {
    family: &'static str,
    params: &'a NamedParams,
}

impl<'a> Named<'a> {
    pub(crate) fn new(family: &'static str, params: &'a NamedParams) -> Self {
        Named { family, params }
    }

    fn err(&self, reason: String) -> Error {
        Error::InvalidSourceParam {
            family: self.family.to_owned(),
            reason,
        }
    }

    fn find(&self, keys: &[&str]) -> Option<&'a Vec<f64>> {
        keys.iter().find_map(|k| self.params.get(*k))
    }

    pub(crate) fn list(&self, keys: &[&str]) -> Result<Vec<f64>> {
        self.find(keys)
            .cloned()
            .ok_or_else(|| self.err(format!("missing parameter {}", keys.join("|"))))
    }

    pub(crate) fn scalar(&self, keys: &[&str]) -> Result<f64> {
        let v = self.list(keys)?;
        match v.as_slice() {
            [x] => Ok(*x),
            _ => Err(self.err(format!("{} must be a scalar", keys[0]))),
        }
    }

    pub(crate) fn scalar_or(&self, keys: &[&str], default: f64) -> Result<f64> {
        if self.find(keys).is_some() {
            self.scalar(keys)
        } else {
            Ok(default)
        }
    }

    /// Rejects keys outside `allowed`.
    pub(crate) fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(self.err(format!(
                "unknown parameter {k:?} (expected {})",
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }
}

/// Builds the catalog entry named `name` and the source parameter described
/// by `params`. Shape arguments (Pareto `k`, MVN dimension) are taken from
/// the parameters.
pub fn build(name: &str, params: &NamedParams) -> Result<(CatalogEntry, SourceParam)> {
    let (entry, coords) = match name {
        "exponential" => (exponential(), exponential::source_from_named(params)?),
        "normal" => (normal(), normal::source_from_named(params)?),
        "lognormal" => (lognormal(), lognormal::source_from_named(params)?),
        "gamma" => (gamma(), gamma::source_from_named(params)?),
        "beta" => (beta(), beta::source_from_named(params)?),
        "poisson" => (poisson(), poisson::source_from_named(params)?),
        "pareto" => {
            let (k, coords) = pareto::source_from_named(params)?;
            (pareto(k)?, coords)
        }
        "mvn" => {
            let (d, coords) = mvn::source_from_named(params)?;
            (mvn(d)?, coords)
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown family {other:?} (expected one of {})",
                FAMILY_NAMES.join(", ")
            )))
        }
    };
    let source = entry.source(coords)?;
    Ok((entry, source))
}

/// Catalog entry for `name` at its default shape.
pub fn by_name(name: &str) -> Result<CatalogEntry> {
    default_entries()
        .into_iter()
        .find(|e| e.descriptor.name() == name)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown family {name:?} (expected one of {})",
                FAMILY_NAMES.join(", ")
            ))
        })
}

pub(crate) fn invalid(family: &str, reason: impl Into<String>) -> Error {
    Error::InvalidSourceParam {
        family: family.to_owned(),
        reason: reason.into(),
    }
}

pub(crate) fn positive(family: &str, what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(
            family,
            format!("{what} must be positive and finite, got {v}"),
        ))
    }
}

pub(crate) fn finite(family: &str, what: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(family, format!("{what} must be finite, got {v}")))
    }
}
