//! Informational energy, Onicescu correlation, Cauchy-Schwarz and Hölder
//! divergences for densities of exponential families, in closed form, with
//! a brute-force quadrature oracle to check them against.

pub mod error;
pub mod expfam;
pub mod families;
pub mod measures;
pub mod oracle;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use expfam::{
    check_combination, to_natural, Density, ExpFamily, Family, Mixture, NaturalParam, SourceParam,
    Support,
};
pub use measures::{MeasureReport, Method};
pub use oracle::{OracleResult, QuadratureConfig};
