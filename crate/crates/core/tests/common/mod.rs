#![allow(dead_code)]

use infoenergy::families::{self, mvn_source_coords, CatalogEntry};
use infoenergy::Density;
use nalgebra::DMatrix;
use rand::Rng;

pub const FAMILIES: [&str; 8] = [
    "exponential",
    "normal",
    "mvn",
    "lognormal",
    "pareto",
    "gamma",
    "beta",
    "poisson",
];

/// Coordinates of the unit cube consumed by [`source_from_unit`].
pub const UNIT_DIM: usize = 5;

pub fn entry(name: &str) -> CatalogEntry {
    match name {
        "pareto" => families::pareto(1.5).unwrap(),
        "mvn" => families::mvn(2).unwrap(),
        other => families::by_name(other).unwrap(),
    }
}

fn log_uniform(u: f64, lo: f64, hi: f64) -> f64 {
    lo * (hi / lo).powf(u)
}

fn uniform(u: f64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * u
}

/// Maps a point of `[0, 1]^UNIT_DIM` to a source parameter whose doubled
/// natural parameter stays in the domain, so every closed form is defined.
pub fn source_from_unit(name: &str, u: &[f64]) -> Vec<f64> {
    match name {
        "exponential" => vec![log_uniform(u[0], 0.05, 20.0)],
        "normal" => vec![uniform(u[0], -5.0, 5.0), log_uniform(u[1], 0.05, 10.0)],
        "lognormal" => vec![uniform(u[0], -2.0, 2.0), log_uniform(u[1], 0.1, 3.0)],
        "pareto" => vec![log_uniform(u[0], 0.1, 15.0)],
        "gamma" => vec![uniform(u[0], 0.55, 20.0), log_uniform(u[1], 0.1, 10.0)],
        "beta" => vec![uniform(u[0], 0.55, 20.0), uniform(u[1], 0.55, 20.0)],
        "poisson" => vec![log_uniform(u[0], 0.01, 50.0)],
        "mvn" => {
            let l = DMatrix::from_row_slice(
                2,
                2,
                &[
                    log_uniform(u[2], 0.3, 2.0),
                    0.0,
                    uniform(u[4], -1.5, 1.5),
                    log_uniform(u[3], 0.3, 2.0),
                ],
            );
            let cov = &l * l.transpose();
            mvn_source_coords(&[uniform(u[0], -3.0, 3.0), uniform(u[1], -3.0, 3.0)], &cov)
        }
        other => panic!("unknown family {other}"),
    }
}

pub fn density(entry: &CatalogEntry, source: &[f64]) -> Density {
    Density::from_source(entry.descriptor.clone(), source).unwrap()
}

pub fn random_density<R: Rng>(entry: &CatalogEntry, name: &str, rng: &mut R) -> Density {
    let u: Vec<f64> = (0..UNIT_DIM).map(|_| rng.random::<f64>()).collect();
    density(entry, &source_from_unit(name, &u))
}
