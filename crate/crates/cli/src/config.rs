use std::fs;
use std::path::Path;

use infoenergy::oracle::{InfiniteTransform, QuadratureConfig};

use crate::args::{Common, Transform};
use crate::CliError;

/// Built-in defaults, then the config file, then command-line flags.
pub fn resolve(common: &Common) -> Result<QuadratureConfig, CliError> {
    let mut cfg = QuadratureConfig::default();
    if let Some(path) = &common.config {
        apply_file(&mut cfg, path)?;
    }
    if let Some(v) = common.abs_tol {
        cfg.abs_tol = v;
    }
    if let Some(v) = common.rel_tol {
        cfg.rel_tol = v;
    }
    if let Some(v) = common.max_subdivisions {
        cfg.max_subdivisions = v;
    }
    if let Some(t) = common.transform {
        cfg.transform = match t {
            Transform::LogSubstitution => InfiniteTransform::LogSubstitution,
            Transform::RationalMap => InfiniteTransform::RationalMap,
        };
    }
    if let Some(v) = common.series_cutoff {
        cfg.series_term_ratio_cutoff = v;
    }
    if let Some(v) = common.series_max_terms {
        cfg.series_max_terms = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply_file(cfg: &mut QuadratureConfig, path: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| CliError::Usage(format!("{}:{}: {msg}", path.display(), n + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| bad(format!("{key}: not a number: {v:?}")))
        };
        let count = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| bad(format!("{key}: not a count: {v:?}")))
        };
        match key {
            "abs_tol" => cfg.abs_tol = num(value)?,
            "rel_tol" => cfg.rel_tol = num(value)?,
            "max_subdivisions" => cfg.max_subdivisions = count(value)?,
            "transform" => cfg.transform = value.parse().map_err(|e| bad(format!("{e}")))?,
            "series_term_ratio_cutoff" | "series_cutoff" => {
                cfg.series_term_ratio_cutoff = num(value)?
            }
            "series_max_terms" => cfg.series_max_terms = count(value)?,
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
    }
    Ok(())
}
