//! `infoenergy`: compute informational energies, correlations, Cauchy-Schwarz
//! and Hölder divergences, entropies and mixture energies for the catalog
//! families, verify closed forms against quadrature, and print the
//! entropy/energy comparison table.
//!
//! Exit status: 0 success, 1 usage or input error, 2 a natural-parameter
//! domain condition failed, 3 the quadrature oracle did not converge,
//! 4 `verify` found a comparison outside tolerance.

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod commands;
mod config;
mod output;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(infoenergy::Error),
}

impl From<infoenergy::Error> for CliError {
    fn from(e: infoenergy::Error) -> Self {
        CliError::Library(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Library(infoenergy::Error::DomainViolation(_)) => 2,
            CliError::Library(infoenergy::Error::NotConverged { .. }) => 3,
            CliError::Library(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        use infoenergy::Error::*;
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Library(e) => match e {
                InvalidSourceParam { .. } => "InvalidSourceParam",
                FamilyMismatch { .. } => "FamilyMismatch",
                DomainViolation(_) => "DomainViolation",
                NotPositiveDefinite => "NotPositiveDefinite",
                CarrierNotZero(_) => "CarrierNotZero",
                DimensionMismatch { .. } => "DimensionMismatch",
                OutsideSupport(_) => "OutsideSupport",
                InvalidMixture(_) => "InvalidMixture",
                InvalidArgument(_) => "InvalidArgument",
                NotConverged { .. } => "NotConverged",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Library(e) => e.to_string(),
        }
    }
}

const VERIFY_FAILED: u8 = 4;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let wants_json = command_format(&cli.command) == args::Format::Json;
    match commands::run(&cli.command) {
        Ok(out) => {
            let text = out.report.render(out.common.output);
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            if out.failed {
                ExitCode::from(VERIFY_FAILED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            if wants_json {
                let doc = serde_json::json!({
                    "error": { "kind": e.kind(), "message": e.message() },
                    "valid": false,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("plain data")
                );
            }
            ExitCode::from(e.code())
        }
    }
}

fn command_format(c: &args::Command) -> args::Format {
    use args::Command::*;
    match c {
        Energy(a) | Entropy(a) => a.common.output,
        Cross(a) | Rho(a) | Csd(a) | Jensen(a) => a.common.output,
        Holder(a) => a.pair.common.output,
        Mixture(a) => a.common.output,
        Verify(a) => a.common.output,
        Table(c) => c.output,
    }
}
