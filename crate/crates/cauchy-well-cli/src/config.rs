//! Run configuration and the error-to-exit-code contract.
//!
//! Exit codes: 0 success, 2 invalid configuration or I/O trouble, 3 a
//! quadrature stage gave up, 4 the eigensolver failed. Clap's own usage
//! errors also exit with 2, so "bad invocation" is uniformly 2.

use std::fmt;
use std::path::PathBuf;

use cauchy_well_core::eigensolver::EigenError;
use cauchy_well_core::galerkin::{GalerkinError, QuadratureSpec};
use cauchy_well_core::operator::OperatorError;
use cauchy_well_core::specfun::SpecfunError;
use cauchy_well_core::spectrum::SpectrumError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ParityChoice {
    Even,
    Odd,
    Both,
}

impl fmt::Display for ParityChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParityChoice::Even => write!(f, "even"),
            ParityChoice::Odd => write!(f, "odd"),
            ParityChoice::Both => write!(f, "both"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Everything a pipeline run needs to know.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub block_size: usize,
    pub parity: ParityChoice,
    pub levels: usize,
    pub quad: QuadratureSpec,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.block_size == 0 {
            return Err(CliError::Config("block size must be at least 1".into()));
        }
        if self.levels == 0 {
            return Err(CliError::Config(
                "at least one level must be requested".into(),
            ));
        }
        let available = match self.parity {
            ParityChoice::Both => 2 * self.block_size,
            _ => self.block_size,
        };
        if self.levels > available {
            return Err(CliError::Config(format!(
                "{} levels requested but a {}x{} {} run yields at most {}",
                self.levels, self.block_size, self.block_size, self.parity, available
            )));
        }
        if let Some(0) = self.threads {
            return Err(CliError::Config("thread count must be at least 1".into()));
        }
        self.quad.validate()?;
        Ok(())
    }
}

/// CLI-level error carrying its exit code class.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Quadrature(String),
    Eigensolver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Quadrature(_) => 3,
            CliError::Eigensolver(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Io(msg) => write!(f, "i/o failure: {msg}"),
            CliError::Quadrature(msg) => write!(f, "quadrature failure: {msg}"),
            CliError::Eigensolver(msg) => write!(f, "eigensolver failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<GalerkinError> for CliError {
    fn from(e: GalerkinError) -> Self {
        match e {
            GalerkinError::AtElement { .. } => CliError::Quadrature(e.to_string()),
            GalerkinError::Oracle(op) => op.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<OperatorError> for CliError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::Quadrature(_) | OperatorError::OracleDidNotConverge { .. } => {
                CliError::Quadrature(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        match e {
            EigenError::DidNotConverge { .. } => CliError::Eigensolver(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            // These two indicate the computed spectrum itself is wrong, which
            // can only come out of the assembly/solve stages.
            SpectrumError::ParityAlternation { .. } | SpectrumError::NonMonotonic { .. } => {
                CliError::Eigensolver(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SpecfunError> for CliError {
    fn from(e: SpecfunError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
