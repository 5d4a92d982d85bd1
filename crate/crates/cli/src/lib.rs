//! Subcommand implementations for the `wrist` binary. Each command writes
//! its files into an output directory and returns what it wrote, so the
//! same code drives the binary and the test suites.

pub mod commands;
pub mod format;
pub mod loopfile;
pub mod svg;

use std::path::PathBuf;

use thiserror::Error;
use wrist_core::config::ConfigError;
use wrist_core::experiments::ExperimentError;
use wrist_core::hysteresis::HysteresisError;
use wrist_core::kinematics::KinematicsError;

pub use commands::{
    run_fit, run_gripper, run_sweep, run_trace, run_validate, GripperArgs, Outcome, SweepArgs,
    TraceArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Degenerate(_) => 4,
            CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<HysteresisError> for CliError {
    fn from(e: HysteresisError) -> Self {
        match e {
            HysteresisError::DegenerateData(m) => CliError::Degenerate(m.to_string()),
            HysteresisError::InvalidParams(m) => CliError::Config(m.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Infeasible(m) => CliError::Infeasible(m),
            ExperimentError::Kinematics(KinematicsError::Infeasible { miss }) => {
                CliError::Infeasible(format!("target missed by {miss:e} m"))
            }
            other => CliError::Config(other.to_string()),
        }
    }
}
