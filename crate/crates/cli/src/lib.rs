//! Scenario runs behind the `pvsizing` binary: simulate a fixed plant,
//! size one with WOA, or compare monofacial and bifacial plants.

pub mod config;
pub mod report;
pub mod run;
pub mod svg;

use pvsizing_core::{DataError, DispatchError, MetricsError, ParamError, ScenarioError, WoaError};
use thiserror::Error;

pub use config::{LoadedConfig, ScenarioConfig, TEMPLATE};
pub use report::{CompareReport, PlantSummary};
pub use run::{run_compare, run_optimize, run_simulate, OutputOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) | CliError::Output { .. } => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::Param(p) => p.into(),
            e => CliError::Data(e.to_string()),
        }
    }
}

impl From<DispatchError> for CliError {
    fn from(e: DispatchError) -> Self {
        match e {
            DispatchError::InvalidCap(_) => CliError::Config(e.to_string()),
            e => CliError::Data(e.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::ZeroLoad => CliError::Data(e.to_string()),
            MetricsError::ZeroEnergy => CliError::Numerical(e.to_string()),
            MetricsError::Param(p) => p.into(),
        }
    }
}

impl From<WoaError> for CliError {
    fn from(e: WoaError) -> Self {
        match e {
            WoaError::InvalidParams(_) => CliError::Config(e.to_string()),
            WoaError::NonFiniteFitness { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Data(e) => e.into(),
            ScenarioError::Param(e) => e.into(),
            ScenarioError::Dispatch(e) => e.into(),
            ScenarioError::Metrics(e) => e.into(),
            ScenarioError::Optimizer(e) => e.into(),
        }
    }
}
