//! Sizing of grid-connected monofacial and bifacial PV plants.
//!
//! The pipeline runs hourly: sun position, plane-of-array transposition for
//! the front (and rear) face, module temperature and power, then dispatch
//! against the measured load with a capped grid purchase. The panel count is
//! chosen by the Whale Optimization Algorithm to minimize the loss of power
//! supply probability, and the sized plant is scored by CO2 reduction,
//! levelized cost and land footprint.

mod error;

pub mod dispatch;
pub mod irradiance;
pub mod metrics;
pub mod pv;
pub mod scenario;
pub mod solar;
pub mod weather;
pub mod woa;

pub use error::ParamError;
pub(crate) use error::check_closed;

pub use dispatch::{DispatchError, DispatchParams, DispatchResult, EnergyTotals, HourDispatch};
pub use irradiance::{EffectiveIrradiance, PlaneIrradiance, SiteConfig, Technology, TransposedSeries};
pub use metrics::{
    EconomicParams, EmissionParams, LcoeEnergyBasis, MetricsError, MetricsReport, PlantArea, Replacement,
};
pub use pv::{ArrayConfig, PanelSpec, SystemParams};
pub use scenario::{PlantModel, Scenario, ScenarioError};
pub use solar::{PlaneOrientation, SolarPosition, TimestampLabel};
pub use weather::{ClearSkyParams, DataError, LoadSeries, Location, WeatherHour, WeatherSchema, WeatherSeries};
pub use woa::{ConvergencePoint, SizingOutcome, SweepTable, SwarmSettings, WoaError, WoaParams};
