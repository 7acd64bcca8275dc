//! Module and array power: NOCT cell temperature, linear irradiance scaling
//! with a temperature coefficient, and inverter/derating losses on the AC
//! side.

use serde::{Deserialize, Serialize};

use crate::irradiance::SiteConfig;
use crate::{check_closed, ParamError};

/// Irradiance at standard test conditions, W/m2.
pub const STC_IRRADIANCE: f64 = 1000.0;
/// Cell temperature at standard test conditions, °C.
pub const STC_TEMPERATURE: f64 = 25.0;
/// NOCT rating irradiance, W/m2.
pub const NOCT_IRRADIANCE: f64 = 800.0;
/// NOCT rating ambient temperature, °C.
pub const NOCT_AMBIENT: f64 = 20.0;

/// Datasheet constants of one module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PanelSpec {
    /// Nameplate power at STC, W.
    pub rated_power: f64,
    /// Module area, m2.
    pub area: f64,
    /// Power temperature coefficient, 1/°C.
    pub temp_coefficient: f64,
    /// Nominal operating cell temperature, °C.
    pub noct: f64,
    /// Rear-to-front efficiency ratio; ignored for monofacial arrays.
    pub bifaciality: f64,
}

impl Default for PanelSpec {
    /// A 462 W bifacial module.
    fn default() -> Self {
        Self {
            rated_power: 462.0,
            area: 2.2,
            temp_coefficient: -0.0035,
            noct: 45.0,
            bifaciality: 0.70,
        }
    }
}

impl PanelSpec {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.rated_power > 0.0 && self.rated_power.is_finite()) {
            return Err(ParamError::out_of_range("rated_power", self.rated_power, "(0, inf) W"));
        }
        if !(self.area > 0.0 && self.area.is_finite()) {
            return Err(ParamError::out_of_range("area", self.area, "(0, inf) m2"));
        }
        check_closed("temp_coefficient", self.temp_coefficient, -0.01, 0.0, "[-0.01, 0] 1/°C")?;
        check_closed("noct", self.noct, 40.0, 50.0, "[40, 50] °C")?;
        check_closed("bifaciality", self.bifaciality, 0.0, 1.0, "[0, 1]")
    }
}

/// Balance-of-system losses between DC array and AC bus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SystemParams {
    pub inverter_efficiency: f64,
    pub derating: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            inverter_efficiency: 0.96,
            derating: 0.90,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [("inverter_efficiency", self.inverter_efficiency), ("derating", self.derating)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(ParamError::out_of_range(name, v, "(0, 1]"));
            }
        }
        Ok(())
    }

    /// Combined AC conversion factor.
    pub fn ac_factor(&self) -> f64 {
        self.inverter_efficiency * self.derating
    }
}

/// Panel count and layout of one array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    pub n_pv: u64,
    pub n_rows: u64,
    pub site: SiteConfig,
}

impl ArrayConfig {
    pub fn new(n_pv: u64, n_rows: u64, site: SiteConfig) -> Result<Self, ParamError> {
        let config = Self { n_pv, n_rows, site };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.n_rows == 0 {
            return Err(ParamError::Invalid("n_rows must be at least 1".into()));
        }
        self.site.validate()
    }

    /// Panels per row; a partial column still takes a full column footprint.
    pub fn n_columns(&self) -> u64 {
        self.n_pv.div_ceil(self.n_rows.max(1))
    }

    /// Nameplate DC capacity, MW.
    pub fn capacity_mw(&self, panel: &PanelSpec) -> f64 {
        self.n_pv as f64 * panel.rated_power / 1e6
    }
}

/// Cell temperature from the NOCT model, °C.
pub fn cell_temperature(t_amb: f64, irradiance: f64, spec: &PanelSpec) -> f64 {
    t_amb + (spec.noct - NOCT_AMBIENT) / NOCT_IRRADIANCE * irradiance
}

/// DC output of one module, W; never negative.
pub fn panel_dc_power(irradiance: f64, t_cell: f64, spec: &PanelSpec) -> f64 {
    let p = spec.rated_power
        * (irradiance / STC_IRRADIANCE)
        * (1.0 + spec.temp_coefficient * (t_cell - STC_TEMPERATURE));
    p.max(0.0)
}

/// AC output of `n_pv` modules each producing `dc_per_panel` W, in MW.
pub fn array_ac_power(dc_per_panel: f64, n_pv: u64, params: &SystemParams) -> f64 {
    params.ac_factor() * (dc_per_panel * n_pv as f64) / 1e6
}

/// AC output of a single module, MW, at given irradiance and ambient temperature.
pub fn panel_ac_power(irradiance: f64, t_amb: f64, spec: &PanelSpec, params: &SystemParams) -> f64 {
    let t_cell = cell_temperature(t_amb, irradiance, spec);
    array_ac_power(panel_dc_power(irradiance, t_cell, spec), 1, params)
}
