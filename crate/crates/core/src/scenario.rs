//! One plant on one site: weather and load bound to a technology, with the
//! per-panel generation profile precomputed so that sizing evaluations only
//! scale and dispatch it.

use thiserror::Error;

use crate::dispatch::{annual_totals, simulate_year, DispatchError, DispatchParams, DispatchResult, EnergyTotals};
use crate::irradiance::{transpose_series, SiteConfig, Technology, TransposedSeries};
use crate::metrics::{self, EconomicParams, EmissionParams, LcoeEnergyBasis, MetricsError, MetricsInputs, MetricsReport};
use crate::pv::{array_ac_power, cell_temperature, panel_dc_power, ArrayConfig, PanelSpec, SystemParams};
use crate::weather::{DataError, LoadSeries, WeatherSeries};
use crate::woa::{optimize, optimize_par, sweep_oracle, SizingOutcome, SweepTable, WoaError, WoaParams};
use crate::ParamError;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Dispatch(#[from] DispatchError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Optimizer(#[from] WoaError),
}

/// Everything about the plant except its size.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantModel {
    pub technology: Technology,
    pub site: SiteConfig,
    pub panel: PanelSpec,
    pub system: SystemParams,
    pub dispatch: DispatchParams,
    /// Rows (strings) used for the footprint.
    pub n_rows: u64,
}

impl PlantModel {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.site.validate()?;
        self.panel.validate()?;
        self.system.validate()?;
        self.dispatch.validate()?;
        if self.n_rows == 0 {
            return Err(ParamError::Invalid("n_rows must be at least 1".into()).into());
        }
        Ok(())
    }

    /// Bifaciality actually applied: zero for monofacial modules.
    pub fn effective_bifaciality(&self) -> f64 {
        match self.technology {
            Technology::Bifacial => self.panel.bifaciality,
            Technology::Monofacial => 0.0,
        }
    }

    pub fn array(&self, n_pv: u64) -> Result<ArrayConfig, ParamError> {
        ArrayConfig::new(n_pv, self.n_rows, self.site)
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    model: PlantModel,
    weather: WeatherSeries,
    load: LoadSeries,
    irradiance: TransposedSeries,
    dc_per_panel: Vec<f64>,
}

impl Scenario {
    pub fn new(model: PlantModel, weather: WeatherSeries, load: LoadSeries) -> Result<Self, ScenarioError> {
        model.validate()?;
        load.check_aligned(&weather)?;
        if !(load.values().iter().sum::<f64>() > 0.0) {
            return Err(MetricsError::ZeroLoad.into());
        }
        let irradiance = transpose_series(&weather, &model.site, model.technology, model.effective_bifaciality())?;
        let dc_per_panel = irradiance
            .effective_values()
            .zip(weather.t_amb())
            .map(|(g, &t_amb)| panel_dc_power(g, cell_temperature(t_amb, g, &model.panel), &model.panel))
            .collect();
        Ok(Self {
            model,
            weather,
            load,
            irradiance,
            dc_per_panel,
        })
    }

    pub fn model(&self) -> &PlantModel {
        &self.model
    }

    pub fn weather(&self) -> &WeatherSeries {
        &self.weather
    }

    pub fn load(&self) -> &LoadSeries {
        &self.load
    }

    pub fn irradiance(&self) -> &TransposedSeries {
        &self.irradiance
    }

    /// DC output of one module per hour, W.
    pub fn dc_per_panel(&self) -> &[f64] {
        &self.dc_per_panel
    }

    pub fn horizon(&self) -> usize {
        self.load.len()
    }

    fn generation_iter(&self, n_pv: u64) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.dc_per_panel
            .iter()
            .map(move |&dc| array_ac_power(dc, n_pv, &self.model.system))
    }

    /// AC output of the array per hour, MW.
    pub fn generation(&self, n_pv: u64) -> Vec<f64> {
        self.generation_iter(n_pv).collect()
    }

    pub fn totals(&self, n_pv: u64) -> EnergyTotals {
        annual_totals(self.generation_iter(n_pv), self.load.values(), &self.model.dispatch)
            .expect("lengths and signs were validated at construction")
    }

    /// Sizing objective: loss of power supply probability at `n_pv` panels.
    pub fn lpsp(&self, n_pv: u64) -> f64 {
        metrics::lpsp_from_totals(&self.totals(n_pv)).expect("load is positive")
    }

    pub fn simulate(&self, n_pv: u64) -> DispatchResult {
        simulate_year(&self.generation(n_pv), self.load.values(), &self.model.dispatch)
            .expect("lengths and signs were validated at construction")
    }

    /// LPSP left when every hour with any PV output is fully served:
    /// the unmet share of load in dark hours.
    pub fn lpsp_floor(&self) -> f64 {
        let cap = self.model.dispatch.max_grid_purchase;
        let dark: f64 = self
            .dc_per_panel
            .iter()
            .zip(self.load.values())
            .filter(|(dc, _)| **dc <= 0.0)
            .map(|(_, l)| (l - cap).max(0.0))
            .sum();
        dark / self.load.values().iter().sum::<f64>()
    }

    pub fn metrics(
        &self,
        n_pv: u64,
        economics: &EconomicParams,
        emissions: &EmissionParams,
        basis: LcoeEnergyBasis,
    ) -> Result<(DispatchResult, MetricsReport), ScenarioError> {
        let result = self.simulate(n_pv);
        let config = self.model.array(n_pv)?;
        let report = metrics::evaluate(
            &result,
            &MetricsInputs {
                panel: &self.model.panel,
                config: &config,
                economics,
                emissions,
                basis,
            },
        )?;
        Ok((result, report))
    }

    pub fn optimize(&self, params: &WoaParams) -> Result<SizingOutcome, ScenarioError> {
        Ok(optimize(params, |n| self.lpsp(n))?)
    }

    /// Parallel fitness evaluation; same outcome as [`Scenario::optimize`].
    pub fn optimize_par(&self, params: &WoaParams) -> Result<SizingOutcome, ScenarioError> {
        Ok(optimize_par(params, |n| self.lpsp(n))?)
    }

    pub fn sweep(&self, n_min: u64, n_max: u64, stride: u64) -> Result<SweepTable, ScenarioError> {
        Ok(sweep_oracle(n_min, n_max, stride, |n| self.lpsp(n))?)
    }
}
