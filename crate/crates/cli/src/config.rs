//! Scenario configuration file.

use std::path::{Path, PathBuf};

use pvsizing_core::metrics::{EconomicParams, EmissionParams, LcoeEnergyBasis, Replacement};
use pvsizing_core::weather::{
    load_load_profile_for, load_weather, synthesize_clear_sky_year, synthesize_feeder_load, ClearSkyParams,
};
use pvsizing_core::{
    DispatchParams, LoadSeries, Location, PanelSpec, PlaneOrientation, PlantModel, Scenario, SiteConfig,
    SystemParams, Technology, TimestampLabel, WeatherSchema, WeatherSeries, WoaParams,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Label used in reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub technology: Technology,
    pub data: DataConfig,
    pub location: Location,
    pub site: SiteSection,
    pub panel: PanelSpec,
    pub system: SystemParams,
    pub dispatch: DispatchParams,
    pub economics: EconomicsSection,
    pub emissions: EmissionParams,
    pub report: ReportSection,
    pub woa: WoaParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: None,
            technology: Technology::Bifacial,
            data: DataConfig::default(),
            location: Location::DETROIT,
            site: SiteSection::default(),
            panel: PanelSpec::default(),
            system: SystemParams::default(),
            dispatch: DispatchParams::default(),
            economics: EconomicsSection::default(),
            emissions: EmissionParams::default(),
            report: ReportSection::default(),
            woa: WoaParams::default(),
        }
    }
}

/// Input series. Omitted paths fall back to synthetic data.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weather: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub load: Option<PathBuf>,
    pub timestamp_label: TimestampLabel,
    pub skip_lines: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_rows: Option<usize>,
    pub synthetic: SyntheticData,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticData {
    pub seed: u64,
    pub year: i32,
    pub hours: usize,
    pub transmittance: f64,
    pub cloudiness: f64,
    pub load_mean_mw: f64,
}

impl Default for SyntheticData {
    fn default() -> Self {
        let sky = ClearSkyParams::default();
        Self {
            seed: 7,
            year: sky.year,
            hours: sky.hours,
            transmittance: sky.transmittance,
            cloudiness: sky.cloudiness,
            load_mean_mw: 1.0096,
        }
    }
}

impl SyntheticData {
    pub fn clear_sky(&self, location: &Location) -> ClearSkyParams {
        ClearSkyParams {
            longitude: location.longitude,
            utc_offset_hours: location.utc_offset_hours,
            year: self.year,
            hours: self.hours,
            transmittance: self.transmittance,
            cloudiness: self.cloudiness,
            ..ClearSkyParams::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SiteSection {
    pub albedo: f64,
    /// Height of the module's lower edge above ground, m.
    pub mounting_height: f64,
    pub surface_azimuth: f64,
    pub tilt_monofacial: f64,
    pub tilt_bifacial: f64,
    /// Rows used for the footprint.
    pub n_rows: u64,
}

impl Default for SiteSection {
    fn default() -> Self {
        Self {
            albedo: 0.30,
            mounting_height: 1.0,
            surface_azimuth: 0.0,
            tilt_monofacial: Technology::Monofacial.default_tilt(),
            tilt_bifacial: Technology::Bifacial.default_tilt(),
            n_rows: 100,
        }
    }
}

impl SiteSection {
    pub fn tilt(&self, technology: Technology) -> f64 {
        match technology {
            Technology::Monofacial => self.tilt_monofacial,
            Technology::Bifacial => self.tilt_bifacial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EconomicsSection {
    pub capital_cost_per_panel_monofacial: f64,
    pub capital_cost_per_panel_bifacial: f64,
    pub om_cost_per_panel_year: f64,
    pub discount_rate: f64,
    pub lifetime_years: u32,
    pub inverter_cost_per_mw: f64,
    pub replacements: Vec<Replacement>,
}

impl Default for EconomicsSection {
    fn default() -> Self {
        Self {
            capital_cost_per_panel_monofacial: 480.0,
            capital_cost_per_panel_bifacial: 555.0,
            om_cost_per_panel_year: 10.0,
            discount_rate: 0.05,
            lifetime_years: 25,
            inverter_cost_per_mw: 100_000.0,
            replacements: Vec::new(),
        }
    }
}

impl EconomicsSection {
    pub fn for_technology(&self, technology: Technology) -> EconomicParams {
        EconomicParams {
            capital_cost_per_panel: match technology {
                Technology::Monofacial => self.capital_cost_per_panel_monofacial,
                Technology::Bifacial => self.capital_cost_per_panel_bifacial,
            },
            om_cost_per_panel_year: self.om_cost_per_panel_year,
            discount_rate: self.discount_rate,
            lifetime_years: self.lifetime_years,
            inverter_cost_per_mw: self.inverter_cost_per_mw,
            replacements: self.replacements.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportSection {
    #[serde(alias = "lcoe-energy-basis")]
    pub lcoe_energy_basis: LcoeEnergyBasis,
}

/// A parsed configuration and the directory its relative paths refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub config: ScenarioConfig,
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let config = ScenarioConfig::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { config, base_dir })
    }

    /// Configuration with paths relative to the working directory.
    pub fn in_place(config: ScenarioConfig) -> Self {
        Self {
            config,
            base_dir: PathBuf::new(),
        }
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    /// Weather and load series named by the configuration.
    pub fn load_inputs(&self) -> Result<(WeatherSeries, LoadSeries), CliError> {
        let c = &self.config;
        let weather = match &c.data.weather {
            Some(p) => {
                let path = self.existing(p)?;
                let schema = WeatherSchema {
                    location: c.location,
                    label: c.data.timestamp_label,
                    expected_rows: c.data.expected_rows,
                    skip_lines: c.data.skip_lines,
                };
                load_weather(&path, &schema)?
            }
            None => synthesize_clear_sky_year(
                c.location.latitude,
                &c.data.synthetic.clear_sky(&c.location),
                c.data.synthetic.seed,
            )?,
        };
        let load = match &c.data.load {
            Some(p) => load_load_profile_for(&self.existing(p)?, &weather)?,
            None => synthesize_feeder_load(weather.timestamps(), c.data.synthetic.load_mean_mw, c.data.synthetic.seed)?,
        };
        Ok((weather, load))
    }

    fn existing(&self, p: &Path) -> Result<PathBuf, CliError> {
        let path = self.resolve(p);
        if path.is_file() {
            Ok(path)
        } else {
            Err(CliError::Config(format!("referenced file {} does not exist", path.display())))
        }
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let (weather, load) = self.load_inputs()?;
        self.scenario_with(weather, load)
    }

    pub fn scenario_with(&self, weather: WeatherSeries, load: LoadSeries) -> Result<Scenario, CliError> {
        Ok(Scenario::new(self.config.plant_model()?, weather, load)?)
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.location.validate()?;
        self.plant_model()?.validate()?;
        self.economics.for_technology(self.technology).validate()?;
        self.emissions.validate()?;
        self.woa.validate()?;
        Ok(())
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.technology.name().to_string())
    }

    pub fn plant_model(&self) -> Result<PlantModel, CliError> {
        let plane = PlaneOrientation::new(self.site.tilt(self.technology), self.site.surface_azimuth)?;
        Ok(PlantModel {
            technology: self.technology,
            site: SiteConfig::new(self.site.albedo, self.site.mounting_height, plane)?,
            panel: self.panel,
            system: self.system,
            dispatch: self.dispatch,
            n_rows: self.site.n_rows,
        })
    }

    pub fn economics(&self) -> EconomicParams {
        self.economics.for_technology(self.technology)
    }

    pub fn with_technology(&self, technology: Technology) -> Self {
        Self {
            technology,
            name: None,
            ..self.clone()
        }
    }
}

/// Commented configuration listing every key at its default.
pub const TEMPLATE: &str = r#"# pvsizing scenario configuration. Every key is optional; the values shown
# are the defaults.

# name = "detroit-bifacial"   # label used in reports
technology = "bifacial"        # "monofacial" or "bifacial"

[data]
# Hourly CSV inputs; relative paths are taken from this file's directory.
# Leave them out to use a synthetic clear-sky year and feeder load.
# weather = "weather.csv"      # timestamp,ghi_wm2,dni_wm2,dhi_wm2,tamb_c
# load = "load.csv"            # timestamp,load_mw (or load_kw)
timestamp_label = "interval-end"   # record covers the hour before its stamp; or "interval-start"
skip_lines = 0                 # metadata lines before the header (NSRDB exports: 2)
# expected_rows = 8760

[data.synthetic]
seed = 7
year = 2021
hours = 8760
transmittance = 0.7            # beam transmittance at unit air mass
cloudiness = 0.0               # daily beam attenuation drawn from [0, cloudiness)
load_mean_mw = 1.0096

[location]
latitude = 42.357
longitude = -83.07             # east positive
utc_offset_hours = -5.0        # local standard time of the timestamps

[site]
albedo = 0.3
mounting_height = 1.0          # m
surface_azimuth = 0.0          # degrees, south = 0, west positive
tilt_monofacial = 25.0
tilt_bifacial = 35.0
n_rows = 100                   # rows in the footprint layout

[panel]
rated_power = 462.0            # W at STC
area = 2.2                     # m2
temp_coefficient = -0.0035     # 1/degC
noct = 45.0                    # degC
bifaciality = 0.7              # ignored for monofacial

[system]
inverter_efficiency = 0.96
derating = 0.9

[dispatch]
max_grid_purchase = 1.0        # MW per hour

[economics]
capital_cost_per_panel_monofacial = 480.0   # $ installed
capital_cost_per_panel_bifacial = 555.0     # $ installed
om_cost_per_panel_year = 10.0               # $
discount_rate = 0.05
lifetime_years = 25
inverter_cost_per_mw = 100000.0             # $ per MW DC
replacements = []                           # e.g. [{ year = 13, cost = 250000.0 }]

[emissions]
f_co2 = 0.553                  # tCO2/MWh

[report]
lcoe_energy_basis = "generated"   # or "self-consumed" (generation minus exports)

[woa]
population_size = 30
max_iterations = 100
spiral_constant = 1.0
seed = 1
n_min = 0
n_max = 30000
"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_parses_to_defaults() {
        assert_eq!(ScenarioConfig::parse(TEMPLATE).unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn empty_file_is_default() {
        assert_eq!(ScenarioConfig::parse("").unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn serialized_form_round_trips() {
        let mut c = ScenarioConfig::default();
        c.name = Some("x".into());
        c.data.weather = Some("w.csv".into());
        c.economics.replacements.push(Replacement { year: 12, cost: 1.5e5 });
        assert_eq!(ScenarioConfig::parse(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn partial_sections_keep_other_defaults() {
        let c = ScenarioConfig::parse("[panel]\nbifaciality = 0.8\n[woa]\nseed = 9\n").unwrap();
        assert_eq!(c.panel.bifaciality, 0.8);
        assert_eq!(c.panel.rated_power, 462.0);
        assert_eq!(c.woa.swarm.seed, 9);
        assert_eq!(c.woa.n_max, 30_000);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(ScenarioConfig::parse("[site]\nalbeedo = 0.2\n"), Err(CliError::Config(_))));
        assert!(matches!(ScenarioConfig::parse("[site]\nalbedo = 1.5\n"), Err(CliError::Config(_))));
        assert!(matches!(ScenarioConfig::parse("[woa]\nn_min = 5\nn_max = 2\n"), Err(CliError::Config(_))));
        assert!(matches!(ScenarioConfig::parse("technology = \"trifacial\"\n"), Err(CliError::Config(_))));
    }

    #[test]
    fn kebab_case_basis_key_is_accepted() {
        let c = ScenarioConfig::parse("[report]\nlcoe-energy-basis = \"self-consumed\"\n").unwrap();
        assert_eq!(c.report.lcoe_energy_basis, LcoeEnergyBasis::SelfConsumed);
    }

    #[test]
    fn missing_data_file_is_a_config_error() {
        let mut c = ScenarioConfig::default();
        c.data.weather = Some("/nonexistent/w.csv".into());
        assert!(matches!(LoadedConfig::in_place(c).load_inputs(), Err(CliError::Config(_))));
    }
}
