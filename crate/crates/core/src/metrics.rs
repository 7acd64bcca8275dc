//! Plant performance indicators: loss of power supply probability, CO2
//! reduction, annualized cost, levelized cost of energy and footprint.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dispatch::{DispatchResult, EnergyTotals};
use crate::pv::{ArrayConfig, PanelSpec};
use crate::ParamError;

/// Square metres per acre.
pub const M2_PER_ACRE: f64 = 4046.856;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("total load energy is zero")]
    ZeroLoad,
    #[error("energy basis for LCOE is zero")]
    ZeroEnergy,
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Unmet fraction of load energy.
pub fn lpsp(result: &DispatchResult) -> Result<f64, MetricsError> {
    lpsp_from_totals(&result.totals)
}

pub fn lpsp_from_totals(totals: &EnergyTotals) -> Result<f64, MetricsError> {
    if !(totals.e_load > 0.0) {
        return Err(MetricsError::ZeroLoad);
    }
    Ok(totals.e_deficit / totals.e_load)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmissionParams {
    /// Grid emission factor, tCO2/MWh.
    pub f_co2: f64,
}

impl Default for EmissionParams {
    /// Michigan grid average.
    fn default() -> Self {
        Self { f_co2: 0.553 }
    }
}

impl EmissionParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        crate::check_closed("f_co2", self.f_co2, 0.0, f64::MAX, "a factor >= 0 tCO2/MWh")
    }
}

/// Avoided emissions in GgCO2/year for `e_sgen` GWh/year of PV energy.
pub fn co2_reduction(e_sgen: f64, params: &EmissionParams) -> f64 {
    // GWh -> MWh is x1000, t -> Gg is /1000.
    e_sgen * 1000.0 * params.f_co2 / 1000.0
}

/// A one-off cost incurred in a given project year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Replacement {
    pub year: u32,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomicParams {
    /// Installed cost per module, $.
    pub capital_cost_per_panel: f64,
    /// Operation and maintenance per module and year, $.
    pub om_cost_per_panel_year: f64,
    pub discount_rate: f64,
    pub lifetime_years: u32,
    /// Inverter cost per MW of nameplate DC capacity, $.
    pub inverter_cost_per_mw: f64,
    #[serde(default)]
    pub replacements: Vec<Replacement>,
}

impl EconomicParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !(0.0..1.0).contains(&self.discount_rate) {
            return Err(ParamError::out_of_range("discount_rate", self.discount_rate, "[0, 1)"));
        }
        if self.lifetime_years == 0 {
            return Err(ParamError::Invalid("lifetime_years must be at least 1".into()));
        }
        for (name, v) in [
            ("capital_cost_per_panel", self.capital_cost_per_panel),
            ("om_cost_per_panel_year", self.om_cost_per_panel_year),
            ("inverter_cost_per_mw", self.inverter_cost_per_mw),
        ] {
            crate::check_closed(name, v, 0.0, f64::MAX, "a cost >= 0")?;
        }
        for r in &self.replacements {
            crate::check_closed("replacement cost", r.cost, 0.0, f64::MAX, "a cost >= 0")?;
            if r.year == 0 || r.year > self.lifetime_years {
                return Err(ParamError::Invalid(format!(
                    "replacement in year {} is outside the {}-year lifetime",
                    r.year, self.lifetime_years
                )));
            }
        }
        Ok(())
    }

    /// Every monetary input multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            capital_cost_per_panel: self.capital_cost_per_panel * k,
            om_cost_per_panel_year: self.om_cost_per_panel_year * k,
            inverter_cost_per_mw: self.inverter_cost_per_mw * k,
            replacements: self
                .replacements
                .iter()
                .map(|r| Replacement {
                    year: r.year,
                    cost: r.cost * k,
                })
                .collect(),
            ..self.clone()
        }
    }
}

/// Capital recovery factor; `1/n` in the zero-rate limit.
pub fn capital_recovery_factor(rate: f64, years: u32) -> f64 {
    let n = f64::from(years);
    if rate == 0.0 {
        return 1.0 / n;
    }
    let growth = (1.0 + rate).powf(n);
    rate * growth / (growth - 1.0)
}

/// Annualized cost of an up-front investment plus discounted one-off
/// replacements, plus a recurring annual cost.
pub fn annualize(capital: f64, annual: f64, replacements: &[Replacement], rate: f64, years: u32) -> f64 {
    let discounted: f64 = replacements
        .iter()
        .map(|r| r.cost / (1.0 + rate).powf(f64::from(r.year)))
        .sum();
    capital_recovery_factor(rate, years) * (capital + discounted) + annual
}

/// Total annualized cost of an array, $/year.
pub fn total_annualized_cost(
    econ: &EconomicParams,
    panel: &PanelSpec,
    config: &ArrayConfig,
) -> Result<f64, MetricsError> {
    econ.validate()?;
    let n = config.n_pv as f64;
    let capital = n * econ.capital_cost_per_panel + config.capacity_mw(panel) * econ.inverter_cost_per_mw;
    let annual = n * econ.om_cost_per_panel_year;
    Ok(annualize(
        capital,
        annual,
        &econ.replacements,
        econ.discount_rate,
        econ.lifetime_years,
    ))
}

/// Which energy divides the annualized cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LcoeEnergyBasis {
    /// All AC energy generated.
    #[default]
    Generated,
    /// Generated energy minus exports.
    SelfConsumed,
}

impl LcoeEnergyBasis {
    pub fn energy(self, totals: &EnergyTotals) -> f64 {
        match self {
            LcoeEnergyBasis::Generated => totals.e_sgen,
            LcoeEnergyBasis::SelfConsumed => totals.e_self_consumed(),
        }
    }
}

/// Levelized cost, $/kWh, from $/year and GWh/year.
pub fn lcoe(tac: f64, e_g: f64) -> Result<f64, MetricsError> {
    if !(e_g > 0.0) {
        return Err(MetricsError::ZeroEnergy);
    }
    Ok(tac / (e_g * 1e6))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantArea {
    pub m2: f64,
    pub acres: f64,
}

/// Land footprint of a tilted array laid out in `n_rows` rows.
pub fn plant_area(spec: &PanelSpec, config: &ArrayConfig) -> Result<PlantArea, MetricsError> {
    config.validate()?;
    let beta = config.site.plane.tilt.to_radians();
    let n = config.n_pv as f64;
    let n_col = config.n_columns() as f64;
    let m2 = spec.area * n * beta.cos() + 3.0 * spec.area * (n - n_col) * beta.sin();
    Ok(PlantArea {
        m2,
        acres: m2 / M2_PER_ACRE,
    })
}

/// Indicators for one sized plant.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub n_pv: u64,
    pub lpsp: f64,
    /// GgCO2/year.
    pub co2ra: f64,
    /// $/year.
    pub tac: f64,
    /// $/kWh; `None` when the plant generates nothing.
    pub lcoe: Option<f64>,
    pub area: PlantArea,
    pub energy: EnergyTotals,
    /// Peak and mean AC output, MW.
    pub peak_power: f64,
    pub mean_power: f64,
}

pub struct MetricsInputs<'a> {
    pub panel: &'a PanelSpec,
    pub config: &'a ArrayConfig,
    pub economics: &'a EconomicParams,
    pub emissions: &'a EmissionParams,
    pub basis: LcoeEnergyBasis,
}

pub fn evaluate(result: &DispatchResult, inputs: &MetricsInputs<'_>) -> Result<MetricsReport, MetricsError> {
    let tac = total_annualized_cost(inputs.economics, inputs.panel, inputs.config)?;
    let e_g = inputs.basis.energy(&result.totals);
    let lcoe = match lcoe(tac, e_g) {
        Ok(v) => Some(v),
        Err(MetricsError::ZeroEnergy) => None,
        Err(e) => return Err(e),
    };
    let peak_power = result.hourly.iter().map(|h| h.p_sgen).fold(0.0, f64::max);
    let mean_power = result.hourly.iter().map(|h| h.p_sgen).sum::<f64>() / result.hourly.len().max(1) as f64;
    Ok(MetricsReport {
        n_pv: inputs.config.n_pv,
        lpsp: lpsp(result)?,
        co2ra: co2_reduction(result.totals.e_sgen, inputs.emissions),
        tac,
        lcoe,
        area: plant_area(inputs.panel, inputs.config)?,
        energy: result.totals,
        peak_power,
        mean_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispatch::{simulate_year, DispatchParams};
    use crate::irradiance::SiteConfig;
    use crate::solar::PlaneOrientation;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn array(n_pv: u64, n_rows: u64, tilt: f64) -> ArrayConfig {
        let site = SiteConfig::new(0.25, 1.0, PlaneOrientation::south_facing(tilt).unwrap()).unwrap();
        ArrayConfig::new(n_pv, n_rows, site).unwrap()
    }

    fn econ() -> EconomicParams {
        EconomicParams {
            capital_cost_per_panel: 300.0,
            om_cost_per_panel_year: 6.0,
            discount_rate: 0.05,
            lifetime_years: 25,
            inverter_cost_per_mw: 80_000.0,
            replacements: vec![Replacement { year: 12, cost: 50_000.0 }],
        }
    }

    #[test]
    fn lpsp_examples() {
        let r = simulate_year(&[2.0, 2.0], &[1.0, 1.0], &DispatchParams::new(0.0).unwrap()).unwrap();
        assert_eq!(lpsp(&r).unwrap(), 0.0);
        let r = simulate_year(&[0.4], &[1.0], &DispatchParams::new(0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(lpsp(&r).unwrap(), 0.6, epsilon = 1e-12);
        let r = simulate_year(&[0.0], &[0.0], &DispatchParams::new(1.0).unwrap()).unwrap();
        assert_eq!(lpsp(&r), Err(MetricsError::ZeroLoad));
    }

    #[test]
    fn co2_examples() {
        let f = EmissionParams::default();
        assert_abs_diff_eq!(co2_reduction(9.897, &f), 5.473041, epsilon = 1e-9);
        assert_abs_diff_eq!(co2_reduction(11.374, &f), 6.289822, epsilon = 1e-9);
        assert_eq!(co2_reduction(0.0, &f), 0.0);
    }

    #[test]
    fn crf_and_tac() {
        // 0.05 * 1.05^25 / (1.05^25 - 1)
        assert_abs_diff_eq!(capital_recovery_factor(0.05, 25), 0.070_952_457_299_229_6, epsilon = 1e-12);
        assert_abs_diff_eq!(annualize(1e6, 1e4, &[], 0.05, 25), 80_952.457_299_229_6, epsilon = 1e-6);
        assert_abs_diff_eq!(annualize(1e6, 0.0, &[], 0.0, 25), 40_000.0, epsilon = 1e-9);
        assert_abs_diff_eq!(annualize(1e6, 500.0, &[], 0.0, 25), 40_500.0, epsilon = 1e-9);
        assert_eq!(annualize(0.0, 0.0, &[], 0.05, 25), 0.0);
        // Tiny rates approach the straight-line limit.
        assert_relative_eq!(capital_recovery_factor(1e-9, 25), 0.04, max_relative = 1e-6);
    }

    #[test]
    fn replacement_is_discounted() {
        let r = [Replacement { year: 10, cost: 1000.0 }];
        let expected = capital_recovery_factor(0.08, 20) * 1000.0 / 1.08f64.powi(10);
        assert_abs_diff_eq!(annualize(0.0, 0.0, &r, 0.08, 20), expected, epsilon = 1e-9);
    }

    #[test]
    fn tac_of_an_array() {
        let e = econ();
        let p = PanelSpec::default();
        let a = array(1000, 10, 35.0);
        let capital = 1000.0 * 300.0 + 0.462 * 80_000.0;
        let expected = capital_recovery_factor(0.05, 25) * (capital + 50_000.0 / 1.05f64.powi(12)) + 6000.0;
        assert_abs_diff_eq!(total_annualized_cost(&e, &p, &a).unwrap(), expected, epsilon = 1e-6);
    }

    #[test]
    fn economic_validation() {
        assert!(econ().validate().is_ok());
        assert!(EconomicParams { discount_rate: 1.0, ..econ() }.validate().is_err());
        assert!(EconomicParams { lifetime_years: 0, ..econ() }.validate().is_err());
        assert!(EconomicParams { capital_cost_per_panel: -1.0, ..econ() }.validate().is_err());
        assert!(EconomicParams {
            replacements: vec![Replacement { year: 30, cost: 1.0 }],
            ..econ()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn lcoe_examples() {
        assert_abs_diff_eq!(lcoe(1000.0, 0.01).unwrap(), 0.1, epsilon = 1e-15);
        assert_eq!(lcoe(1000.0, 0.0), Err(MetricsError::ZeroEnergy));
        assert_abs_diff_eq!(lcoe(2000.0, 0.01).unwrap(), 2.0 * lcoe(1000.0, 0.01).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn area_closed_forms() {
        let p = PanelSpec::default();
        let flat = plant_area(&p, &array(10_924, 100, 0.0)).unwrap();
        assert_eq!(flat.m2, p.area * 10_924.0);
        let single_row = plant_area(&p, &array(10_924, 1, 35.0)).unwrap();
        assert_abs_diff_eq!(single_row.m2, p.area * 10_924.0 * 35f64.to_radians().cos(), epsilon = 1e-9);
    }

    #[test]
    fn area_reference_case() {
        // A_m = 2.2, N = 10924, rows = 100 -> 110 columns, beta = 35:
        // 2.2*10924*cos35 + 3*2.2*10814*sin35
        let p = PanelSpec::default();
        let a = plant_area(&p, &array(10_924, 100, 35.0)).unwrap();
        let b = 35f64.to_radians();
        let expected = 2.2 * 10_924.0 * b.cos() + 3.0 * 2.2 * 10_814.0 * b.sin();
        assert_abs_diff_eq!(a.m2, expected, epsilon = 1e-9);
        assert_abs_diff_eq!(a.acres, expected / 4046.856, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn area_monotone_in_panels(n in 0u64..50_000, extra in 0u64..1000, rows in 1u64..500, tilt in 0.0f64..=90.0) {
            let p = PanelSpec::default();
            let a = plant_area(&p, &array(n, rows, tilt)).unwrap().m2;
            let b = plant_area(&p, &array(n + extra, rows, tilt)).unwrap().m2;
            prop_assert!(b >= a - 1e-9 * a.abs());
        }

        // Increasing tilt trades cos for sin; the footprint only grows while
        // tan(beta) <= 3 (N - N_col) / N.
        #[test]
        fn area_monotone_in_tilt(n in 1u64..50_000, rows in 2u64..500, t1 in 0.0f64..=90.0, t2 in 0.0f64..=90.0) {
            let p = PanelSpec::default();
            let cfg = array(n, rows, 0.0);
            let limit = (3.0 * (n - cfg.n_columns()) as f64 / n as f64).atan().to_degrees();
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assume!(hi <= limit);
            let a = plant_area(&p, &array(n, rows, lo)).unwrap().m2;
            let b = plant_area(&p, &array(n, rows, hi)).unwrap().m2;
            prop_assert!(b >= a - 1e-9 * a.abs());
        }

        #[test]
        fn co2_linear(e in 0.0f64..100.0, k in 0.0f64..10.0) {
            let f = EmissionParams::default();
            prop_assert!((co2_reduction(e * k, &f) - k * co2_reduction(e, &f)).abs() <= 1e-12 * (1.0 + e * k));
        }
    }
}
