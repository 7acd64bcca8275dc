//! Desk-scale fixtures shared by the integration targets.
#![allow(dead_code)]

use pvsizing_core::weather::{synthesize_clear_sky_year, ClearSkyParams};
use pvsizing_core::{
    DispatchParams, LoadSeries, PanelSpec, PlaneOrientation, PlantModel, Scenario, SiteConfig, SystemParams,
    Technology, WeatherSeries,
};

pub const DETROIT_LAT: f64 = 42.357;

pub fn year(latitude: f64, cloudiness: f64, seed: u64) -> WeatherSeries {
    synthesize_clear_sky_year(
        latitude,
        &ClearSkyParams {
            cloudiness,
            ..ClearSkyParams::default()
        },
        seed,
    )
    .unwrap()
}

/// `hours` consecutive records of `weather` starting on `day` (1-based).
pub fn slice(weather: &WeatherSeries, day: usize, hours: usize) -> WeatherSeries {
    let r = (day - 1) * 24..(day - 1) * 24 + hours;
    WeatherSeries::new(
        weather.location(),
        weather.label(),
        weather.timestamps()[r.clone()].to_vec(),
        weather.ghi()[r.clone()].to_vec(),
        weather.dni()[r.clone()].to_vec(),
        weather.dhi()[r.clone()].to_vec(),
        weather.t_amb()[r].to_vec(),
    )
    .unwrap()
}

/// One week of campus-style demand: a midday block above `cap`, low
/// shoulders, and two late-evening hours above `cap` on alternate days.
pub fn week_load(midday_mw: f64, evening_mw: f64) -> LoadSeries {
    LoadSeries::new(
        (0..168)
            .map(|t| {
                let (day, hour) = (t / 24, t % 24);
                match hour {
                    12..=15 => midday_mw,
                    22 | 23 if day % 2 == 0 => evening_mw,
                    8..=11 | 16..=18 => 0.75,
                    _ => 0.6,
                }
            })
            .collect(),
    )
    .unwrap()
}

pub fn model(technology: Technology, cap: f64) -> PlantModel {
    PlantModel {
        technology,
        site: SiteConfig::new(0.3, 1.0, PlaneOrientation::south_facing(technology.default_tilt()).unwrap()).unwrap(),
        panel: PanelSpec::default(),
        system: SystemParams::default(),
        dispatch: DispatchParams::new(cap).unwrap(),
        n_rows: 20,
    }
}

/// The three optimizer fixtures: (label, scenario).
pub fn optimizer_fixtures() -> Vec<(&'static str, Scenario)> {
    let cloudy = year(DETROIT_LAT, 0.3, 21);
    vec![
        (
            "january-bifacial",
            Scenario::new(model(Technology::Bifacial, 0.8), slice(&cloudy, 8, 168), week_load(1.0, 1.0)).unwrap(),
        ),
        (
            "april-monofacial",
            Scenario::new(model(Technology::Monofacial, 0.8), slice(&cloudy, 105, 168), week_load(1.05, 0.95)).unwrap(),
        ),
        (
            "july-bifacial",
            Scenario::new(model(Technology::Bifacial, 0.8), slice(&cloudy, 201, 168), week_load(1.1, 0.9)).unwrap(),
        ),
    ]
}
