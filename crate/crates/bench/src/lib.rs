//! Benchmark fixtures.

use pvsizing_core::weather::{synthesize_clear_sky_year, synthesize_feeder_load, ClearSkyParams};
use pvsizing_core::{
    DispatchParams, Location, PanelSpec, PlaneOrientation, PlantModel, Scenario, SiteConfig, SystemParams,
    Technology,
};

/// Default synthetic Detroit year for `technology`.
pub fn detroit_year(technology: Technology) -> Scenario {
    let weather = synthesize_clear_sky_year(Location::DETROIT.latitude, &ClearSkyParams::default(), 7)
        .expect("valid synthetic year");
    let load = synthesize_feeder_load(weather.timestamps(), 1.0096, 7).expect("valid load");
    let model = PlantModel {
        technology,
        site: SiteConfig::new(0.3, 1.0, PlaneOrientation::south_facing(technology.default_tilt()).expect("tilt"))
            .expect("site"),
        panel: PanelSpec::default(),
        system: SystemParams::default(),
        dispatch: DispatchParams::default(),
        n_rows: 100,
    };
    Scenario::new(model, weather, load).expect("consistent scenario")
}
