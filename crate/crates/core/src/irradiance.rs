//! Plane-of-array irradiance for the front face and, on bifacial modules, the
//! rear face.
//!
//! Both faces use isotropic sky and ground view factors, `(1 ± cos β) / 2`.
//! The rear face never sees beam light; its ground-reflected share is scaled
//! by a mounting-height factor that grows linearly to full view at 1.5 m.

use serde::{Deserialize, Serialize};

use crate::solar::{incidence_cosine, solar_position, PlaneOrientation, SolarPosition};
use crate::weather::{WeatherHour, WeatherSeries};
use crate::{check_closed, ParamError};

/// Mounting height at which the rear face sees the full ground view.
pub const FULL_GROUND_VIEW_HEIGHT_M: f64 = 1.5;
/// Rear ground-view fraction left at zero mounting height.
pub const MIN_GROUND_VIEW: f64 = 0.1;

/// Irradiance components on one face, W/m2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlaneIrradiance {
    pub beam: f64,
    pub diffuse: f64,
    pub ground_reflected: f64,
    pub total: f64,
}

impl PlaneIrradiance {
    pub fn new(beam: f64, diffuse: f64, ground_reflected: f64) -> Self {
        Self {
            beam,
            diffuse,
            ground_reflected,
            total: beam + diffuse + ground_reflected,
        }
    }
}

/// Ground and mounting conditions shared by both faces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteConfig {
    pub albedo: f64,
    /// Height of the module above ground, m.
    pub mounting_height: f64,
    pub plane: PlaneOrientation,
}

impl SiteConfig {
    pub fn new(albedo: f64, mounting_height: f64, plane: PlaneOrientation) -> Result<Self, ParamError> {
        let site = Self {
            albedo,
            mounting_height,
            plane,
        };
        site.validate()?;
        Ok(site)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        check_closed("albedo", self.albedo, 0.0, 1.0, "[0, 1]")?;
        check_closed("mounting_height", self.mounting_height, 0.0, f64::MAX, "a height >= 0 m")?;
        self.plane.validate()
    }

    /// Fraction of the ground view left unshaded under the rear face.
    pub fn ground_view_factor(&self) -> f64 {
        (self.mounting_height / FULL_GROUND_VIEW_HEIGHT_M).min(1.0) * (1.0 - MIN_GROUND_VIEW)
            + MIN_GROUND_VIEW
    }
}

/// Front, rear and bifaciality-weighted irradiance, W/m2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EffectiveIrradiance {
    pub front_total: f64,
    pub rear_total: f64,
    pub effective: f64,
}

pub fn front_plane_irradiance(hour: &WeatherHour, position: &SolarPosition, site: &SiteConfig) -> PlaneIrradiance {
    let cos_b = site.plane.tilt.to_radians().cos();
    let beam = if position.is_up() {
        hour.dni * incidence_cosine(position, &site.plane).max(0.0)
    } else {
        0.0
    };
    PlaneIrradiance::new(
        beam,
        hour.dhi * (1.0 + cos_b) / 2.0,
        hour.ghi * site.albedo * (1.0 - cos_b) / 2.0,
    )
}

pub fn rear_plane_irradiance(hour: &WeatherHour, _position: &SolarPosition, site: &SiteConfig) -> PlaneIrradiance {
    let cos_b = site.plane.tilt.to_radians().cos();
    PlaneIrradiance::new(
        0.0,
        hour.dhi * (1.0 - cos_b) / 2.0,
        hour.ghi * site.albedo * (1.0 + cos_b) / 2.0 * site.ground_view_factor(),
    )
}

pub fn check_bifaciality(bifaciality: f64) -> Result<(), ParamError> {
    check_closed("bifaciality", bifaciality, 0.0, 1.0, "[0, 1]")
}

pub fn effective_bifacial_irradiance(
    front: &PlaneIrradiance,
    rear: &PlaneIrradiance,
    bifaciality: f64,
) -> Result<EffectiveIrradiance, ParamError> {
    check_bifaciality(bifaciality)?;
    Ok(EffectiveIrradiance {
        front_total: front.total,
        rear_total: rear.total,
        effective: front.total + bifaciality * rear.total,
    })
}

/// Module technology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Technology {
    Monofacial,
    Bifacial,
}

impl Technology {
    pub fn name(self) -> &'static str {
        match self {
            Technology::Monofacial => "monofacial",
            Technology::Bifacial => "bifacial",
        }
    }

    /// Conventional fixed tilt for the technology.
    pub fn default_tilt(self) -> f64 {
        match self {
            Technology::Monofacial => 25.0,
            Technology::Bifacial => 35.0,
        }
    }
}

impl std::fmt::Display for Technology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Technology {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "monofacial" | "mpv" => Ok(Technology::Monofacial),
            "bifacial" | "bpv" => Ok(Technology::Bifacial),
            other => Err(ParamError::Invalid(format!("unknown technology `{other}`"))),
        }
    }
}

/// Per-hour components for a whole series.
#[derive(Debug, Clone, PartialEq)]
pub struct TransposedSeries {
    pub technology: Technology,
    pub front: Vec<PlaneIrradiance>,
    /// All zero for monofacial modules.
    pub rear: Vec<PlaneIrradiance>,
    pub effective: Vec<EffectiveIrradiance>,
}

impl TransposedSeries {
    pub fn effective_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.effective.iter().map(|e| e.effective)
    }

    pub fn mean_effective(&self) -> f64 {
        self.effective_values().sum::<f64>() / self.effective.len().max(1) as f64
    }

    pub fn max_effective(&self) -> f64 {
        self.effective_values().fold(0.0, f64::max)
    }

    /// Writes front and rear components per hour.
    pub fn write_csv<W: std::io::Write>(&self, weather: &WeatherSeries, writer: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record([
            "timestamp",
            "front_beam_wm2",
            "front_diffuse_wm2",
            "front_reflected_wm2",
            "front_total_wm2",
            "rear_beam_wm2",
            "rear_diffuse_wm2",
            "rear_reflected_wm2",
            "rear_total_wm2",
            "effective_wm2",
        ])?;
        for (t, ((f, r), e)) in self.front.iter().zip(&self.rear).zip(&self.effective).enumerate() {
            out.write_record([
                weather.timestamps()[t].format("%Y-%m-%dT%H:%M").to_string(),
                f.beam.to_string(),
                f.diffuse.to_string(),
                f.ground_reflected.to_string(),
                f.total.to_string(),
                r.beam.to_string(),
                r.diffuse.to_string(),
                r.ground_reflected.to_string(),
                r.total.to_string(),
                e.effective.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Sun position for every hour of the series.
pub fn solar_positions(weather: &WeatherSeries) -> Vec<SolarPosition> {
    let loc = weather.location();
    (0..weather.len())
        .map(|t| solar_position(loc.latitude, loc.longitude, loc.utc_offset_hours, weather.sample_time(t)))
        .collect()
}

/// Transposes every hour onto the configured plane. Monofacial modules only
/// collect the front face, so their effective irradiance is the front total.
pub fn transpose_series(
    weather: &WeatherSeries,
    site: &SiteConfig,
    technology: Technology,
    bifaciality: f64,
) -> Result<TransposedSeries, ParamError> {
    site.validate()?;
    check_bifaciality(bifaciality)?;
    let positions = solar_positions(weather);
    let n = weather.len();
    let mut front = Vec::with_capacity(n);
    let mut rear = Vec::with_capacity(n);
    let mut effective = Vec::with_capacity(n);
    for (hour, pos) in weather.hours().zip(&positions) {
        let f = front_plane_irradiance(&hour, pos, site);
        let r = match technology {
            Technology::Bifacial => rear_plane_irradiance(&hour, pos, site),
            Technology::Monofacial => PlaneIrradiance::default(),
        };
        let phi = match technology {
            Technology::Bifacial => bifaciality,
            Technology::Monofacial => 0.0,
        };
        effective.push(effective_bifacial_irradiance(&f, &r, phi)?);
        front.push(f);
        rear.push(r);
    }
    Ok(TransposedSeries {
        technology,
        front,
        rear,
        effective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solar::position_at_solar_time;
    use crate::weather::{synthesize_clear_sky_year, ClearSkyParams};
    use approx::assert_abs_diff_eq;
    use chrono::NaiveDate;
    use proptest::prelude::*;

    fn hour(ghi: f64, dni: f64, dhi: f64) -> WeatherHour {
        WeatherHour {
            timestamp: NaiveDate::from_ymd_opt(2021, 6, 1).unwrap().and_hms_opt(12, 0, 0).unwrap(),
            ghi,
            dni,
            dhi,
            t_amb: 20.0,
        }
    }

    fn site(tilt: f64, albedo: f64) -> SiteConfig {
        SiteConfig::new(albedo, 1.0, PlaneOrientation::south_facing(tilt).unwrap()).unwrap()
    }

    #[test]
    fn night_is_dark() {
        let pos = position_at_solar_time(42.36, 10.0, 0.5);
        let s = site(35.0, 0.3);
        assert_eq!(front_plane_irradiance(&hour(0.0, 0.0, 0.0), &pos, &s), PlaneIrradiance::default());
        assert_eq!(rear_plane_irradiance(&hour(0.0, 0.0, 0.0), &pos, &s), PlaneIrradiance::default());
    }

    #[test]
    fn horizontal_front_closure() {
        let pos = position_at_solar_time(42.36, 150.0, 11.0);
        let (dni, dhi) = (700.0, 120.0);
        let ghi = dhi + dni * pos.cos_zenith();
        let f = front_plane_irradiance(&hour(ghi, dni, dhi), &pos, &site(0.0, 0.4));
        assert_eq!(f.ground_reflected, 0.0);
        assert_abs_diff_eq!(f.total, dhi + dni * pos.cos_zenith(), epsilon = 1e-9);
        assert_abs_diff_eq!(f.total, ghi, epsilon = 1e-6);
    }

    #[test]
    fn front_components_follow_view_factors() {
        let pos = position_at_solar_time(42.36, 172.0, 12.0);
        let s = site(35.0, 0.3);
        let h = hour(900.0, 800.0, 100.0);
        let f = front_plane_irradiance(&h, &pos, &s);
        let c = 35f64.to_radians().cos();
        assert_abs_diff_eq!(f.beam, 800.0 * incidence_cosine(&pos, &s.plane), epsilon = 1e-9);
        assert_abs_diff_eq!(f.diffuse, 100.0 * (1.0 + c) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.ground_reflected, 900.0 * 0.3 * (1.0 - c) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.total, f.beam + f.diffuse + f.ground_reflected, epsilon = 1e-9);
    }

    #[test]
    fn rear_components() {
        let pos = position_at_solar_time(42.36, 172.0, 12.0);
        let s = site(35.0, 0.3);
        let r = rear_plane_irradiance(&hour(900.0, 800.0, 100.0), &pos, &s);
        let c = 35f64.to_radians().cos();
        // mounting 1.0 m: (1.0 / 1.5) * 0.9 + 0.1 = 0.7
        assert_abs_diff_eq!(s.ground_view_factor(), 0.7, epsilon = 1e-12);
        assert_eq!(r.beam, 0.0);
        assert_abs_diff_eq!(r.diffuse, 100.0 * (1.0 - c) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.ground_reflected, 900.0 * 0.3 * (1.0 + c) / 2.0 * 0.7, epsilon = 1e-12);
    }

    #[test]
    fn ground_view_factor_saturates() {
        let plane = PlaneOrientation::south_facing(35.0).unwrap();
        assert_abs_diff_eq!(SiteConfig::new(0.2, 0.0, plane).unwrap().ground_view_factor(), 0.1);
        assert_abs_diff_eq!(SiteConfig::new(0.2, 1.5, plane).unwrap().ground_view_factor(), 1.0);
        assert_abs_diff_eq!(SiteConfig::new(0.2, 4.0, plane).unwrap().ground_view_factor(), 1.0);
    }

    #[test]
    fn effective_arithmetic() {
        let front = PlaneIrradiance::new(800.0, 150.0, 50.0);
        let rear = PlaneIrradiance::new(0.0, 50.0, 150.0);
        let e = effective_bifacial_irradiance(&front, &rear, 0.7).unwrap();
        assert_abs_diff_eq!(e.effective, 1140.0, epsilon = 1e-9);
        let mono = effective_bifacial_irradiance(&front, &rear, 0.0).unwrap();
        assert_eq!(mono.effective, front.total);
        assert!(effective_bifacial_irradiance(&front, &rear, 1.2).is_err());
        assert!(effective_bifacial_irradiance(&front, &rear, -0.1).is_err());
    }

    #[test]
    fn site_validation() {
        let plane = PlaneOrientation::south_facing(35.0).unwrap();
        assert!(SiteConfig::new(1.1, 1.0, plane).is_err());
        assert!(SiteConfig::new(0.2, -1.0, plane).is_err());
    }

    #[test]
    fn june_beam_exceeds_december() {
        let w = synthesize_clear_sky_year(42.36, &ClearSkyParams::default(), 1).unwrap();
        let s = site(35.0, 0.25);
        let series = transpose_series(&w, &s, Technology::Bifacial, 0.7).unwrap();
        let monthly_beam = |month: u32| {
            let (sum, n) = w
                .timestamps()
                .iter()
                .zip(&series.front)
                .filter(|(ts, _)| chrono::Datelike::month(*ts) == month)
                .fold((0.0, 0usize), |(s, n), (_, f)| (s + f.beam, n + 1));
            sum / n as f64
        };
        assert!(monthly_beam(6) > monthly_beam(12));
    }

    #[test]
    fn technology_parse() {
        assert_eq!("bPV".parse::<Technology>().unwrap(), Technology::Bifacial);
        assert_eq!("monofacial".parse::<Technology>().unwrap(), Technology::Monofacial);
        assert!("trifacial".parse::<Technology>().is_err());
    }

    proptest! {
        #[test]
        fn bifacial_dominates_front(
            lat in -60.0f64..60.0, day in 1.0f64..365.0, hours in 0.0f64..24.0,
            dni in 0.0f64..1000.0, dhi in 0.0f64..400.0,
            tilt in 0.0f64..=90.0, albedo in 0.01f64..=1.0, phi in 0.01f64..=1.0, height in 0.0f64..3.0,
        ) {
            let pos = position_at_solar_time(lat, day, hours);
            let ghi = dhi + dni * pos.cos_zenith().max(0.0);
            let s = SiteConfig::new(albedo, height, PlaneOrientation::south_facing(tilt).unwrap()).unwrap();
            let h = hour(ghi, dni, dhi);
            let f = front_plane_irradiance(&h, &pos, &s);
            let r = rear_plane_irradiance(&h, &pos, &s);
            let e = effective_bifacial_irradiance(&f, &r, phi).unwrap();
            prop_assert!(e.effective >= f.total);
            if ghi > 0.0 {
                prop_assert!(e.effective > f.total);
            }
            prop_assert_eq!(r.beam, 0.0);
            for p in [f, r] {
                prop_assert!(p.beam >= 0.0 && p.diffuse >= 0.0 && p.ground_reflected >= 0.0);
                prop_assert!((p.total - (p.beam + p.diffuse + p.ground_reflected)).abs() < 1e-9);
            }
        }

        #[test]
        fn rear_monotone_in_albedo(ghi in 0.0f64..1100.0, dhi in 0.0f64..400.0, tilt in 0.0f64..=90.0, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let pos = position_at_solar_time(42.0, 100.0, 12.0);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let h = hour(ghi, 100.0, dhi);
            let r_lo = rear_plane_irradiance(&h, &pos, &site(tilt, lo));
            let r_hi = rear_plane_irradiance(&h, &pos, &site(tilt, hi));
            prop_assert!(r_hi.total >= r_lo.total);
        }
    }
}
