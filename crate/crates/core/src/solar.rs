//! Sun position and angle of incidence on a fixed tilted plane.
//!
//! Textbook hourly model: Cooper's declination, the Spencer-style equation of
//! time, and the usual spherical-trigonometry zenith, azimuth and incidence
//! relations. Angles cross the public boundary in degrees.

use chrono::{Datelike, Duration, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::ParamError;

/// Maximum declination reached by Cooper's formula.
pub const MAX_DECLINATION_DEG: f64 = 23.45;

/// Where the sun is, seen from a site at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolarPosition {
    pub declination: f64,
    pub hour_angle: f64,
    pub zenith: f64,
    /// Measured from south, west positive.
    pub azimuth: f64,
    pub elevation: f64,
}

impl SolarPosition {
    /// Sun strictly above the horizon.
    pub fn is_up(&self) -> bool {
        self.elevation > 0.0
    }

    pub fn cos_zenith(&self) -> f64 {
        self.zenith.to_radians().cos()
    }
}

/// Fixed plane orientation: tilt from horizontal and azimuth of the surface
/// normal's horizontal projection (south = 0, west positive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneOrientation {
    pub tilt: f64,
    #[serde(default)]
    pub surface_azimuth: f64,
}

impl PlaneOrientation {
    pub fn new(tilt: f64, surface_azimuth: f64) -> Result<Self, ParamError> {
        let plane = Self {
            tilt,
            surface_azimuth,
        };
        plane.validate()?;
        Ok(plane)
    }

    pub fn south_facing(tilt: f64) -> Result<Self, ParamError> {
        Self::new(tilt, 0.0)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !(0.0..=90.0).contains(&self.tilt) {
            return Err(ParamError::out_of_range("tilt", self.tilt, "[0, 90] degrees"));
        }
        if !self.surface_azimuth.is_finite() {
            return Err(ParamError::out_of_range(
                "surface_azimuth",
                self.surface_azimuth,
                "a finite angle",
            ));
        }
        Ok(())
    }
}

/// Which instant inside an hourly record its timestamp refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimestampLabel {
    /// The record covers `[HH:00, HH+1:00)`; the sun is sampled at HH:30.
    IntervalStart,
    /// The record covers `[HH-1:00, HH:00)`; the sun is sampled at HH-1:30.
    /// Hourly means are taken over the preceding hour unless told otherwise.
    #[default]
    IntervalEnd,
}

impl TimestampLabel {
    /// Mid-point of the hour this timestamp labels.
    pub fn hour_center(self, timestamp: NaiveDateTime) -> NaiveDateTime {
        let floored = timestamp
            .with_minute(0)
            .and_then(|t| t.with_second(0))
            .and_then(|t| t.with_nanosecond(0))
            .unwrap_or(timestamp);
        match self {
            TimestampLabel::IntervalStart => floored + Duration::minutes(30),
            TimestampLabel::IntervalEnd => floored - Duration::minutes(30),
        }
    }
}

/// Cooper's declination for day-of-year `day` (1 = Jan 1), degrees.
pub fn declination(day: f64) -> f64 {
    MAX_DECLINATION_DEG * (360.0 * (284.0 + day) / 365.0).to_radians().sin()
}

/// Equation of time in minutes.
pub fn equation_of_time(day: f64) -> f64 {
    let b = (360.0 * (day - 81.0) / 364.0).to_radians();
    9.87 * (2.0 * b).sin() - 7.53 * b.cos() - 1.5 * b.sin()
}

/// Hour angle for apparent solar time in hours; 15 degrees per hour from noon.
pub fn hour_angle(solar_hours: f64) -> f64 {
    15.0 * (solar_hours - 12.0)
}

/// Apparent solar time (hours) for a local standard clock time.
pub fn solar_time(clock_hours: f64, day: f64, longitude: f64, utc_offset_hours: f64) -> f64 {
    let standard_meridian = 15.0 * utc_offset_hours;
    clock_hours + (4.0 * (longitude - standard_meridian) + equation_of_time(day)) / 60.0
}

/// Sun position for a given latitude, day of year and apparent solar time.
pub fn position_at_solar_time(latitude: f64, day: f64, solar_hours: f64) -> SolarPosition {
    let decl = declination(day);
    let omega = hour_angle(solar_hours);

    let (sin_phi, cos_phi) = latitude.to_radians().sin_cos();
    let (sin_d, cos_d) = decl.to_radians().sin_cos();
    let (sin_w, cos_w) = omega.to_radians().sin_cos();

    let cos_z = (sin_phi * sin_d + cos_phi * cos_d * cos_w).clamp(-1.0, 1.0);
    let zenith = cos_z.acos().to_degrees();
    let azimuth = (sin_w * cos_d)
        .atan2(cos_w * sin_phi * cos_d - sin_d * cos_phi)
        .to_degrees();

    SolarPosition {
        declination: decl,
        hour_angle: omega,
        zenith,
        azimuth,
        elevation: 90.0 - zenith,
    }
}

/// Sun position at `timestamp` (local standard time, no daylight saving).
pub fn solar_position(
    latitude: f64,
    longitude: f64,
    utc_offset_hours: f64,
    timestamp: NaiveDateTime,
) -> SolarPosition {
    let day = f64::from(timestamp.ordinal());
    let clock = f64::from(timestamp.hour())
        + f64::from(timestamp.minute()) / 60.0
        + f64::from(timestamp.second()) / 3600.0;
    let solar = solar_time(clock, day, longitude, utc_offset_hours);
    position_at_solar_time(latitude, day, solar)
}

/// Cosine of the angle of incidence on `plane`; negative when the sun is
/// behind it. Callers clamp at zero for beam irradiance.
pub fn incidence_cosine(position: &SolarPosition, plane: &PlaneOrientation) -> f64 {
    let (sin_z, cos_z) = position.zenith.to_radians().sin_cos();
    let (sin_b, cos_b) = plane.tilt.to_radians().sin_cos();
    let relative_azimuth = (position.azimuth - plane.surface_azimuth).to_radians();
    (cos_z * cos_b + sin_z * sin_b * relative_azimuth.cos()).clamp(-1.0, 1.0)
}
