//! Hourly weather and load series: CSV ingestion, validation and synthetic
//! fixtures.
//!
//! Weather files carry `timestamp,ghi_wm2,dni_wm2,dhi_wm2,tamb_c`; load files
//! carry `timestamp,load_mw` (or `load_kw`). NSRDB exports are accepted too:
//! their `GHI`/`DNI`/`DHI`/`Temperature` columns are renamed and a missing
//! `timestamp` column is rebuilt from `Year,Month,Day,Hour[,Minute]`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Timelike};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::solar::{solar_position, TimestampLabel};
use crate::{check_closed, ParamError};

const TIMESTAMP_FORMATS: [&str; 4] = [
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d %H:%M",
];
const WRITE_FORMAT: &str = "%Y-%m-%dT%H:%M";

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing column `{column}` (found: {found})")]
    MissingColumn { column: &'static str, found: String },
    #[error("data row {row}, column `{column}`: `{value}` is not a number")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("data row {row}, column `{column}`: value {value} is not finite")]
    NonFinite {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("data row {row}, column `{column}`: negative value {value}")]
    Negative {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("data row {row}: unparseable timestamp `{value}`")]
    BadTimestamp { row: usize, value: String },
    #[error("data row {row}: GHI {ghi} W/m2 with zero DNI and DHI")]
    InconsistentComponents { row: usize, ghi: f64 },
    #[error("expected {expected} data rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("no data rows")]
    NoDataRows,
    #[error("column lengths differ: {0}")]
    Ragged(String),
    #[error("load has {load} hours but weather has {weather}")]
    LengthMismatch { weather: usize, load: usize },
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Geographic reference of a series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub latitude: f64,
    /// East positive.
    pub longitude: f64,
    /// Offset of the local standard time used by the timestamps.
    #[serde(default = "default_utc_offset")]
    pub utc_offset_hours: f64,
}

fn default_utc_offset() -> f64 {
    -5.0
}

impl Location {
    /// A university campus in midtown Detroit.
    pub const DETROIT: Location = Location {
        latitude: 42.357,
        longitude: -83.070,
        utc_offset_hours: -5.0,
    };

    pub fn validate(&self) -> Result<(), ParamError> {
        check_closed("latitude", self.latitude, -90.0, 90.0, "[-90, 90] degrees")?;
        check_closed("longitude", self.longitude, -180.0, 180.0, "[-180, 180] degrees")?;
        check_closed("utc_offset_hours", self.utc_offset_hours, -14.0, 14.0, "[-14, 14] hours")
    }
}

impl Default for Location {
    fn default() -> Self {
        Location::DETROIT
    }
}

/// One hour of weather.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherHour {
    pub timestamp: NaiveDateTime,
    pub ghi: f64,
    pub dni: f64,
    pub dhi: f64,
    pub t_amb: f64,
}

/// Validated hourly weather for one horizon. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherSeries {
    location: Location,
    label: TimestampLabel,
    timestamps: Vec<NaiveDateTime>,
    ghi: Vec<f64>,
    dni: Vec<f64>,
    dhi: Vec<f64>,
    t_amb: Vec<f64>,
}

impl WeatherSeries {
    pub fn new(
        location: Location,
        label: TimestampLabel,
        timestamps: Vec<NaiveDateTime>,
        ghi: Vec<f64>,
        dni: Vec<f64>,
        dhi: Vec<f64>,
        t_amb: Vec<f64>,
    ) -> Result<Self, DataError> {
        location.validate()?;
        let n = timestamps.len();
        if n == 0 {
            return Err(DataError::NoDataRows);
        }
        if [ghi.len(), dni.len(), dhi.len(), t_amb.len()]
            .iter()
            .any(|&len| len != n)
        {
            return Err(DataError::Ragged(format!(
                "timestamps {n}, ghi {}, dni {}, dhi {}, t_amb {}",
                ghi.len(),
                dni.len(),
                dhi.len(),
                t_amb.len()
            )));
        }
        for i in 0..n {
            let row = i + 1;
            for (column, value) in [("ghi_wm2", ghi[i]), ("dni_wm2", dni[i]), ("dhi_wm2", dhi[i])] {
                check_irradiance(row, column, value)?;
            }
            if !t_amb[i].is_finite() {
                return Err(DataError::NonFinite {
                    row,
                    column: "tamb_c".into(),
                    value: t_amb[i],
                });
            }
            if dni[i] == 0.0 && dhi[i] == 0.0 && ghi[i] != 0.0 {
                return Err(DataError::InconsistentComponents { row, ghi: ghi[i] });
            }
        }
        Ok(Self {
            location,
            label,
            timestamps,
            ghi,
            dni,
            dhi,
            t_amb,
        })
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn location(&self) -> Location {
        self.location
    }

    pub fn label(&self) -> TimestampLabel {
        self.label
    }

    pub fn timestamps(&self) -> &[NaiveDateTime] {
        &self.timestamps
    }

    pub fn ghi(&self) -> &[f64] {
        &self.ghi
    }

    pub fn dni(&self) -> &[f64] {
        &self.dni
    }

    pub fn dhi(&self) -> &[f64] {
        &self.dhi
    }

    pub fn t_amb(&self) -> &[f64] {
        &self.t_amb
    }

    pub fn hour(&self, t: usize) -> WeatherHour {
        WeatherHour {
            timestamp: self.timestamps[t],
            ghi: self.ghi[t],
            dni: self.dni[t],
            dhi: self.dhi[t],
            t_amb: self.t_amb[t],
        }
    }

    pub fn hours(&self) -> impl ExactSizeIterator<Item = WeatherHour> + '_ {
        (0..self.len()).map(move |t| self.hour(t))
    }

    /// Instant at which the sun is sampled for hour `t`.
    pub fn sample_time(&self, t: usize) -> NaiveDateTime {
        self.label.hour_center(self.timestamps[t])
    }

    /// Same data with a different location or timestamp convention.
    pub fn relocated(&self, location: Location, label: TimestampLabel) -> Result<Self, DataError> {
        location.validate()?;
        Ok(Self {
            location,
            label,
            ..self.clone()
        })
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DataError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["timestamp", "ghi_wm2", "dni_wm2", "dhi_wm2", "tamb_c"])?;
        for h in self.hours() {
            out.write_record([
                h.timestamp.format(WRITE_FORMAT).to_string(),
                h.ghi.to_string(),
                h.dni.to_string(),
                h.dhi.to_string(),
                h.t_amb.to_string(),
            ])?;
        }
        out.flush().map_err(|source| DataError::Io {
            path: PathBuf::from("<writer>"),
            source,
        })?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<(), DataError> {
        let file = File::create(path).map_err(|source| DataError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv(file)
    }
}

fn check_irradiance(row: usize, column: &str, value: f64) -> Result<(), DataError> {
    if !value.is_finite() {
        return Err(DataError::NonFinite {
            row,
            column: column.into(),
            value,
        });
    }
    if value < 0.0 {
        return Err(DataError::Negative {
            row,
            column: column.into(),
            value,
        });
    }
    Ok(())
}

/// How to read a weather file.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherSchema {
    pub location: Location,
    pub label: TimestampLabel,
    /// Reject files whose row count differs.
    pub expected_rows: Option<usize>,
    /// Lines before the header (NSRDB exports carry two metadata lines).
    pub skip_lines: usize,
}

impl Default for WeatherSchema {
    fn default() -> Self {
        Self {
            location: Location::DETROIT,
            label: TimestampLabel::default(),
            expected_rows: None,
            skip_lines: 0,
        }
    }
}

struct Header {
    names: Vec<String>,
}

impl Header {
    fn find(&self, aliases: &[&str]) -> Option<usize> {
        self.names
            .iter()
            .position(|n| aliases.iter().any(|a| n.eq_ignore_ascii_case(a)))
    }

    fn require(&self, column: &'static str, aliases: &[&str]) -> Result<usize, DataError> {
        self.find(aliases).ok_or_else(|| DataError::MissingColumn {
            column,
            found: self.names.join(","),
        })
    }
}

fn open(path: &Path) -> Result<File, DataError> {
    File::open(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_reader<R: Read>(mut reader: R, skip_lines: usize) -> Result<csv::Reader<std::io::Cursor<Vec<u8>>>, DataError> {
    let mut text = Vec::new();
    reader.read_to_end(&mut text).map_err(|source| DataError::Io {
        path: PathBuf::from("<reader>"),
        source,
    })?;
    let mut start = 0;
    for _ in 0..skip_lines {
        match text[start..].iter().position(|&b| b == b'\n') {
            Some(p) => start += p + 1,
            None => {
                start = text.len();
                break;
            }
        }
    }
    text.drain(..start);
    Ok(csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(std::io::Cursor::new(text)))
}

fn parse_number(record: &csv::StringRecord, idx: usize, row: usize, column: &str) -> Result<f64, DataError> {
    let raw = record.get(idx).unwrap_or("");
    raw.parse::<f64>().map_err(|_| DataError::NonNumeric {
        row,
        column: column.to_string(),
        value: raw.to_string(),
    })
}

fn parse_timestamp(raw: &str, row: usize) -> Result<NaiveDateTime, DataError> {
    TIMESTAMP_FORMATS
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(raw, f).ok())
        .ok_or_else(|| DataError::BadTimestamp {
            row,
            value: raw.to_string(),
        })
}

enum TimeColumns {
    Single(usize),
    Split {
        year: usize,
        month: usize,
        day: usize,
        hour: usize,
        minute: Option<usize>,
    },
}

impl TimeColumns {
    fn locate(header: &Header) -> Result<Self, DataError> {
        if let Some(idx) = header.find(&["timestamp", "time", "datetime"]) {
            return Ok(TimeColumns::Single(idx));
        }
        match (
            header.find(&["Year"]),
            header.find(&["Month"]),
            header.find(&["Day"]),
            header.find(&["Hour"]),
        ) {
            (Some(year), Some(month), Some(day), Some(hour)) => Ok(TimeColumns::Split {
                year,
                month,
                day,
                hour,
                minute: header.find(&["Minute"]),
            }),
            _ => Err(DataError::MissingColumn {
                column: "timestamp",
                found: header.names.join(","),
            }),
        }
    }

    fn read(&self, record: &csv::StringRecord, row: usize) -> Result<NaiveDateTime, DataError> {
        match *self {
            TimeColumns::Single(idx) => parse_timestamp(record.get(idx).unwrap_or(""), row),
            TimeColumns::Split {
                year,
                month,
                day,
                hour,
                minute,
            } => {
                let field = |idx: usize| -> Result<u32, DataError> {
                    let raw = record.get(idx).unwrap_or("");
                    raw.parse::<u32>().map_err(|_| DataError::BadTimestamp {
                        row,
                        value: raw.to_string(),
                    })
                };
                let minute = minute.map(field).transpose()?.unwrap_or(0);
                let (y, mo, d, h) = (field(year)?, field(month)?, field(day)?, field(hour)?);
                NaiveDate::from_ymd_opt(y as i32, mo, d)
                    .and_then(|date| date.and_hms_opt(h, minute, 0))
                    .ok_or_else(|| DataError::BadTimestamp {
                        row,
                        value: format!("{y}-{mo}-{d} {h}:{minute}"),
                    })
            }
        }
    }
}

/// Parse a weather CSV from any reader.
pub fn read_weather<R: Read>(reader: R, schema: &WeatherSchema) -> Result<WeatherSeries, DataError> {
    let mut csv = csv_reader(reader, schema.skip_lines)?;
    let header = Header {
        names: csv.headers()?.iter().map(str::to_string).collect(),
    };
    let time = TimeColumns::locate(&header)?;
    let ghi_col = header.require("ghi_wm2", &["ghi_wm2", "ghi"])?;
    let dni_col = header.require("dni_wm2", &["dni_wm2", "dni"])?;
    let dhi_col = header.require("dhi_wm2", &["dhi_wm2", "dhi"])?;
    let (temp_col, kelvin) = match header.find(&["tamb_c", "temperature", "t_amb"]) {
        Some(idx) => (idx, false),
        None => (header.require("tamb_c", &["tamb_k"])?, true),
    };

    let mut timestamps = Vec::new();
    let mut ghi = Vec::new();
    let mut dni = Vec::new();
    let mut dhi = Vec::new();
    let mut t_amb = Vec::new();
    for (i, record) in csv.records().enumerate() {
        let record = record?;
        let row = i + 1;
        timestamps.push(time.read(&record, row)?);
        ghi.push(parse_number(&record, ghi_col, row, "ghi_wm2")?);
        dni.push(parse_number(&record, dni_col, row, "dni_wm2")?);
        dhi.push(parse_number(&record, dhi_col, row, "dhi_wm2")?);
        let t = parse_number(&record, temp_col, row, "tamb_c")?;
        t_amb.push(if kelvin { t - 273.15 } else { t });
    }
    if timestamps.is_empty() {
        return Err(DataError::NoDataRows);
    }
    if let Some(expected) = schema.expected_rows {
        if expected != timestamps.len() {
            return Err(DataError::RowCount {
                expected,
                found: timestamps.len(),
            });
        }
    }
    WeatherSeries::new(schema.location, schema.label, timestamps, ghi, dni, dhi, t_amb)
}

/// Load and validate a weather CSV file.
pub fn load_weather(path: &Path, schema: &WeatherSchema) -> Result<WeatherSeries, DataError> {
    read_weather(open(path)?, schema)
}

/// Hourly demand in MW. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadSeries {
    p_load: Vec<f64>,
}

impl LoadSeries {
    pub fn new(p_load: Vec<f64>) -> Result<Self, DataError> {
        if p_load.is_empty() {
            return Err(DataError::NoDataRows);
        }
        for (i, &v) in p_load.iter().enumerate() {
            if !v.is_finite() {
                return Err(DataError::NonFinite {
                    row: i + 1,
                    column: "load_mw".into(),
                    value: v,
                });
            }
            if v < 0.0 {
                return Err(DataError::Negative {
                    row: i + 1,
                    column: "load_mw".into(),
                    value: v,
                });
            }
        }
        Ok(Self { p_load })
    }

    /// Constant demand over `hours`.
    pub fn constant(mw: f64, hours: usize) -> Result<Self, DataError> {
        Self::new(vec![mw; hours])
    }

    pub fn values(&self) -> &[f64] {
        &self.p_load
    }

    pub fn len(&self) -> usize {
        self.p_load.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_load.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.p_load.iter().sum::<f64>() / self.p_load.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.p_load.iter().copied().fold(0.0, f64::max)
    }

    pub fn check_aligned(&self, weather: &WeatherSeries) -> Result<(), DataError> {
        if self.len() != weather.len() {
            return Err(DataError::LengthMismatch {
                weather: weather.len(),
                load: self.len(),
            });
        }
        Ok(())
    }

    /// Writes `timestamp,load_mw` using the paired weather timestamps.
    pub fn write_csv<W: Write>(&self, timestamps: &[NaiveDateTime], writer: W) -> Result<(), DataError> {
        if timestamps.len() != self.len() {
            return Err(DataError::LengthMismatch {
                weather: timestamps.len(),
                load: self.len(),
            });
        }
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["timestamp", "load_mw"])?;
        for (ts, v) in timestamps.iter().zip(&self.p_load) {
            out.write_record([ts.format(WRITE_FORMAT).to_string(), v.to_string()])?;
        }
        out.flush().map_err(|source| DataError::Io {
            path: PathBuf::from("<writer>"),
            source,
        })?;
        Ok(())
    }
}

pub fn read_load_profile<R: Read>(reader: R) -> Result<LoadSeries, DataError> {
    let mut csv = csv_reader(reader, 0)?;
    let header = Header {
        names: csv.headers()?.iter().map(str::to_string).collect(),
    };
    let (col, scale) = match header.find(&["load_mw"]) {
        Some(idx) => (idx, 1.0),
        None => (header.require("load_mw", &["load_kw"])?, 1e-3),
    };
    let mut values = Vec::new();
    for (i, record) in csv.records().enumerate() {
        let record = record?;
        values.push(parse_number(&record, col, i + 1, "load_mw")? * scale);
    }
    LoadSeries::new(values)
}

/// Load and validate a demand CSV file.
pub fn load_load_profile(path: &Path) -> Result<LoadSeries, DataError> {
    read_load_profile(open(path)?)
}

/// Load a demand CSV and require it to match the weather horizon.
pub fn load_load_profile_for(path: &Path, weather: &WeatherSeries) -> Result<LoadSeries, DataError> {
    let load = load_load_profile(path)?;
    load.check_aligned(weather)?;
    Ok(load)
}

/// Solar constant, W/m2.
pub const SOLAR_CONSTANT: f64 = 1361.0;

/// Extraterrestrial normal irradiance on day-of-year `day`.
pub fn extraterrestrial_normal(day: f64) -> f64 {
    SOLAR_CONSTANT * (1.0 + 0.033 * (360.0 * day / 365.0).to_radians().cos())
}

/// Kasten-Young relative air mass for a zenith cosine.
pub fn air_mass(cos_zenith: f64) -> f64 {
    let zenith_deg = cos_zenith.clamp(-1.0, 1.0).acos().to_degrees();
    1.0 / (cos_zenith + 0.50572 * (96.07995 - zenith_deg).powf(-1.6364))
}

/// Clear-sky `(ghi, dni, dhi)` in W/m2: Meinel beam attenuation and the
/// Liu-Jordan diffuse fraction. Zero when the sun is not above the horizon.
pub fn clear_sky_components(day: f64, cos_zenith: f64, transmittance: f64) -> (f64, f64, f64) {
    if cos_zenith <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let i0 = extraterrestrial_normal(day);
    let dni = i0 * transmittance.powf(air_mass(cos_zenith).powf(0.678));
    let dhi = (i0 * cos_zenith * (0.271 - 0.294 * dni / i0)).max(0.0);
    (dni * cos_zenith + dhi, dni, dhi)
}

/// Shape of a synthetic year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClearSkyParams {
    pub longitude: f64,
    pub utc_offset_hours: f64,
    pub year: i32,
    pub hours: usize,
    /// Atmospheric beam transmittance at unit air mass.
    pub transmittance: f64,
    /// Day-to-day beam attenuation drawn uniformly from `[0, cloudiness)`.
    pub cloudiness: f64,
    pub mean_temperature_c: f64,
    pub annual_temperature_swing_c: f64,
    pub daily_temperature_swing_c: f64,
    /// Uniform hourly temperature noise half-width.
    pub temperature_noise_c: f64,
}

impl Default for ClearSkyParams {
    fn default() -> Self {
        Self {
            longitude: Location::DETROIT.longitude,
            utc_offset_hours: Location::DETROIT.utc_offset_hours,
            year: 2021,
            hours: 8760,
            transmittance: 0.7,
            cloudiness: 0.0,
            mean_temperature_c: 10.0,
            annual_temperature_swing_c: 13.0,
            daily_temperature_swing_c: 5.0,
            temperature_noise_c: 1.5,
        }
    }
}

/// Deterministic synthetic weather for tests and demos.
pub fn synthesize_clear_sky_year(
    latitude: f64,
    params: &ClearSkyParams,
    seed: u64,
) -> Result<WeatherSeries, DataError> {
    let location = Location {
        latitude,
        longitude: params.longitude,
        utc_offset_hours: params.utc_offset_hours,
    };
    location.validate()?;
    if params.hours == 0 {
        return Err(DataError::NoDataRows);
    }
    check_closed("transmittance", params.transmittance, 0.0, 1.0, "[0, 1]")?;
    check_closed("cloudiness", params.cloudiness, 0.0, 1.0, "[0, 1]")?;

    // Each record closes its hour, so the first one is stamped 01:00.
    let label = TimestampLabel::IntervalEnd;
    let start = NaiveDate::from_ymd_opt(params.year, 1, 1)
        .ok_or_else(|| ParamError::Invalid(format!("year {} out of range", params.year)))?
        .and_hms_opt(1, 0, 0)
        .expect("01:00 exists");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut day_factor = 1.0;
    let mut current_day = None;

    let n = params.hours;
    let mut timestamps = Vec::with_capacity(n);
    let (mut ghi, mut dni, mut dhi, mut t_amb) =
        (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for t in 0..n {
        let ts = start + Duration::hours(t as i64);
        let center = label.hour_center(ts);
        let day = f64::from(center.ordinal());
        if current_day != Some(center.ordinal()) {
            current_day = Some(center.ordinal());
            day_factor = 1.0 - params.cloudiness * rng.random::<f64>();
        }
        let pos = solar_position(latitude, params.longitude, params.utc_offset_hours, center);
        let (g, b, d) = if pos.is_up() {
            let (_, b, d) = clear_sky_components(day, pos.cos_zenith(), params.transmittance);
            let b = b * day_factor;
            (b * pos.cos_zenith() + d, b, d)
        } else {
            (0.0, 0.0, 0.0)
        };
        let hour_of_day = f64::from(chrono::Timelike::hour(&center)) + 0.5;
        let seasonal = -(std::f64::consts::TAU * (day - 20.0) / 365.0).cos();
        let diurnal = (std::f64::consts::TAU * (hour_of_day - 15.0) / 24.0).cos();
        let noise = params.temperature_noise_c * (2.0 * rng.random::<f64>() - 1.0);
        timestamps.push(ts);
        ghi.push(g);
        dni.push(b);
        dhi.push(d);
        t_amb.push(
            params.mean_temperature_c
                + params.annual_temperature_swing_c * seasonal
                + params.daily_temperature_swing_c * diurnal
                + noise,
        );
    }
    WeatherSeries::new(location, label, timestamps, ghi, dni, dhi, t_amb)
}

/// Synthetic campus-feeder demand scaled to `mean_mw`.
///
/// Flat overnight base, a daytime bump peaking at 13:00 that grows in
/// summer, and a winter evening peak after sunset. Timestamps close their
/// hour, so each value describes the preceding 60 minutes.
pub fn synthesize_feeder_load(
    timestamps: &[NaiveDateTime],
    mean_mw: f64,
    seed: u64,
) -> Result<LoadSeries, DataError> {
    use std::f64::consts::{PI, TAU};
    check_closed("mean_mw", mean_mw, 0.0, f64::MAX, "a non-negative power")?;
    if timestamps.is_empty() {
        return Err(DataError::NoDataRows);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = timestamps
        .iter()
        .map(|ts| {
            let center = TimestampLabel::IntervalEnd.hour_center(*ts);
            let hour = f64::from(center.hour()) + f64::from(center.minute()) / 60.0;
            let day = f64::from(center.ordinal());
            let window = if (8.0..=18.0).contains(&hour) {
                (PI * (hour - 13.0) / 10.0).cos().powi(2)
            } else {
                0.0
            };
            let summer = 1.0 + 0.3 * (TAU * (day - 200.0) / 365.0).cos();
            let winter = (TAU * (day - 15.0) / 365.0).cos().max(0.0).powi(2);
            let evening = (-((hour - 19.5) / 1.5).powi(2)).exp();
            let shape = 0.8 + 0.75 * window * summer + 0.35 * winter * evening;
            shape * (1.0 + 0.04 * (2.0 * rng.random::<f64>() - 1.0))
        })
        .collect();
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    LoadSeries::new(raw.into_iter().map(|v| v * mean_mw / mean).collect())
}
