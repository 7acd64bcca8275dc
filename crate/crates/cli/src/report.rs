//! Text and CSV reports.

use std::fmt::Write as _;

use pvsizing_core::{MetricsReport, SizingOutcome, Technology};

use crate::config::ScenarioConfig;

/// Everything reported about one plant.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantSummary {
    pub label: String,
    pub technology: Technology,
    pub tilt: f64,
    pub metrics: MetricsReport,
    /// DC nameplate, MW.
    pub capacity_mw: f64,
    /// Effective plane-of-array irradiance, W/m2.
    pub mean_irradiance: f64,
    pub max_irradiance: f64,
    pub sizing: Option<SizingOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Count(u64),
    Number(f64),
    Missing,
}

impl Value {
    fn raw(self) -> String {
        match self {
            Value::Count(n) => n.to_string(),
            Value::Number(x) => x.to_string(),
            Value::Missing => String::new(),
        }
    }

    fn as_f64(self) -> Option<f64> {
        match self {
            Value::Count(n) => Some(n as f64),
            Value::Number(x) => Some(x),
            Value::Missing => None,
        }
    }
}

pub struct Row {
    pub key: &'static str,
    pub unit: &'static str,
    pub value: Value,
}

fn row(key: &'static str, unit: &'static str, value: Value) -> Row {
    Row { key, unit, value }
}

impl PlantSummary {
    /// Reported quantities in a fixed order.
    pub fn rows(&self) -> Vec<Row> {
        use Value::*;
        let m = &self.metrics;
        let e = &m.energy;
        let mut rows = vec![
            row("n_pv", "count", Count(m.n_pv)),
            row("lpsp", "fraction", Number(m.lpsp)),
            row("tilt", "deg", Number(self.tilt)),
            row("capacity_dc", "MW", Number(self.capacity_mw)),
            row("co2ra", "GgCO2/yr", Number(m.co2ra)),
            row("tac", "$/yr", Number(m.tac)),
            row("lcoe", "$/kWh", m.lcoe.map_or(Missing, Number)),
            row("area", "m2", Number(m.area.m2)),
            row("area", "acre", Number(m.area.acres)),
            row("e_sgen", "GWh", Number(e.e_sgen)),
            row("e_gpurch", "GWh", Number(e.e_gpurch)),
            row("e_load", "GWh", Number(e.e_load)),
            row("e_gsold", "GWh", Number(e.e_gsold)),
            row("e_deficit", "GWh", Number(e.e_deficit)),
            row("peak_power", "MW", Number(m.peak_power)),
            row("mean_power", "MW", Number(m.mean_power)),
            row("mean_irradiance", "W/m2", Number(self.mean_irradiance)),
            row("max_irradiance", "W/m2", Number(self.max_irradiance)),
        ];
        if let Some(s) = &self.sizing {
            rows.push(row("woa_iterations", "count", Count(s.convergence.len().saturating_sub(1) as u64)));
            rows.push(row("woa_evaluations", "count", Count(s.evaluations as u64)));
        }
        rows
    }
}

/// Two plants side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub first: PlantSummary,
    pub second: PlantSummary,
}

impl CompareReport {
    /// Percentage increase of the second plant's mean effective irradiance.
    pub fn mean_irradiance_gain(&self) -> f64 {
        percent_gain(self.first.mean_irradiance, self.second.mean_irradiance)
    }

    pub fn max_irradiance_gain(&self) -> f64 {
        percent_gain(self.first.max_irradiance, self.second.max_irradiance)
    }
}

fn percent_gain(base: f64, other: f64) -> f64 {
    if base > 0.0 {
        100.0 * (other - base) / base
    } else {
        f64::NAN
    }
}

fn snapshot(out: &mut String, configs: &[&ScenarioConfig]) {
    for c in configs {
        let _ = writeln!(out, "# config {}", c.label());
        for line in c.to_toml().lines() {
            let _ = writeln!(out, "#   {line}");
        }
    }
}

fn write_csv_rows(out: &mut String, header: &[&str], rows: Vec<Vec<String>>) {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input"));
}

/// Full-precision CSV with the configuration as leading `#` comments.
pub fn single_csv(command: &str, summary: &PlantSummary, config: &ScenarioConfig) -> String {
    let mut out = format!("# pvsizing {command}\n");
    snapshot(&mut out, &[config]);
    let mut rows = vec![vec!["technology".into(), String::new(), summary.technology.name().into()]];
    rows.extend(
        summary
            .rows()
            .into_iter()
            .map(|r| vec![r.key.to_string(), r.unit.to_string(), r.value.raw()]),
    );
    write_csv_rows(&mut out, &["quantity", "unit", &summary.label], rows);
    out
}

pub fn compare_csv(report: &CompareReport, configs: &[&ScenarioConfig]) -> String {
    let mut out = String::from("# pvsizing compare\n");
    snapshot(&mut out, configs);
    let (a, b) = (&report.first, &report.second);
    let mut rows = vec![vec![
        "technology".into(),
        String::new(),
        a.technology.name().into(),
        b.technology.name().into(),
        String::new(),
    ]];
    for (ra, rb) in a.rows().into_iter().zip(b.rows()) {
        let diff = match (ra.value.as_f64(), rb.value.as_f64()) {
            (Some(x), Some(y)) => (y - x).to_string(),
            _ => String::new(),
        };
        rows.push(vec![ra.key.into(), ra.unit.into(), ra.value.raw(), rb.value.raw(), diff]);
    }
    for (key, v) in [
        ("irradiance_gain_mean", report.mean_irradiance_gain()),
        ("irradiance_gain_max", report.max_irradiance_gain()),
    ] {
        rows.push(vec![key.into(), "%".into(), String::new(), String::new(), v.to_string()]);
    }
    let header = ["quantity", "unit", a.label.as_str(), b.label.as_str(), "difference"];
    write_csv_rows(&mut out, &header, rows);
    out
}

fn fmt_value(key: &str, v: Value) -> String {
    match v {
        Value::Count(n) => n.to_string(),
        Value::Missing => "n/a".into(),
        Value::Number(x) if key == "lpsp" => format!("{:.4} %", 100.0 * x),
        Value::Number(x) if key == "lcoe" => format!("{x:.5}"),
        Value::Number(x) if x.abs() >= 1000.0 => format!("{x:.1}"),
        Value::Number(x) => format!("{x:.4}"),
    }
}

const SECTIONS: [(&str, &[&str]); 4] = [
    ("Optimal size", &["n_pv", "lpsp", "tilt", "capacity_dc"]),
    ("Emissions, cost and footprint", &["co2ra", "tac", "lcoe", "area"]),
    ("Annual energy", &["e_sgen", "e_gpurch", "e_load", "e_gsold", "e_deficit"]),
    (
        "Power and irradiance",
        &["peak_power", "mean_power", "mean_irradiance", "max_irradiance", "woa_iterations", "woa_evaluations"],
    ),
];

/// Human-readable tables for one or two plants.
pub fn text(title: &str, plants: &[&PlantSummary], notes: &[String]) -> String {
    let rows: Vec<Vec<Row>> = plants.iter().map(|p| p.rows()).collect();
    let mut out = format!("{title}\n{}\n", "=".repeat(title.len()));
    let width = 16;
    for (heading, keys) in SECTIONS {
        let _ = write!(out, "\n{heading}\n{:<28}", "");
        for p in plants {
            let _ = write!(out, "{:>width$}", p.label);
        }
        out.push('\n');
        for (i, r) in rows[0].iter().enumerate() {
            if !keys.contains(&r.key) {
                continue;
            }
            let name = format!("{} ({})", r.key, r.unit);
            let _ = write!(out, "{name:<28}");
            for pr in &rows {
                let _ = write!(out, "{:>width$}", fmt_value(r.key, pr[i].value));
            }
            out.push('\n');
        }
    }
    if !notes.is_empty() {
        out.push('\n');
        for n in notes {
            out.push_str(n);
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use pvsizing_core::{EnergyTotals, PlantArea};

    fn summary(n: u64) -> PlantSummary {
        PlantSummary {
            label: "a".into(),
            technology: Technology::Bifacial,
            tilt: 35.0,
            metrics: MetricsReport {
                n_pv: n,
                lpsp: 0.005757,
                co2ra: 5.4,
                tac: 1.0e6,
                lcoe: None,
                area: PlantArea { m2: 1.0, acres: 2.0 },
                energy: EnergyTotals {
                    e_sgen: 1.0,
                    e_gpurch: 2.0,
                    e_load: 3.0,
                    e_gsold: 0.1,
                    e_deficit: 0.2,
                },
                peak_power: 1.0,
                mean_power: 0.5,
            },
            capacity_mw: 1.0,
            mean_irradiance: 200.0,
            max_irradiance: 1100.0,
            sizing: None,
        }
    }

    #[test]
    fn csv_keeps_full_precision_and_config() {
        let s = summary(10);
        let text = single_csv("simulate", &s, &ScenarioConfig::default());
        assert!(text.contains("lpsp,fraction,0.005757\n"));
        assert!(text.contains("lcoe,$/kWh,\n"));
        assert!(text.contains("#   technology = \"bifacial\""));
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["quantity", "unit", "a"]);
        assert_eq!(r.records().count(), s.rows().len() + 1);
    }

    #[test]
    fn identical_columns_have_zero_difference() {
        let c = CompareReport {
            first: summary(5),
            second: summary(5),
        };
        let text = compare_csv(&c, &[&ScenarioConfig::default()]);
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        for rec in r.records().map(Result::unwrap) {
            if !rec[4].is_empty() {
                assert_eq!(rec[4].parse::<f64>().unwrap(), 0.0, "{:?}", rec);
            }
        }
    }

    #[test]
    fn text_lists_every_section() {
        let s = summary(7);
        let t = text("title", &[&s], &[]);
        for (h, _) in SECTIONS {
            assert!(t.contains(h));
        }
        assert!(t.contains("0.5757 %"));
    }
}
