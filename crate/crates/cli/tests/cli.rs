mod common;

use std::path::Path;
use std::process::Command;

use pvsizing_cli::config::{LoadedConfig, ScenarioConfig, TEMPLATE};
use pvsizing_cli::{run_compare, run_optimize, run_simulate, CliError, OutputOptions};
use pvsizing_core::dispatch::simulate_year;
use pvsizing_core::irradiance::transpose_series;
use pvsizing_core::metrics::{evaluate, MetricsInputs};
use pvsizing_core::pv::{array_ac_power, cell_temperature, panel_dc_power};
use pvsizing_core::{ArrayConfig, LoadSeries, PlaneOrientation, SiteConfig, Technology, WeatherSeries};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pvsizing"))
}

fn write_inputs(dir: &Path, weather: &WeatherSeries, load: &LoadSeries) {
    weather.save_csv(&dir.join("weather.csv")).unwrap();
    let f = std::fs::File::create(dir.join("load.csv")).unwrap();
    load.write_csv(weather.timestamps(), f).unwrap();
}

/// A 168-hour config backed by CSV files in `dir`.
fn week_config(dir: &Path, technology: Technology) -> LoadedConfig {
    let year = common::year(common::DETROIT_LAT, 0.3, 21);
    let weather = common::slice(&year, 8, 168);
    write_inputs(dir, &weather, &common::week_load(1.0, 1.0));
    let text = format!(
        "technology = \"{}\"\n[data]\nweather = \"weather.csv\"\nload = \"load.csv\"\nexpected_rows = 168\n\
         [site]\nn_rows = 20\n[dispatch]\nmax_grid_purchase = 0.8\n\
         [woa]\nmax_iterations = 200\nn_max = 2000\n",
        technology.name()
    );
    let path = dir.join("week.toml");
    std::fs::write(&path, text).unwrap();
    LoadedConfig::read(&path).unwrap()
}

#[test]
fn zero_panels_generate_nothing() {
    let s = run_simulate(&LoadedConfig::in_place(ScenarioConfig::default()), 0, None).unwrap();
    assert_eq!(s.metrics.energy.e_sgen, 0.0);
    assert_eq!(s.metrics.lcoe, None);
}

#[test]
fn bifacial_without_rear_gain_equals_monofacial() {
    let mut c = ScenarioConfig::default();
    c.site.tilt_bifacial = 30.0;
    c.site.tilt_monofacial = 30.0;
    c.panel.bifaciality = 0.0;
    c.economics.capital_cost_per_panel_bifacial = c.economics.capital_cost_per_panel_monofacial;
    let bi = run_simulate(&LoadedConfig::in_place(c.with_technology(Technology::Bifacial)), 2500, None).unwrap();
    let mono = run_simulate(&LoadedConfig::in_place(c.with_technology(Technology::Monofacial)), 2500, None).unwrap();
    assert_eq!(bi.metrics, mono.metrics);
    assert_eq!(bi.mean_irradiance, mono.mean_irradiance);
}

#[test]
fn simulate_matches_hand_assembled_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = week_config(dir.path(), Technology::Bifacial);
    let n_pv = 900;
    let summary = run_simulate(&cfg, n_pv, None).unwrap();

    let weather = common::slice(&common::year(common::DETROIT_LAT, 0.3, 21), 8, 168);
    let load = common::week_load(1.0, 1.0);
    let c = &cfg.config;
    let site = SiteConfig::new(0.3, 1.0, PlaneOrientation::south_facing(35.0).unwrap()).unwrap();
    let irr = transpose_series(&weather, &site, Technology::Bifacial, c.panel.bifaciality).unwrap();
    let generation: Vec<f64> = irr
        .effective
        .iter()
        .zip(weather.t_amb())
        .map(|(e, &t)| {
            let g = e.effective;
            array_ac_power(panel_dc_power(g, cell_temperature(t, g, &c.panel), &c.panel), n_pv, &c.system)
        })
        .collect();
    let result = simulate_year(&generation, load.values(), &c.dispatch).unwrap();
    let array = ArrayConfig::new(n_pv, 20, site).unwrap();
    let expected = evaluate(
        &result,
        &MetricsInputs {
            panel: &c.panel,
            config: &array,
            economics: &c.economics(),
            emissions: &c.emissions,
            basis: c.report.lcoe_energy_basis,
        },
    )
    .unwrap();
    assert_eq!(summary.metrics, expected);
    assert_eq!(summary.mean_irradiance, irr.mean_effective());
}

#[test]
fn optimize_finds_the_oracle_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = week_config(dir.path(), Technology::Bifacial);
    let oracle = cfg.scenario().unwrap().sweep(0, 2000, 1).unwrap();
    let out = OutputOptions::new(dir.path().join("out"));
    let s = run_optimize(&cfg, Some(&out)).unwrap();
    assert_eq!(s.metrics.n_pv, oracle.best_n_pv);
    assert_eq!(s.metrics.lpsp, oracle.best_lpsp);

    let conv = std::fs::read_to_string(out.out_dir.join("convergence.csv")).unwrap();
    let mut lines = conv.lines();
    assert_eq!(lines.next(), Some("iteration,best_lpsp,best_n_pv"));
    let fitness: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(fitness.len(), 201);
    assert!(fitness.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn optimize_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = week_config(dir.path(), Technology::Monofacial);
    let files = ["report.csv", "report.txt", "convergence.csv"];
    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let out = OutputOptions::new(dir.path().join(name));
        run_optimize(&cfg, Some(&out)).unwrap();
        runs.push(files.map(|f| std::fs::read(out.out_dir.join(f)).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn bifacial_needs_fewer_panels_on_the_default_year() {
    let r = run_compare(&LoadedConfig::in_place(ScenarioConfig::default()), None, None).unwrap();
    assert_eq!(r.first.technology, Technology::Monofacial);
    assert_eq!(r.second.technology, Technology::Bifacial);
    assert!(r.second.metrics.n_pv <= r.first.metrics.n_pv);
    assert!(r.second.metrics.lpsp <= r.first.metrics.lpsp);
    assert_eq!(r.first.metrics.energy.e_load, r.second.metrics.energy.e_load);
    let gain = r.mean_irradiance_gain();
    assert!((5.0..=35.0).contains(&gain), "{gain}");
}

#[test]
fn identical_monofacial_configs_have_zero_deltas() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = week_config(dir.path(), Technology::Monofacial);
    let out = OutputOptions::new(dir.path().join("out"));
    let r = run_compare(&cfg, Some(&cfg), Some(&out)).unwrap();
    assert_eq!(r.first, r.second);
    assert_eq!(r.mean_irradiance_gain(), 0.0);

    let text = std::fs::read_to_string(out.out_dir.join("report.csv")).unwrap();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut rows = 0;
    for rec in reader.records().map(Result::unwrap) {
        if let Ok(d) = rec[4].parse::<f64>() {
            assert_eq!(d, 0.0, "{rec:?}");
            rows += 1;
        }
    }
    assert!(rows > 15);
    assert!(out.out_dir.join("convergence_monofacial_1.csv").exists());
}

#[test]
fn compare_rejects_mismatched_horizons() {
    let a = tempfile::tempdir().unwrap();
    let week = week_config(a.path(), Technology::Monofacial);
    let year = LoadedConfig::in_place(ScenarioConfig::default());
    let err = run_compare(&week, Some(&year), None).unwrap_err();
    assert!(matches!(err, CliError::Data(ref m) if m.contains("mismatched horizons")), "{err}");
}

#[test]
fn files_written_by_generate_data_reproduce_the_synthetic_run() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin().args(["generate-data", "--out"]).arg(dir.path()).status().unwrap();
    assert!(status.success());
    let path = dir.path().join("files.toml");
    std::fs::write(&path, "[data]\nweather = \"weather.csv\"\nload = \"load.csv\"\nexpected_rows = 8760\n").unwrap();
    let from_files = run_simulate(&LoadedConfig::read(&path).unwrap(), 2000, None).unwrap();
    let synthetic = run_simulate(&LoadedConfig::in_place(ScenarioConfig::default()), 2000, None).unwrap();
    assert_eq!(from_files.metrics, synthetic.metrics);
}

#[test]
fn svg_and_hourly_dumps_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = week_config(dir.path(), Technology::Bifacial);
    let out = OutputOptions {
        out_dir: dir.path().join("out"),
        svg: true,
        dump_hourly: true,
    };
    run_optimize(&cfg, Some(&out)).unwrap();
    for f in ["convergence.svg", "irradiance.svg", "daily_power.svg"] {
        let svg = std::fs::read_to_string(out.out_dir.join(f)).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<polyline"), "{f}");
    }
    for f in ["hourly_dispatch.csv", "hourly_irradiance.csv"] {
        let text = std::fs::read_to_string(out.out_dir.join(f)).unwrap();
        assert_eq!(text.lines().count(), 169, "{f}");
    }
    let report = std::fs::read_to_string(out.out_dir.join("report.csv")).unwrap();
    assert!(report.contains("#   weather = \"weather.csv\""));
}

#[test]
fn exit_codes_follow_error_class() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[site]\nalbedo = 2.0\n").unwrap();
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    assert_eq!(code(&["optimize", "--config", bad.to_str().unwrap(), "--out", out]), Some(2));
    assert_eq!(code(&["optimize", "--config", "/nonexistent.toml", "--out", out]), Some(2));

    std::fs::write(dir.path().join("w.csv"), "timestamp,ghi_wm2,dni_wm2,dhi_wm2,tamb_c\n2021-01-01T12:00,-5,0,0,1\n")
        .unwrap();
    let data = dir.path().join("data.toml");
    std::fs::write(&data, "[data]\nweather = \"w.csv\"\n").unwrap();
    let output = bin().args(["simulate", "--n-pv", "10", "--out", out, "--config"]).arg(&data).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("row"));

    assert_eq!(code(&["simulate", "--n-pv", "10", "--out", out]), Some(0));
}

#[test]
fn config_init_round_trips_and_protects_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    let p = path.to_str().unwrap();
    assert!(bin().args(["config", "init", "--out", p]).status().unwrap().success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), TEMPLATE);
    assert_eq!(LoadedConfig::read(&path).unwrap().config, ScenarioConfig::default());
    assert_eq!(bin().args(["config", "init", "--out", p]).status().unwrap().code(), Some(2));
    assert!(bin().args(["config", "init", "--out", p, "--force"]).status().unwrap().success());
}
