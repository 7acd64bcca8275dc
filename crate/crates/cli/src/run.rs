//! The `simulate`, `optimize` and `compare` commands.

use std::path::{Path, PathBuf};

use pvsizing_core::{DispatchResult, Scenario, SizingOutcome};

use crate::config::{LoadedConfig, ScenarioConfig};
use crate::report::{self, CompareReport, PlantSummary};
use crate::svg::{self, Series};
use crate::CliError;

/// Where and what to write. Commands run without writing when absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputOptions {
    pub out_dir: PathBuf,
    pub svg: bool,
    pub dump_hourly: bool,
}

impl OutputOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self {
            out_dir: out_dir.into(),
            svg: false,
            dump_hourly: false,
        }
    }

    fn prepare(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out_dir).map_err(|e| output_error(&self.out_dir, e))
    }

    fn write(&self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, contents).map_err(|e| output_error(&path, e))
    }

    fn write_with<F>(&self, name: &str, f: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut Vec<u8>) -> Result<(), String>,
    {
        let mut buf = Vec::new();
        f(&mut buf).map_err(|message| CliError::Output {
            path: self.out_dir.join(name).display().to_string(),
            message,
        })?;
        self.write(name, &buf)
    }
}

fn output_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Metrics of `scenario` at `n_pv` panels.
pub fn summarize(
    scenario: &Scenario,
    config: &ScenarioConfig,
    n_pv: u64,
    sizing: Option<SizingOutcome>,
) -> Result<(PlantSummary, DispatchResult), CliError> {
    let (result, metrics) =
        scenario.metrics(n_pv, &config.economics(), &config.emissions, config.report.lcoe_energy_basis)?;
    let model = scenario.model();
    let summary = PlantSummary {
        label: config.label(),
        technology: model.technology,
        tilt: model.site.plane.tilt,
        capacity_mw: model.array(n_pv)?.capacity_mw(&model.panel),
        mean_irradiance: scenario.irradiance().mean_effective(),
        max_irradiance: scenario.irradiance().max_effective(),
        metrics,
        sizing,
    };
    Ok((summary, result))
}

fn sized(scenario: &Scenario, config: &ScenarioConfig) -> Result<(PlantSummary, DispatchResult), CliError> {
    let outcome = scenario.optimize_par(&config.woa)?;
    if !outcome.best_lpsp.is_finite() {
        return Err(CliError::Numerical(format!("optimizer returned LPSP {}", outcome.best_lpsp)));
    }
    summarize(scenario, config, outcome.best_n_pv, Some(outcome))
}

fn dump_hourly(out: &OutputOptions, suffix: &str, scenario: &Scenario, result: &DispatchResult) -> Result<(), CliError> {
    let weather = scenario.weather();
    out.write_with(&format!("hourly_dispatch{suffix}.csv"), |buf| {
        result.write_csv(weather.timestamps(), buf).map_err(|e| e.to_string())
    })?;
    out.write_with(&format!("hourly_irradiance{suffix}.csv"), |buf| {
        scenario.irradiance().write_csv(weather, buf).map_err(|e| e.to_string())
    })
}

fn convergence_csv(out: &OutputOptions, name: &str, outcome: &SizingOutcome) -> Result<(), CliError> {
    out.write_with(name, |buf| outcome.write_convergence_csv(buf).map_err(|e| e.to_string()))
}

fn convergence_series(summary: &PlantSummary) -> Series<'_> {
    Series {
        name: &summary.label,
        points: summary
            .sizing
            .iter()
            .flat_map(|s| s.convergence.iter().map(|c| (c.iteration as f64, 100.0 * c.best_lpsp)))
            .collect(),
    }
}

fn single_svgs(out: &OutputOptions, summary: &PlantSummary, scenario: &Scenario, result: &DispatchResult) -> Result<(), CliError> {
    let generation: Vec<f64> = result.hourly.iter().map(|h| h.p_sgen).collect();
    let energy = svg::line_chart(
        "Daily mean generation and load",
        "day",
        "MW",
        &[
            Series {
                name: "generation",
                points: svg::daily_means(&generation),
            },
            Series {
                name: "load",
                points: svg::daily_means(scenario.load().values()),
            },
        ],
    );
    out.write("daily_power.svg", energy.as_bytes())?;
    let irradiance: Vec<f64> = scenario.irradiance().effective_values().collect();
    let chart = svg::line_chart(
        "Daily mean effective irradiance",
        "day",
        "W/m2",
        &[Series {
            name: &summary.label,
            points: svg::daily_means(&irradiance),
        }],
    );
    out.write("irradiance.svg", chart.as_bytes())?;
    if summary.sizing.is_some() {
        let chart = svg::line_chart("WOA convergence", "iteration", "best LPSP (%)", &[convergence_series(summary)]);
        out.write("convergence.svg", chart.as_bytes())?;
    }
    Ok(())
}

fn write_single(
    command: &str,
    out: &OutputOptions,
    cfg: &LoadedConfig,
    scenario: &Scenario,
    summary: &PlantSummary,
    result: &DispatchResult,
) -> Result<(), CliError> {
    out.prepare()?;
    let mut notes = Vec::new();
    if let Some(s) = &summary.sizing {
        notes.push(format!(
            "WOA: {} whales, {} iterations, seed {}, bounds [{}, {}]",
            cfg.config.woa.swarm.population_size,
            cfg.config.woa.swarm.max_iterations,
            cfg.config.woa.swarm.seed,
            cfg.config.woa.n_min,
            cfg.config.woa.n_max
        ));
        convergence_csv(out, "convergence.csv", s)?;
    }
    let title = format!("pvsizing {command}: {}", summary.label);
    out.write("report.txt", report::text(&title, &[summary], &notes).as_bytes())?;
    out.write("report.csv", report::single_csv(command, summary, &cfg.config).as_bytes())?;
    if out.dump_hourly {
        dump_hourly(out, "", scenario, result)?;
    }
    if out.svg {
        single_svgs(out, summary, scenario, result)?;
    }
    Ok(())
}

/// Run the pipeline once at a fixed panel count.
pub fn run_simulate(cfg: &LoadedConfig, n_pv: u64, out: Option<&OutputOptions>) -> Result<PlantSummary, CliError> {
    let scenario = cfg.scenario()?;
    let (summary, result) = summarize(&scenario, &cfg.config, n_pv, None)?;
    if let Some(out) = out {
        write_single("simulate", out, cfg, &scenario, &summary, &result)?;
    }
    Ok(summary)
}

/// Size the plant with WOA and report it at the optimum.
pub fn run_optimize(cfg: &LoadedConfig, out: Option<&OutputOptions>) -> Result<PlantSummary, CliError> {
    let scenario = cfg.scenario()?;
    let (summary, result) = sized(&scenario, &cfg.config)?;
    if let Some(out) = out {
        write_single("optimize", out, cfg, &scenario, &summary, &result)?;
    }
    Ok(summary)
}

fn file_tag(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c.to_ascii_lowercase() } else { '_' })
        .collect()
}

/// Size two plants on the same inputs and report them side by side.
///
/// With one configuration the two plants are its monofacial and bifacial
/// variants; with two, each is used as given.
pub fn run_compare(
    first: &LoadedConfig,
    second: Option<&LoadedConfig>,
    out: Option<&OutputOptions>,
) -> Result<CompareReport, CliError> {
    let (cfg_a, cfg_b) = match second {
        Some(b) => (first.clone(), b.clone()),
        None => {
            use pvsizing_core::Technology::{Bifacial, Monofacial};
            let mono = LoadedConfig {
                config: first.config.with_technology(Monofacial),
                base_dir: first.base_dir.clone(),
            };
            let bi = LoadedConfig {
                config: first.config.with_technology(Bifacial),
                base_dir: first.base_dir.clone(),
            };
            (mono, bi)
        }
    };

    let (inputs_a, inputs_b) = if second.is_none() {
        let inputs = cfg_a.load_inputs()?;
        (inputs.clone(), inputs)
    } else {
        (cfg_a.load_inputs()?, cfg_b.load_inputs()?)
    };
    if inputs_a.0.len() != inputs_b.0.len() || inputs_a.1.len() != inputs_b.1.len() {
        return Err(CliError::Data(format!(
            "mismatched horizons: {} vs {} hours",
            inputs_a.0.len(),
            inputs_b.0.len()
        )));
    }
    let scenario_a = cfg_a.scenario_with(inputs_a.0, inputs_a.1)?;
    let scenario_b = cfg_b.scenario_with(inputs_b.0, inputs_b.1)?;

    let (a, b) = rayon::join(|| sized(&scenario_a, &cfg_a.config), || sized(&scenario_b, &cfg_b.config));
    let ((summary_a, result_a), (summary_b, result_b)) = (a?, b?);
    let report = CompareReport {
        first: summary_a,
        second: summary_b,
    };

    if let Some(out) = out {
        out.prepare()?;
        let mut tag_a = file_tag(&report.first.label);
        let mut tag_b = file_tag(&report.second.label);
        if tag_a == tag_b {
            tag_a.push_str("_1");
            tag_b.push_str("_2");
        }
        let notes = vec![
            format!(
                "Effective irradiance gain of {} over {}: mean {:.2} %, max {:.2} %",
                report.second.label,
                report.first.label,
                report.mean_irradiance_gain(),
                report.max_irradiance_gain()
            ),
            format!(
                "WOA: {} whales, {} iterations, seeds {} and {}",
                cfg_a.config.woa.swarm.population_size,
                cfg_a.config.woa.swarm.max_iterations,
                cfg_a.config.woa.swarm.seed,
                cfg_b.config.woa.swarm.seed
            ),
        ];
        let title = format!("pvsizing compare: {} vs {}", report.first.label, report.second.label);
        out.write("report.txt", report::text(&title, &[&report.first, &report.second], &notes).as_bytes())?;
        out.write(
            "report.csv",
            report::compare_csv(&report, &[&cfg_a.config, &cfg_b.config]).as_bytes(),
        )?;
        for (tag, s) in [(&tag_a, &report.first), (&tag_b, &report.second)] {
            if let Some(sizing) = &s.sizing {
                convergence_csv(out, &format!("convergence_{tag}.csv"), sizing)?;
            }
        }
        if out.dump_hourly {
            dump_hourly(out, &format!("_{tag_a}"), &scenario_a, &result_a)?;
            dump_hourly(out, &format!("_{tag_b}"), &scenario_b, &result_b)?;
        }
        if out.svg {
            let chart = svg::line_chart(
                "WOA convergence",
                "iteration",
                "best LPSP (%)",
                &[convergence_series(&report.first), convergence_series(&report.second)],
            );
            out.write("convergence.svg", chart.as_bytes())?;
            let irr_a: Vec<f64> = scenario_a.irradiance().effective_values().collect();
            let irr_b: Vec<f64> = scenario_b.irradiance().effective_values().collect();
            let chart = svg::line_chart(
                "Daily mean effective irradiance",
                "day",
                "W/m2",
                &[
                    Series {
                        name: &report.first.label,
                        points: svg::daily_means(&irr_a),
                    },
                    Series {
                        name: &report.second.label,
                        points: svg::daily_means(&irr_b),
                    },
                ],
            );
            out.write("irradiance.svg", chart.as_bytes())?;
            let gen_a: Vec<f64> = result_a.hourly.iter().map(|h| h.p_sgen).collect();
            let gen_b: Vec<f64> = result_b.hourly.iter().map(|h| h.p_sgen).collect();
            let chart = svg::line_chart(
                "Daily mean generation",
                "day",
                "MW",
                &[
                    Series {
                        name: &report.first.label,
                        points: svg::daily_means(&gen_a),
                    },
                    Series {
                        name: &report.second.label,
                        points: svg::daily_means(&gen_b),
                    },
                ],
            );
            out.write("daily_power.svg", chart.as_bytes())?;
        }
    }
    Ok(report)
}
