use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pvsizing_cli::config::{LoadedConfig, ScenarioConfig, TEMPLATE};
use pvsizing_cli::{run_compare, run_optimize, run_simulate, CliError, OutputOptions};
use pvsizing_core::weather::{synthesize_clear_sky_year, synthesize_feeder_load};

/// Size monofacial and bifacial PV plants against an hourly load.
#[derive(Parser)]
#[command(name = "pvsizing", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the hourly pipeline once at a fixed panel count.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Number of panels.
        #[arg(long)]
        n_pv: u64,
    },
    /// Find the panel count minimizing LPSP and report the sized plant.
    Optimize {
        #[command(flatten)]
        common: Common,
    },
    /// Size monofacial and bifacial plants on the same inputs.
    ///
    /// With one --config, its monofacial and bifacial variants are compared;
    /// with two, the two files are compared as given.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Configuration helpers.
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
    /// Write a synthetic weather and load year as CSV.
    GenerateData {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "data")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ConfigAction {
    /// Write a commented configuration with every default.
    Init {
        /// Destination file; prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overwrite an existing file.
        #[arg(long)]
        force: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML); built-in defaults when omitted.
    #[arg(long = "config", action = clap::ArgAction::Append)]
    configs: Vec<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the WOA seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write SVG charts.
    #[arg(long)]
    svg: bool,
    /// Also write hourly CSV series.
    #[arg(long)]
    dump_hourly: bool,
}

impl Common {
    fn load(&self, max: usize) -> Result<Vec<LoadedConfig>, CliError> {
        if self.configs.len() > max {
            return Err(CliError::Config(format!("at most {max} --config file(s) accepted")));
        }
        let mut loaded = if self.configs.is_empty() {
            vec![LoadedConfig::in_place(ScenarioConfig::default())]
        } else {
            self.configs.iter().map(|p| LoadedConfig::read(p)).collect::<Result<_, _>>()?
        };
        if let Some(seed) = self.seed {
            for c in &mut loaded {
                c.config.woa.swarm.seed = seed;
            }
        }
        Ok(loaded)
    }

    fn output(&self) -> OutputOptions {
        OutputOptions {
            out_dir: self.out.clone(),
            svg: self.svg,
            dump_hourly: self.dump_hourly,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { common, n_pv } => {
            let cfg = common.load(1)?.remove(0);
            let s = run_simulate(&cfg, n_pv, Some(&common.output()))?;
            println!("{}: N_PV {} LPSP {:.4} %", s.label, s.metrics.n_pv, 100.0 * s.metrics.lpsp);
        }
        Command::Optimize { common } => {
            let cfg = common.load(1)?.remove(0);
            let s = run_optimize(&cfg, Some(&common.output()))?;
            println!("{}: N_PV {} LPSP {:.4} %", s.label, s.metrics.n_pv, 100.0 * s.metrics.lpsp);
        }
        Command::Compare { common } => {
            let cfgs = common.load(2)?;
            let r = run_compare(&cfgs[0], cfgs.get(1), Some(&common.output()))?;
            for s in [&r.first, &r.second] {
                println!("{}: N_PV {} LPSP {:.4} %", s.label, s.metrics.n_pv, 100.0 * s.metrics.lpsp);
            }
            println!("irradiance gain: mean {:.2} %, max {:.2} %", r.mean_irradiance_gain(), r.max_irradiance_gain());
        }
        Command::Config {
            action: ConfigAction::Init { out, force },
        } => match out {
            None => print!("{TEMPLATE}"),
            Some(path) => {
                if path.exists() && !force {
                    return Err(CliError::Config(format!("{} exists; pass --force to overwrite", path.display())));
                }
                std::fs::write(&path, TEMPLATE).map_err(|e| CliError::Output {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
            }
        },
        Command::GenerateData { config, out } => {
            let cfg = match config {
                Some(p) => LoadedConfig::read(&p)?.config,
                None => ScenarioConfig::default(),
            };
            let syn = &cfg.data.synthetic;
            let weather = synthesize_clear_sky_year(cfg.location.latitude, &syn.clear_sky(&cfg.location), syn.seed)?;
            let load = synthesize_feeder_load(weather.timestamps(), syn.load_mean_mw, syn.seed)?;
            let io = |p: &PathBuf, e: String| CliError::Output {
                path: p.display().to_string(),
                message: e,
            };
            std::fs::create_dir_all(&out).map_err(|e| io(&out, e.to_string()))?;
            let wpath = out.join("weather.csv");
            weather.save_csv(&wpath)?;
            let lpath = out.join("load.csv");
            let file = std::fs::File::create(&lpath).map_err(|e| io(&lpath, e.to_string()))?;
            load.write_csv(weather.timestamps(), std::io::BufWriter::new(file))?;
            println!("wrote {} and {}", wpath.display(), lpath.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pvsizing: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
