//! The `scanplan` command line: reproduces each figure-style table as CSV
//! and prints the planning-rule inversion and the concordance report.
//!
//! Exit codes: 0 on success, 1 for usage or config-parse problems, 2 for
//! domain or numeric errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use scanplan_core::analytic::{min_scans, rule_of_thumb_curve, RuleOfThumbInput};
use scanplan_core::concordance::concordance_report;
use scanplan_core::config::{parse_config, MissionConfig};
use scanplan_core::csv::{
    emit_concordance_csv, emit_mission_csv, emit_rule_curve_csv, emit_se_curve_csv, emit_sweep_csv,
};
use scanplan_core::grid::UniformGrid;
use scanplan_core::montecarlo::{sweep_detection, MonteCarloConfig, ThreatPrior};
use scanplan_core::sonar::{mission_report, se_curve};
use scanplan_core::Error;

/// Trials and seed used by `concordance` when neither a config nor the
/// override flags supply them.
pub const DEFAULT_CONCORDANCE_TRIALS: u64 = 100_000;
pub const DEFAULT_CONCORDANCE_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "scanplan", version, about = "Scan-count planning for area surveillance")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to a `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override mc.seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override mc.trials from the config.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Monte Carlo worker threads (0 = runtime default). Results do not
    /// depend on this; without the `parallel` feature it is ignored.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Detection probability over a sensor-range x scan-count grid (CSV).
    Sweep,
    /// Minimum scan count for a target detection probability, from the
    /// closed-form planning rule.
    RuleOfThumb {
        /// `(epsilon / delta)^2`; falls back to rule.ratio_squared.
        #[arg(long)]
        ratio_squared: Option<f64>,
        /// Target detection probability in (0, 1); falls back to rule.target.
        #[arg(long)]
        target: Option<f64>,
        /// Also print the planning-rule curve up to this scan count.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Signal excess as a function of range (CSV).
    SonarCurve,
    /// Per-range signal excess and detection probabilities (CSV).
    Mission,
    /// Computed values against the published reference values (CSV).
    Concordance,
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    eprintln!("{e}");
                    1
                }
            };
        }
    };

    let output = run_in_pool(&cli);
    match output {
        Ok(text) => match write_output(&cli, &text) {
            Ok(()) => 0,
            Err(message) => {
                eprintln!("error: {message}");
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } => 1,
                _ => 2,
            }
        }
    }
}

#[cfg(feature = "parallel")]
fn run_in_pool(cli: &Cli) -> Result<String, Error> {
    match cli.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))?;
            pool.install(|| execute(cli))
        }
        None => execute(cli),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_in_pool(cli: &Cli) -> Result<String, Error> {
    execute(cli)
}

fn write_output(cli: &Cli, text: &str) -> Result<(), String> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(cli: &Cli) -> Result<Option<MissionConfig>, Error> {
    match &cli.config {
        None => Ok(None),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::parse(format!("cannot read config {}: {e}", path.display())))?;
            Ok(Some(parse_config(&text)?))
        }
    }
}

fn require_config<'c>(config: &'c Option<MissionConfig>, subcommand: &str) -> Result<&'c MissionConfig, Error> {
    config
        .as_ref()
        .ok_or_else(|| Error::parse(format!("'{subcommand}' requires --config <path>")))
}

/// The config's Monte Carlo settings with CLI overrides applied.
fn mc_settings(config: &MissionConfig, cli: &Cli) -> Result<MonteCarloConfig, Error> {
    let base = config.require_mc()?;
    Ok(MonteCarloConfig {
        trials: cli.trials.unwrap_or(base.trials),
        seed: cli.seed.unwrap_or(base.seed),
    })
}

fn execute(cli: &Cli) -> Result<String, Error> {
    let config = load_config(cli)?;
    match &cli.command {
        Command::Sweep => {
            let config = require_config(&config, "sweep")?;
            let region = config.require_region()?;
            let path = config.require_path()?;
            let mc = mc_settings(config, cli)?;
            let sweep = config.require_sweep()?;
            let grid = UniformGrid::new(sweep.epsilon_min, sweep.epsilon_max, sweep.epsilon_steps)?;
            let result = sweep_detection(
                path,
                &sweep.scans,
                grid,
                &region,
                &ThreatPrior::UniformInRegion,
                &mc,
            )?;
            Ok(emit_sweep_csv(&result))
        }
        Command::RuleOfThumb { ratio_squared, target, n_max } => {
            let rule = config.as_ref().and_then(|c| c.rule.clone());
            let ratio = ratio_squared
                .or(rule.as_ref().map(|r| r.ratio_squared))
                .ok_or_else(|| Error::parse("rule-of-thumb needs --ratio-squared or rule.ratio_squared"))?;
            let target = target
                .or(rule.as_ref().map(|r| r.target))
                .ok_or_else(|| Error::parse("rule-of-thumb needs --target or rule.target"))?;
            if !(target > 0.0 && target < 1.0) {
                return Err(Error::invalid(format!("target probability must lie in (0, 1), got {target}")));
            }
            let n_max = n_max.or(rule.as_ref().and_then(|r| r.n_max));

            let q = RuleOfThumbInput::RatioSquared(ratio).hit_probability()?;
            let n_min = min_scans(target, q)?;
            let mut out = format!("q = {q:.6}\nn_min = {n_min}\n");
            if let Some(n_max) = n_max {
                let curve = rule_of_thumb_curve(RuleOfThumbInput::RatioSquared(ratio), n_max)?;
                out.push_str(&emit_rule_curve_csv(&curve));
            }
            Ok(out)
        }
        Command::SonarCurve => {
            let config = require_config(&config, "sonar-curve")?;
            let params = config.require_sonar()?;
            let mission = config.require_mission()?;
            let grid = UniformGrid::new(mission.range_min, mission.range_max, mission.range_steps)?;
            let curve = se_curve(params, grid)?;
            Ok(emit_se_curve_csv(&curve))
        }
        Command::Mission => {
            let config = require_config(&config, "mission")?;
            let region = config.require_region()?;
            let path = config.require_path()?;
            let mc = mc_settings(config, cli)?;
            let params = config.require_sonar()?;
            let mission = config.require_mission()?;
            let grid = UniformGrid::new(mission.range_min, mission.range_max, mission.range_steps)?;
            let report = mission_report(params, path, &region, &mission.scans, grid, &mc)?;
            Ok(emit_mission_csv(&report))
        }
        Command::Concordance => {
            let mc = config.as_ref().and_then(|c| c.mc);
            let trials = cli
                .trials
                .or(mc.map(|m| m.trials))
                .unwrap_or(DEFAULT_CONCORDANCE_TRIALS);
            let seed = cli.seed.or(mc.map(|m| m.seed)).unwrap_or(DEFAULT_CONCORDANCE_SEED);
            let report = concordance_report(trials, seed)?;
            Ok(emit_concordance_csv(&report))
        }
    }
}
