//! Flat `key = value` mission configuration.
//!
//! The format is line-oriented: one `key = value` pair per line, `#` starts
//! a comment, lists are comma-separated, the decimal separator is `.`.
//! Sections are optional but must be complete when any of their keys is
//! present; a config with no recognised keys at all is rejected. Waypoint
//! lists are written as comma-separated points with whitespace-separated
//! coordinates, e.g. `path.waypoints = 0 0, 3 4`.

use crate::error::{Error, Result};
use crate::geometry::{Point2D, SurveillancePath, SurveillanceRegion};
use crate::montecarlo::{check_scan_counts, MonteCarloConfig};
use crate::sonar::SonarParameters;

use std::collections::HashMap;

/// Sensor-range sweep axes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub epsilon_min: f64,
    pub epsilon_max: f64,
    pub epsilon_steps: usize,
    pub scans: Vec<usize>,
}

/// Planning-rule inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSection {
    pub ratio_squared: f64,
    pub target: f64,
    pub n_max: Option<usize>,
}

/// Mission range axes.
#[derive(Debug, Clone, PartialEq)]
pub struct MissionSection {
    pub range_min: f64,
    pub range_max: f64,
    pub range_steps: usize,
    pub scans: Vec<usize>,
}

/// A parsed, fully validated mission configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MissionConfig {
    pub region: Option<SurveillanceRegion>,
    pub path: Option<SurveillancePath>,
    pub mc: Option<MonteCarloConfig>,
    pub sweep: Option<SweepSection>,
    pub rule: Option<RuleSection>,
    pub sonar: Option<SonarParameters>,
    pub mission: Option<MissionSection>,
}

const KNOWN_KEYS: &[&str] = &[
    "region.delta",
    "path.type",
    "path.amplitude",
    "path.waypoints",
    "mc.trials",
    "mc.seed",
    "sweep.epsilon_min",
    "sweep.epsilon_max",
    "sweep.epsilon_steps",
    "sweep.scans",
    "rule.ratio_squared",
    "rule.target",
    "rule.n_max",
    "sonar.source_level_db",
    "sonar.frequency",
    "sonar.detection_index",
    "sonar.pulse_duration_s",
    "sonar.cylinder_length_ft",
    "sonar.cylinder_radius_ft",
    "sonar.aspect_angle_rad",
    "sonar.sound_speed_mph",
    "sonar.rl_factor",
    "mission.range_min",
    "mission.range_max",
    "mission.range_steps",
    "mission.scans",
];

/// Raw `key -> (line, value)` map with typed accessors.
struct RawConfig {
    entries: HashMap<&'static str, (usize, String)>,
}

impl RawConfig {
    fn scan(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse_at(line_no, format!("expected 'key = value', got '{line}'")));
            };
            let key = key.trim();
            let value = value.trim();
            let Some(&known) = KNOWN_KEYS.iter().find(|&&k| k == key) else {
                return Err(Error::parse_at(line_no, format!("unknown key '{key}'")));
            };
            if value.is_empty() {
                return Err(Error::parse_at(line_no, format!("key '{key}' has no value")));
            }
            if entries.insert(known, (line_no, value.to_string())).is_some() {
                return Err(Error::parse_at(line_no, format!("duplicate key '{key}'")));
            }
        }
        if entries.is_empty() {
            return Err(Error::parse("config contains no recognised keys"));
        }
        Ok(RawConfig { entries })
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        self.entries.keys().any(|k| k.starts_with(prefix))
    }

    fn get(&self, key: &str) -> Option<&(usize, String)> {
        self.entries.get(key)
    }

    fn require(&self, key: &'static str) -> Result<&(usize, String)> {
        self.get(key).ok_or_else(|| Error::parse(format!("missing required key '{key}'")))
    }

    fn f64(&self, key: &'static str) -> Result<f64> {
        let (line, value) = self.require(key)?;
        value
            .parse::<f64>()
            .map_err(|_| Error::parse_at(*line, format!("key '{key}': '{value}' is not a number")))
    }

    fn u64(&self, key: &'static str) -> Result<u64> {
        let (line, value) = self.require(key)?;
        value
            .parse::<u64>()
            .map_err(|_| Error::parse_at(*line, format!("key '{key}': '{value}' is not a non-negative integer")))
    }

    fn usize(&self, key: &'static str) -> Result<usize> {
        Ok(self.u64(key)? as usize)
    }

    fn usize_opt(&self, key: &'static str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some(_) => Ok(Some(self.usize(key)?)),
        }
    }

    fn usize_list(&self, key: &'static str) -> Result<Vec<usize>> {
        let (line, value) = self.require(key)?;
        value
            .split(',')
            .map(|item| {
                item.trim().parse::<usize>().map_err(|_| {
                    Error::parse_at(*line, format!("key '{key}': '{}' is not a non-negative integer", item.trim()))
                })
            })
            .collect()
    }

    fn waypoints(&self, key: &'static str) -> Result<Vec<Point2D>> {
        let (line, value) = self.require(key)?;
        value
            .split(',')
            .map(|item| {
                let coords: Vec<&str> = item.split_whitespace().collect();
                let bad = || {
                    Error::parse_at(
                        *line,
                        format!("key '{key}': '{}' is not an 'x y' coordinate pair", item.trim()),
                    )
                };
                if coords.len() != 2 {
                    return Err(bad());
                }
                let x = coords[0].parse::<f64>().map_err(|_| bad())?;
                let y = coords[1].parse::<f64>().map_err(|_| bad())?;
                Ok(Point2D::new(x, y))
            })
            .collect()
    }
}

fn at_line<T>(line: usize, result: Result<T>) -> Result<T> {
    result.map_err(|e| Error::parse_at(line, e.to_string()))
}

/// Parses and validates a mission config.
///
/// Every value is range-checked here, so downstream code can consume the
/// sections directly.
pub fn parse_config(text: &str) -> Result<MissionConfig> {
    let raw = RawConfig::scan(text)?;
    let mut config = MissionConfig::default();

    if raw.has_prefix("region.") {
        let line = raw.require("region.delta")?.0;
        config.region = Some(at_line(line, SurveillanceRegion::new(raw.f64("region.delta")?))?);
    }

    if raw.has_prefix("path.") {
        let (line, kind) = raw.require("path.type")?;
        config.path = Some(match kind.as_str() {
            "lemniscate" => {
                let amp_line = raw.require("path.amplitude")?.0;
                at_line(amp_line, SurveillancePath::lemniscate(raw.f64("path.amplitude")?))?
            }
            "waypoints" => {
                let wp_line = raw.require("path.waypoints")?.0;
                at_line(wp_line, SurveillancePath::waypoints(raw.waypoints("path.waypoints")?))?
            }
            other => {
                return Err(Error::parse_at(
                    *line,
                    format!("path.type must be 'lemniscate' or 'waypoints', got '{other}'"),
                ))
            }
        });
    }

    if raw.has_prefix("mc.") {
        let trials = raw.u64("mc.trials")?;
        let seed = raw.u64("mc.seed")?;
        if trials == 0 {
            return Err(Error::parse_at(raw.require("mc.trials")?.0, "mc.trials must be at least 1"));
        }
        config.mc = Some(MonteCarloConfig { trials, seed });
    }

    if raw.has_prefix("sweep.") {
        let section = SweepSection {
            epsilon_min: raw.f64("sweep.epsilon_min")?,
            epsilon_max: raw.f64("sweep.epsilon_max")?,
            epsilon_steps: raw.usize("sweep.epsilon_steps")?,
            scans: raw.usize_list("sweep.scans")?,
        };
        let line = raw.require("sweep.epsilon_min")?.0;
        if !(section.epsilon_min.is_finite() && section.epsilon_min >= 0.0) {
            return Err(Error::parse_at(line, "sweep.epsilon_min must be non-negative"));
        }
        if !(section.epsilon_max.is_finite() && section.epsilon_max >= section.epsilon_min) {
            return Err(Error::parse_at(line, "sweep.epsilon_max must be at least sweep.epsilon_min"));
        }
        if section.epsilon_steps == 0 {
            return Err(Error::parse_at(line, "sweep.epsilon_steps must be at least 1"));
        }
        at_line(raw.require("sweep.scans")?.0, check_scan_counts(&section.scans))?;
        config.sweep = Some(section);
    }

    if raw.has_prefix("rule.") {
        let section = RuleSection {
            ratio_squared: raw.f64("rule.ratio_squared")?,
            target: raw.f64("rule.target")?,
            n_max: raw.usize_opt("rule.n_max")?,
        };
        if !(section.ratio_squared.is_finite() && section.ratio_squared > 0.0) {
            return Err(Error::parse_at(
                raw.require("rule.ratio_squared")?.0,
                "rule.ratio_squared must be positive",
            ));
        }
        if !(section.target > 0.0 && section.target < 1.0) {
            return Err(Error::parse_at(
                raw.require("rule.target")?.0,
                "rule.target must lie strictly between 0 and 1",
            ));
        }
        if section.n_max == Some(0) {
            return Err(Error::parse_at(raw.require("rule.n_max")?.0, "rule.n_max must be at least 1"));
        }
        config.rule = Some(section);
    }

    if raw.has_prefix("sonar.") {
        let params = SonarParameters {
            source_level_db: raw.f64("sonar.source_level_db")?,
            frequency: raw.f64("sonar.frequency")?,
            detection_index: raw.f64("sonar.detection_index")?,
            pulse_duration_s: raw.f64("sonar.pulse_duration_s")?,
            cylinder_length_ft: raw.f64("sonar.cylinder_length_ft")?,
            cylinder_radius_ft: raw.f64("sonar.cylinder_radius_ft")?,
            aspect_angle_rad: raw.f64("sonar.aspect_angle_rad")?,
            sound_speed_mph: raw.f64("sonar.sound_speed_mph")?,
            rl_factor: raw.f64("sonar.rl_factor")?,
        };
        at_line(raw.require("sonar.source_level_db")?.0, params.validate())?;
        config.sonar = Some(params);
    }

    if raw.has_prefix("mission.") {
        let section = MissionSection {
            range_min: raw.f64("mission.range_min")?,
            range_max: raw.f64("mission.range_max")?,
            range_steps: raw.usize("mission.range_steps")?,
            scans: raw.usize_list("mission.scans")?,
        };
        let line = raw.require("mission.range_min")?.0;
        if !(section.range_min.is_finite() && section.range_min > 0.0) {
            return Err(Error::parse_at(line, "mission.range_min must be positive"));
        }
        if !(section.range_max.is_finite() && section.range_max >= section.range_min) {
            return Err(Error::parse_at(line, "mission.range_max must be at least mission.range_min"));
        }
        if section.range_steps == 0 {
            return Err(Error::parse_at(line, "mission.range_steps must be at least 1"));
        }
        at_line(raw.require("mission.scans")?.0, check_scan_counts(&section.scans))?;
        config.mission = Some(section);
    }

    Ok(config)
}

impl MissionConfig {
    pub fn require_region(&self) -> Result<SurveillanceRegion> {
        self.region.ok_or_else(|| Error::parse("missing required key 'region.delta'"))
    }

    pub fn require_path(&self) -> Result<&SurveillancePath> {
        self.path.as_ref().ok_or_else(|| Error::parse("missing required key 'path.type'"))
    }

    pub fn require_mc(&self) -> Result<MonteCarloConfig> {
        self.mc.ok_or_else(|| Error::parse("missing required keys 'mc.trials' and 'mc.seed'"))
    }

    pub fn require_sweep(&self) -> Result<&SweepSection> {
        self.sweep.as_ref().ok_or_else(|| Error::parse("missing sweep section (sweep.epsilon_min, sweep.epsilon_max, sweep.epsilon_steps, sweep.scans)"))
    }

    pub fn require_rule(&self) -> Result<&RuleSection> {
        self.rule.as_ref().ok_or_else(|| Error::parse("missing rule section (rule.ratio_squared, rule.target)"))
    }

    pub fn require_sonar(&self) -> Result<&SonarParameters> {
        self.sonar.as_ref().ok_or_else(|| Error::parse("missing sonar section (sonar.source_level_db, ...)"))
    }

    pub fn require_mission(&self) -> Result<&MissionSection> {
        self.mission.as_ref().ok_or_else(|| Error::parse("missing mission section (mission.range_min, mission.range_max, mission.range_steps, mission.scans)"))
    }

    /// Renders the config back to its text form. `parse_config` of the
    /// result reproduces an equivalent config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |key: &str, value: String| {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&value);
            out.push('\n');
        };
        if let Some(region) = &self.region {
            kv("region.delta", region.delta().to_string());
        }
        match &self.path {
            Some(SurveillancePath::TwoLobeLemniscate { amplitude }) => {
                kv("path.type", "lemniscate".to_string());
                kv("path.amplitude", amplitude.to_string());
            }
            Some(SurveillancePath::ExplicitWaypoints(points)) => {
                kv("path.type", "waypoints".to_string());
                let list =
                    points.iter().map(|p| format!("{} {}", p.x, p.y)).collect::<Vec<_>>().join(", ");
                kv("path.waypoints", list);
            }
            None => {}
        }
        if let Some(mc) = &self.mc {
            kv("mc.trials", mc.trials.to_string());
            kv("mc.seed", mc.seed.to_string());
        }
        if let Some(sweep) = &self.sweep {
            kv("sweep.epsilon_min", sweep.epsilon_min.to_string());
            kv("sweep.epsilon_max", sweep.epsilon_max.to_string());
            kv("sweep.epsilon_steps", sweep.epsilon_steps.to_string());
            kv("sweep.scans", join_usize(&sweep.scans));
        }
        if let Some(rule) = &self.rule {
            kv("rule.ratio_squared", rule.ratio_squared.to_string());
            kv("rule.target", rule.target.to_string());
            if let Some(n_max) = rule.n_max {
                kv("rule.n_max", n_max.to_string());
            }
        }
        if let Some(sonar) = &self.sonar {
            kv("sonar.source_level_db", sonar.source_level_db.to_string());
            kv("sonar.frequency", sonar.frequency.to_string());
            kv("sonar.detection_index", sonar.detection_index.to_string());
            kv("sonar.pulse_duration_s", sonar.pulse_duration_s.to_string());
            kv("sonar.cylinder_length_ft", sonar.cylinder_length_ft.to_string());
            kv("sonar.cylinder_radius_ft", sonar.cylinder_radius_ft.to_string());
            kv("sonar.aspect_angle_rad", sonar.aspect_angle_rad.to_string());
            kv("sonar.sound_speed_mph", sonar.sound_speed_mph.to_string());
            kv("sonar.rl_factor", sonar.rl_factor.to_string());
        }
        if let Some(mission) = &self.mission {
            kv("mission.range_min", mission.range_min.to_string());
            kv("mission.range_max", mission.range_max.to_string());
            kv("mission.range_steps", mission.range_steps.to_string());
            kv("mission.scans", join_usize(&mission.scans));
        }
        out
    }
}

fn join_usize(values: &[usize]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}
