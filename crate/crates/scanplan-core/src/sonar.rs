//! Active-sonar performance chain: absorption, two-way transmission loss,
//! cylinder target strength, detection threshold, signal excess, and the
//! signal-excess-to-detection-probability mission pipeline.
//!
//! Unit conventions (declared, since the chain mixes systems):
//! ranges in nautical miles, absorption in dB per nautical mile, cylinder
//! dimensions and wavelength in feet, sound speed supplied in miles per
//! hour and converted to feet per second for the wavelength, everything
//! else in dB. A target strength of `-inf` (broadside aspect exactly
//! perpendicular) is a first-class value: it propagates through the chain
//! and simply means "never above threshold".

use crate::error::{Error, Result};
use crate::geometry::{ScanSchedule, SurveillancePath, SurveillanceRegion};
use crate::grid::UniformGrid;
use crate::montecarlo::{
    cell_seed, check_scan_counts, estimate_detection_probability, DetectionEstimate,
    MonteCarloConfig, ThreatPrior,
};

use std::f64::consts::PI;

const FEET_PER_MILE: f64 = 5280.0;
const SECONDS_PER_HOUR: f64 = 3600.0;

/// Everything the sonar chain needs about the sensor, the environment, and
/// the cylindrical target model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SonarParameters {
    /// Source level SL in dB.
    pub source_level_db: f64,
    /// Ping frequency as consumed by the absorption formula.
    pub frequency: f64,
    /// Detection index d (dimensionless).
    pub detection_index: f64,
    /// Waveform duration T in seconds.
    pub pulse_duration_s: f64,
    /// Target cylinder length L in feet.
    pub cylinder_length_ft: f64,
    /// Target cylinder radius in feet.
    pub cylinder_radius_ft: f64,
    /// Aspect angle off-beam in radians.
    pub aspect_angle_rad: f64,
    /// Sound speed in miles per hour.
    pub sound_speed_mph: f64,
    /// Reverberation loss as a multiple of SL (applied in the dB domain).
    pub rl_factor: f64,
}

impl SonarParameters {
    pub fn validate(&self) -> Result<()> {
        if !self.source_level_db.is_finite() {
            return Err(Error::invalid("source level must be finite"));
        }
        if !(self.frequency.is_finite() && self.frequency >= 0.0) {
            return Err(Error::invalid("frequency must be non-negative"));
        }
        if !(self.detection_index > 0.0) {
            return Err(Error::invalid("detection index must be positive"));
        }
        if !(self.pulse_duration_s > 0.0) {
            return Err(Error::invalid("pulse duration must be positive"));
        }
        if !(self.cylinder_length_ft > 0.0) {
            return Err(Error::invalid("cylinder length must be positive"));
        }
        if !(self.cylinder_radius_ft > 0.0) {
            return Err(Error::invalid("cylinder radius must be positive"));
        }
        if !self.aspect_angle_rad.is_finite() {
            return Err(Error::invalid("aspect angle must be finite"));
        }
        if !(self.sound_speed_mph > 0.0) {
            return Err(Error::invalid("sound speed must be positive"));
        }
        if !(self.rl_factor.is_finite() && self.rl_factor >= 0.0) {
            return Err(Error::invalid("reverberation factor must be non-negative"));
        }
        Ok(())
    }
}

/// Absorption coefficient in dB per nautical mile:
/// `0.1 f^2/(1 + f^2) + 40 f^2/(4100 + f^2) + 2.75e-4 f^2 + 0.003`.
///
/// Even in `f`; the constant 0.003 dB floor means it never reaches zero.
pub fn absorption_coefficient(frequency: f64) -> f64 {
    let f_sq = frequency * frequency;
    0.1 * f_sq / (1.0 + f_sq) + 40.0 * f_sq / (4100.0 + f_sq) + 2.75e-4 * f_sq + 0.003
}

/// One-way transmission loss `66 + 10 log10(R) + 2 alpha R` in dB.
pub fn transmission_loss(range_nmi: f64, alpha: f64) -> Result<f64> {
    if !(range_nmi.is_finite() && range_nmi > 0.0) {
        return Err(Error::domain(format!("range must be positive, got {range_nmi}")));
    }
    Ok(transmission_loss_unchecked(range_nmi, alpha))
}

fn transmission_loss_unchecked(range_nmi: f64, alpha: f64) -> f64 {
    66.0 + 10.0 * range_nmi.log10() + 2.0 * alpha * range_nmi
}

/// Wavelength in feet for a sound speed in miles per hour.
pub fn wavelength_ft(sound_speed_mph: f64, frequency: f64) -> Result<f64> {
    if !(frequency.is_finite() && frequency > 0.0) {
        return Err(Error::invalid(format!("frequency must be positive, got {frequency}")));
    }
    if !(sound_speed_mph.is_finite() && sound_speed_mph > 0.0) {
        return Err(Error::invalid(format!("sound speed must be positive, got {sound_speed_mph}")));
    }
    let speed_fps = sound_speed_mph * FEET_PER_MILE / SECONDS_PER_HOUR;
    Ok(speed_fps / frequency)
}

/// Cylinder target strength in dB:
/// `10 log10( (a L^2 / 2 lambda) * (sin(beta)/beta)^2 * cos(psi)^2 )`
/// with `beta = (2 pi L / lambda) sin(psi)`.
///
/// Returns `-inf` when the bracket vanishes (`psi = pi/2`); that is a
/// representable result, not an error. The formula is even in `psi`, and the
/// implementation evaluates it through `|psi|` so that evenness holds bit
/// for bit.
pub fn target_strength(length_ft: f64, radius_ft: f64, lambda_ft: f64, psi_rad: f64) -> Result<f64> {
    if !(length_ft > 0.0 && radius_ft > 0.0 && lambda_ft > 0.0) {
        return Err(Error::invalid("cylinder dimensions and wavelength must be positive"));
    }
    if !psi_rad.is_finite() {
        return Err(Error::invalid("aspect angle must be finite"));
    }
    let psi = psi_rad.abs();
    let beta = 2.0 * PI * length_ft / lambda_ft * psi.sin();
    let sinc = if beta == 0.0 { 1.0 } else { beta.sin() / beta };
    // sin(pi/2 - x) = cos(x); this form is exactly zero at the representable
    // pi/2, so a perpendicular aspect really hits the -inf sentinel
    let cos_psi = (std::f64::consts::FRAC_PI_2 - psi).sin();
    let linear = radius_ft * length_ft * length_ft / (2.0 * lambda_ft) * sinc * sinc * cos_psi * cos_psi;
    if linear == 0.0 {
        Ok(f64::NEG_INFINITY)
    } else {
        Ok(10.0 * linear.log10())
    }
}

/// Detection threshold `10 log10(d / 2T)` in dB.
pub fn detection_threshold(detection_index: f64, pulse_duration_s: f64) -> Result<f64> {
    if !(detection_index > 0.0) {
        return Err(Error::invalid(format!("detection index must be positive, got {detection_index}")));
    }
    if !(pulse_duration_s > 0.0) {
        return Err(Error::invalid(format!("pulse duration must be positive, got {pulse_duration_s}")));
    }
    Ok(10.0 * (detection_index / (2.0 * pulse_duration_s)).log10())
}

/// The range-independent pieces of the signal-excess chain, precomputed so
/// the curve and the root finder evaluate one cheap expression per range.
#[derive(Debug, Clone, Copy)]
struct SeTerms {
    source_level_db: f64,
    alpha: f64,
    ts_db: f64,
    rl_db: f64,
    dt_db: f64,
}

impl SeTerms {
    fn from_params(params: &SonarParameters) -> Result<Self> {
        params.validate()?;
        let alpha = absorption_coefficient(params.frequency);
        let lambda = wavelength_ft(params.sound_speed_mph, params.frequency)?;
        let ts_db = target_strength(
            params.cylinder_length_ft,
            params.cylinder_radius_ft,
            lambda,
            params.aspect_angle_rad,
        )?;
        let rl_db = params.rl_factor * params.source_level_db;
        let dt_db = detection_threshold(params.detection_index, params.pulse_duration_s)?;
        Ok(SeTerms { source_level_db: params.source_level_db, alpha, ts_db, rl_db, dt_db })
    }

    fn at(&self, range_nmi: f64) -> f64 {
        self.source_level_db - 2.0 * transmission_loss_unchecked(range_nmi, self.alpha) + self.ts_db
            - self.rl_db
            - self.dt_db
    }
}

/// Signal excess `SL - 2 TL + TS - RL - DT` in dB at the given range.
pub fn signal_excess(params: &SonarParameters, range_nmi: f64) -> Result<f64> {
    if !(range_nmi.is_finite() && range_nmi > 0.0) {
        return Err(Error::domain(format!("range must be positive, got {range_nmi}")));
    }
    Ok(SeTerms::from_params(params)?.at(range_nmi))
}

/// A sampled signal-excess-vs-range curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SeCurve {
    /// `(range, SE in dB)` samples; ranges strictly increasing and positive.
    pub samples: Vec<(f64, f64)>,
}

/// Samples the signal excess over a uniform range grid.
pub fn se_curve(params: &SonarParameters, range_grid: UniformGrid) -> Result<SeCurve> {
    if !(range_grid.min() > 0.0) {
        return Err(Error::invalid("range grid must start above zero"));
    }
    if range_grid.steps() < 2 || range_grid.min() >= range_grid.max() {
        return Err(Error::invalid("range grid needs at least two distinct samples"));
    }
    let terms = SeTerms::from_params(params)?;
    let samples = range_grid.values().into_iter().map(|r| (r, terms.at(r))).collect();
    Ok(SeCurve { samples })
}

/// Outcome of the effective-range search on `[r_lo, r_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveRange {
    /// SE crosses zero inside the bracket at this range.
    Root(f64),
    /// SE is still non-negative at `r_hi`; detection reaches the whole
    /// bracket and the returned value is `r_hi` itself.
    RangeLimited(f64),
    /// SE is already non-positive at `r_lo`; nothing in the bracket is
    /// detectable.
    NoDetection,
}

/// Bisection root search for `se(r) = 0` on a bracket where `se` is
/// strictly decreasing.
///
/// Returns [`EffectiveRange::Root`] with `|se(root)| < tol_db` when the sign
/// changes across the bracket, and the two degenerate outcomes otherwise.
/// Bisection is used for its unconditional convergence; the iteration cap
/// (200) exists only to catch a discontinuous `se`.
pub fn effective_range_of<F: Fn(f64) -> f64>(
    se: F,
    r_lo: f64,
    r_hi: f64,
    tol_db: f64,
) -> Result<EffectiveRange> {
    if !(r_lo.is_finite() && r_hi.is_finite() && r_lo > 0.0 && r_lo < r_hi) {
        return Err(Error::invalid(format!("invalid bracket [{r_lo}, {r_hi}]")));
    }
    if !(tol_db > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol_db}")));
    }
    if se(r_hi) >= 0.0 {
        return Ok(EffectiveRange::RangeLimited(r_hi));
    }
    if se(r_lo) <= 0.0 {
        return Ok(EffectiveRange::NoDetection);
    }
    let (mut lo, mut hi) = (r_lo, r_hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let value = se(mid);
        if value.abs() < tol_db {
            return Ok(EffectiveRange::Root(mid));
        }
        if value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::domain("bisection did not reach tolerance; signal excess may be discontinuous"))
}

/// Effective detection range of the configured sonar: the range where the
/// signal excess crosses zero.
pub fn effective_range(
    params: &SonarParameters,
    r_lo: f64,
    r_hi: f64,
    tol_db: f64,
) -> Result<EffectiveRange> {
    let terms = SeTerms::from_params(params)?;
    effective_range_of(|r| terms.at(r), r_lo, r_hi, tol_db)
}

/// One mission table row: the signal excess at a range and the detection
/// probability of each candidate scan count with the sensor range set to
/// that range.
#[derive(Debug, Clone, PartialEq)]
pub struct MissionRow {
    pub range_nmi: f64,
    pub se_db: f64,
    /// One estimate per scan count, in `n_values` order.
    pub estimates: Vec<DetectionEstimate>,
}

/// The full mission table plus an echo of the inputs that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MissionReport {
    pub params: SonarParameters,
    pub region: SurveillanceRegion,
    pub path: SurveillancePath,
    pub n_values: Vec<usize>,
    pub rows: Vec<MissionRow>,
}

/// Builds the mission table: for every range `R` in the grid, the signal
/// excess `SE(R)` and, for each scan count, a Monte Carlo detection estimate
/// with the sensor range set to `R` (the sonar's reach at that row) under a
/// uniform threat prior.
///
/// Row `i`, scan-count column `j` uses the derived seed
/// `cell_seed(config.seed, i, j)`, so any cell reproduces standalone.
pub fn mission_report(
    params: &SonarParameters,
    path: &SurveillancePath,
    region: &SurveillanceRegion,
    n_values: &[usize],
    range_grid: UniformGrid,
    config: &MonteCarloConfig,
) -> Result<MissionReport> {
    check_scan_counts(n_values)?;
    if !(range_grid.min() > 0.0) {
        return Err(Error::invalid("range grid must start above zero"));
    }
    let terms = SeTerms::from_params(params)?;
    let schedules = n_values
        .iter()
        .map(|&n| ScanSchedule::from_path(path, n))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(range_grid.steps());
    for (i, range) in range_grid.values().into_iter().enumerate() {
        let mut estimates = Vec::with_capacity(n_values.len());
        for (j, schedule) in schedules.iter().enumerate() {
            let cell_config = MonteCarloConfig { trials: config.trials, seed: cell_seed(config.seed, i, j) };
            estimates.push(estimate_detection_probability(
                schedule,
                range,
                region,
                &ThreatPrior::UniformInRegion,
                &cell_config,
            )?);
        }
        rows.push(MissionRow { range_nmi: range, se_db: terms.at(range), estimates });
    }

    Ok(MissionReport {
        params: *params,
        region: *region,
        path: path.clone(),
        n_values: n_values.to_vec(),
        rows,
    })
}
