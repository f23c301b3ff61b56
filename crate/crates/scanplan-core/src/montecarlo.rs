//! Seeded, reproducible Monte Carlo estimation of the detection probability
//! under a uniform threat prior.
//!
//! # Reproducibility contract
//!
//! Every estimate is a pure function of its inputs and the 64-bit seed,
//! independent of thread count and scheduling:
//!
//! - Trials are partitioned into fixed blocks of [`TRIAL_BLOCK`] trials.
//!   Block `b` draws from `ChaCha8` seeded with the estimate's seed on
//!   stream `b`, so blocks can run in any order on any number of workers.
//! - Per-block detection counts are integers and are summed exactly.
//! - Sweep and mission cells derive their own seeds from the master seed and
//!   the cell indices through [`cell_seed`], so cells are order-independent
//!   and an individual cell can be reproduced standalone.
//!
//! The threat sample sequence depends only on `(seed, trials)`, never on the
//! sensor range or the schedule. Estimates sharing a seed therefore use
//! common random numbers: growing the range or appending scan points can
//! only turn misses into hits, which makes those monotonicity properties
//! exact rather than statistical.

use crate::error::{Error, Result};
use crate::geometry::{Point2D, ScanSchedule, SurveillancePath, SurveillanceRegion};
use crate::grid::UniformGrid;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Number of trials per RNG block.
pub const TRIAL_BLOCK: u64 = 4096;

/// Where the hidden threat is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThreatPrior {
    /// Uniformly distributed over the surveillance square.
    UniformInRegion,
    /// Pinned to a known location. Intended for tests; the point must lie
    /// inside the region.
    FixedPoint(Point2D),
}

/// Trial count and master seed for one estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub trials: u64,
    pub seed: u64,
}

/// One Monte Carlo estimate of the detection probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEstimate {
    /// Detected trials divided by total trials, exactly.
    pub p_hat: f64,
    /// Plug-in binomial standard error `sqrt(p_hat * (1 - p_hat) / trials)`.
    pub std_err: f64,
    pub trials: u64,
    /// Seed this estimate actually used (a derived cell seed inside sweeps).
    pub seed: u64,
    /// Sensor detection range the estimate was computed for.
    pub epsilon: f64,
    pub n_scans: usize,
}

/// Detection estimates over a (sensor range, scan count) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub epsilon_values: Vec<f64>,
    pub n_values: Vec<usize>,
    /// Indexed `[epsilon_index][n_index]`.
    pub estimates: Vec<Vec<DetectionEstimate>>,
}

impl SweepGrid {
    pub fn estimate(&self, eps_index: usize, n_index: usize) -> &DetectionEstimate {
        &self.estimates[eps_index][n_index]
    }
}

/// True iff the threat at `threat` lies strictly within `epsilon` of at
/// least one scan point.
pub fn is_detected(schedule: &ScanSchedule, epsilon: f64, threat: Point2D) -> bool {
    let eps_sq = epsilon * epsilon;
    schedule.points().iter().any(|p| p.distance_squared_to(threat) < eps_sq)
}

/// Draws a threat location from the prior.
///
/// The uniform prior maps two unit draws to `(-delta + 2*delta*u1,
/// -delta + 2*delta*u2)`. A fixed point consumes no randomness.
pub fn sample_threat<R: Rng>(prior: &ThreatPrior, region: &SurveillanceRegion, rng: &mut R) -> Point2D {
    match prior {
        ThreatPrior::UniformInRegion => {
            let delta = region.delta();
            let u1: f64 = rng.random();
            let u2: f64 = rng.random();
            Point2D::new(-delta + 2.0 * delta * u1, -delta + 2.0 * delta * u2)
        }
        ThreatPrior::FixedPoint(p) => *p,
    }
}

/// SplitMix64 step; the documented mixing function behind [`cell_seed`].
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the cell at `(row_index, col_index)` of a sweep or mission grid,
/// derived from the master seed by SplitMix64 mixing.
pub fn cell_seed(seed: u64, row_index: usize, col_index: usize) -> u64 {
    let packed = ((row_index as u64) << 32) ^ (col_index as u64);
    splitmix64(seed ^ splitmix64(packed))
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn block_hits(
    schedule: &ScanSchedule,
    epsilon: f64,
    region: &SurveillanceRegion,
    prior: &ThreatPrior,
    seed: u64,
    block: u64,
    trials_in_block: u64,
) -> u64 {
    let mut rng = block_rng(seed, block);
    let mut hits = 0u64;
    for _ in 0..trials_in_block {
        let threat = sample_threat(prior, region, &mut rng);
        if is_detected(schedule, epsilon, threat) {
            hits += 1;
        }
    }
    hits
}

fn estimate_args_check(
    epsilon: f64,
    region: &SurveillanceRegion,
    prior: &ThreatPrior,
    config: &MonteCarloConfig,
) -> Result<()> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::invalid(format!("sensor range must be non-negative, got {epsilon}")));
    }
    if config.trials == 0 {
        return Err(Error::invalid("trial count must be at least 1"));
    }
    if let ThreatPrior::FixedPoint(p) = prior {
        if !region.contains(*p) {
            return Err(Error::invalid(format!(
                "fixed threat ({}, {}) lies outside the region",
                p.x, p.y
            )));
        }
    }
    Ok(())
}

fn zero_estimate(config: &MonteCarloConfig, n_scans: usize) -> DetectionEstimate {
    DetectionEstimate {
        p_hat: 0.0,
        std_err: 0.0,
        trials: config.trials,
        seed: config.seed,
        epsilon: 0.0,
        n_scans,
    }
}

fn finish_estimate(
    hits: u64,
    epsilon: f64,
    config: &MonteCarloConfig,
    n_scans: usize,
) -> DetectionEstimate {
    let trials = config.trials as f64;
    let p_hat = hits as f64 / trials;
    DetectionEstimate {
        p_hat,
        std_err: (p_hat * (1.0 - p_hat) / trials).sqrt(),
        trials: config.trials,
        seed: config.seed,
        epsilon,
        n_scans,
    }
}

fn block_lengths(trials: u64) -> impl Iterator<Item = (u64, u64)> {
    let blocks = trials.div_ceil(TRIAL_BLOCK);
    (0..blocks).map(move |b| {
        let start = b * TRIAL_BLOCK;
        (b, (trials - start).min(TRIAL_BLOCK))
    })
}

/// Estimates the probability that the threat is detected by at least one
/// scan, as the fraction of sampled threat locations lying within `epsilon`
/// of some scan point.
///
/// A zero `epsilon` is reported as probability exactly 0 without sampling
/// (detection is strict). See the module docs for the reproducibility
/// contract.
pub fn estimate_detection_probability(
    schedule: &ScanSchedule,
    epsilon: f64,
    region: &SurveillanceRegion,
    prior: &ThreatPrior,
    config: &MonteCarloConfig,
) -> Result<DetectionEstimate> {
    estimate_args_check(epsilon, region, prior, config)?;
    if epsilon == 0.0 {
        return Ok(zero_estimate(config, schedule.n_scans()));
    }

    #[cfg(feature = "parallel")]
    let hits: u64 = block_lengths(config.trials)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, len)| block_hits(schedule, epsilon, region, prior, config.seed, b, len))
        .sum();

    #[cfg(not(feature = "parallel"))]
    let hits: u64 = block_lengths(config.trials)
        .map(|(b, len)| block_hits(schedule, epsilon, region, prior, config.seed, b, len))
        .sum();

    Ok(finish_estimate(hits, epsilon, config, schedule.n_scans()))
}

/// Single-threaded variant of [`estimate_detection_probability`].
///
/// Always available; used as the fallback when the `parallel` feature is off
/// and as the reference side of the parallel-equivalence tests and benches.
pub fn estimate_detection_probability_seq(
    schedule: &ScanSchedule,
    epsilon: f64,
    region: &SurveillanceRegion,
    prior: &ThreatPrior,
    config: &MonteCarloConfig,
) -> Result<DetectionEstimate> {
    estimate_args_check(epsilon, region, prior, config)?;
    if epsilon == 0.0 {
        return Ok(zero_estimate(config, schedule.n_scans()));
    }
    let hits: u64 = block_lengths(config.trials)
        .map(|(b, len)| block_hits(schedule, epsilon, region, prior, config.seed, b, len))
        .sum();
    Ok(finish_estimate(hits, epsilon, config, schedule.n_scans()))
}

pub(crate) fn check_scan_counts(n_values: &[usize]) -> Result<()> {
    if n_values.is_empty() {
        return Err(Error::invalid("scan count list must be non-empty"));
    }
    if n_values[0] == 0 {
        return Err(Error::invalid("scan counts must be at least 1"));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("scan counts must be strictly increasing"));
    }
    Ok(())
}

/// Validates a sweep's sensor-range axis: values ascend and only the leading
/// value may be zero.
fn check_epsilon_axis(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid("sensor range grid must be non-empty"));
    }
    if values[0] < 0.0 {
        return Err(Error::invalid("sensor ranges must be non-negative"));
    }
    if values.iter().skip(1).any(|&e| e <= 0.0) {
        return Err(Error::invalid("only the leading sensor range may be zero"));
    }
    Ok(())
}

/// Estimates detection probability over the `(epsilon, N)` grid.
///
/// One schedule is built per scan count; cell `(i, j)` runs with the derived
/// seed `cell_seed(config.seed, i, j)` so any cell reproduces standalone.
pub fn sweep_detection(
    path: &SurveillancePath,
    n_values: &[usize],
    epsilon_grid: UniformGrid,
    region: &SurveillanceRegion,
    prior: &ThreatPrior,
    config: &MonteCarloConfig,
) -> Result<SweepGrid> {
    check_scan_counts(n_values)?;
    let epsilon_values = epsilon_grid.values();
    check_epsilon_axis(&epsilon_values)?;

    let schedules = n_values
        .iter()
        .map(|&n| ScanSchedule::from_path(path, n))
        .collect::<Result<Vec<_>>>()?;

    let mut estimates = Vec::with_capacity(epsilon_values.len());
    for (i, &epsilon) in epsilon_values.iter().enumerate() {
        let mut row = Vec::with_capacity(n_values.len());
        for (j, schedule) in schedules.iter().enumerate() {
            let cell_config = MonteCarloConfig { trials: config.trials, seed: cell_seed(config.seed, i, j) };
            row.push(estimate_detection_probability(schedule, epsilon, region, prior, &cell_config)?);
        }
        estimates.push(row);
    }

    Ok(SweepGrid { epsilon_values, n_values: n_values.to_vec(), estimates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn region40() -> SurveillanceRegion {
        SurveillanceRegion::new(40.0).unwrap()
    }

    fn schedule_at(points: &[(f64, f64)]) -> ScanSchedule {
        ScanSchedule::from_points(points.iter().map(|&(x, y)| Point2D::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn detection_is_strict() {
        let s = schedule_at(&[(0.0, 0.0)]);
        assert!(is_detected(&s, 5.0, Point2D::new(3.0, 0.0)));
        assert!(!is_detected(&s, 5.0, Point2D::new(5.0, 0.0)));
    }

    #[test]
    fn detection_uses_closest_scan() {
        let s = schedule_at(&[(0.0, 0.0), (10.0, 0.0)]);
        assert!(is_detected(&s, 5.0, Point2D::new(8.0, 0.0)));
    }

    #[test]
    fn fixed_point_sampling_is_passthrough() {
        let mut rng = block_rng(7, 0);
        let p = sample_threat(&ThreatPrior::FixedPoint(Point2D::new(1.0, 1.0)), &region40(), &mut rng);
        assert_eq!(p, Point2D::new(1.0, 1.0));
    }

    #[test]
    fn uniform_samples_stay_in_region_and_centre() {
        let region = region40();
        let mut rng = block_rng(42, 0);
        let n = 100_000usize;
        let mut sum_x = 0.0;
        for _ in 0..n {
            let p = sample_threat(&ThreatPrior::UniformInRegion, &region, &mut rng);
            assert!(region.contains(p));
            sum_x += p.x;
        }
        // 3-sigma CLT bound on the mean of uniform(-40, 40)
        let bound = 3.0 * (80.0 / 12f64.sqrt()) / (n as f64).sqrt();
        assert!((sum_x / n as f64).abs() < bound);
    }

    #[test]
    fn full_coverage_estimates_one() {
        let region = region40();
        let s = schedule_at(&[(0.0, 0.0)]);
        let config = MonteCarloConfig { trials: 1000, seed: 3 };
        let eps = 1.5 * std::f64::consts::SQRT_2 * 40.0;
        let est = estimate_detection_probability(&s, eps, &region, &ThreatPrior::UniformInRegion, &config)
            .unwrap();
        assert_eq!(est.p_hat, 1.0);
        assert_eq!(est.std_err, 0.0);
    }

    #[test]
    fn disjoint_disc_estimate_matches_area() {
        let region = region40();
        let s = schedule_at(&[(-20.0, 0.0), (20.0, 0.0)]);
        assert!(s.discs_disjoint(5.0));
        assert!(s.discs_contained(5.0, &region));
        let config = MonteCarloConfig { trials: 100_000, seed: 11 };
        let est = estimate_detection_probability(&s, 5.0, &region, &ThreatPrior::UniformInRegion, &config)
            .unwrap();
        let exact = 2.0 * std::f64::consts::PI * 25.0 / 6400.0;
        assert!((est.p_hat - exact).abs() <= 3.0 * est.std_err, "p_hat {} exact {exact}", est.p_hat);
    }

    #[test]
    fn fixed_threat_is_deterministic() {
        let region = region40();
        let s = schedule_at(&[(0.0, 3.0)]);
        let config = MonteCarloConfig { trials: 64, seed: 0 };
        let est = estimate_detection_probability(
            &s,
            5.0,
            &region,
            &ThreatPrior::FixedPoint(Point2D::new(0.0, 0.0)),
            &config,
        )
        .unwrap();
        assert_eq!(est.p_hat, 1.0);
    }

    #[test]
    fn zero_epsilon_short_circuits() {
        let region = region40();
        let s = schedule_at(&[(0.0, 0.0)]);
        let config = MonteCarloConfig { trials: 10, seed: 0 };
        let est = estimate_detection_probability(&s, 0.0, &region, &ThreatPrior::UniformInRegion, &config)
            .unwrap();
        assert_eq!(est.p_hat, 0.0);
        assert_eq!(est.std_err, 0.0);
        assert!(
            estimate_detection_probability(&s, -1.0, &region, &ThreatPrior::UniformInRegion, &config)
                .is_err()
        );
    }

    #[test]
    fn estimates_are_reproducible_and_parallelism_independent() {
        let region = region40();
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let s = ScanSchedule::from_path(&path, 9).unwrap();
        let config = MonteCarloConfig { trials: 50_000, seed: 99 };
        let prior = ThreatPrior::UniformInRegion;
        let a = estimate_detection_probability(&s, 10.0, &region, &prior, &config).unwrap();
        let b = estimate_detection_probability(&s, 10.0, &region, &prior, &config).unwrap();
        let c = estimate_detection_probability_seq(&s, 10.0, &region, &prior, &config).unwrap();
        assert_eq!(a.p_hat.to_bits(), b.p_hat.to_bits());
        assert_eq!(a.p_hat.to_bits(), c.p_hat.to_bits());
        assert_eq!(a.std_err.to_bits(), c.std_err.to_bits());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn estimates_do_not_depend_on_thread_count() {
        let region = region40();
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let s = ScanSchedule::from_path(&path, 9).unwrap();
        let config = MonteCarloConfig { trials: 30_000, seed: 5 };
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                estimate_detection_probability(
                    &s,
                    12.0,
                    &region,
                    &ThreatPrior::UniformInRegion,
                    &config,
                )
                .unwrap()
            })
        };
        assert_eq!(run(1).p_hat.to_bits(), run(4).p_hat.to_bits());
    }

    #[test]
    fn common_random_numbers_make_epsilon_monotonicity_exact() {
        let region = region40();
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let s = ScanSchedule::from_path(&path, 15).unwrap();
        let config = MonteCarloConfig { trials: 20_000, seed: 314 };
        let prior = ThreatPrior::UniformInRegion;
        let mut last = 0.0;
        for eps in [2.0, 5.0, 10.0, 15.0, 20.0, 30.0] {
            let est = estimate_detection_probability(&s, eps, &region, &prior, &config).unwrap();
            assert!(est.p_hat >= last, "p_hat dropped at eps={eps}");
            last = est.p_hat;
        }
    }

    #[test]
    fn superset_schedule_never_decreases_p_hat() {
        let region = region40();
        let base = schedule_at(&[(-20.0, 0.0), (20.0, 0.0)]);
        let bigger = schedule_at(&[(-20.0, 0.0), (20.0, 0.0), (0.0, 15.0), (5.0, -25.0)]);
        let config = MonteCarloConfig { trials: 20_000, seed: 271 };
        let prior = ThreatPrior::UniformInRegion;
        for eps in [3.0, 7.0, 12.0] {
            let a = estimate_detection_probability(&base, eps, &region, &prior, &config).unwrap();
            let b = estimate_detection_probability(&bigger, eps, &region, &prior, &config).unwrap();
            assert!(b.p_hat >= a.p_hat, "appending scans dropped p_hat at eps={eps}");
        }
    }

    #[test]
    fn sweep_zero_epsilon_cell() {
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let grid = UniformGrid::new(0.0, 0.0, 1).unwrap();
        let config = MonteCarloConfig { trials: 100, seed: 1 };
        let sweep = sweep_detection(
            &path,
            &[5],
            grid,
            &region40(),
            &ThreatPrior::UniformInRegion,
            &config,
        )
        .unwrap();
        assert_eq!(sweep.estimate(0, 0).p_hat, 0.0);
    }

    #[test]
    fn sweep_shape_and_cell_reproducibility() {
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let region = region40();
        let grid = UniformGrid::new(0.0, 30.0, 4).unwrap();
        let config = MonteCarloConfig { trials: 8192, seed: 77 };
        let sweep = sweep_detection(
            &path,
            &[5, 10, 15],
            grid,
            &region,
            &ThreatPrior::UniformInRegion,
            &config,
        )
        .unwrap();
        assert_eq!(sweep.epsilon_values.len(), 4);
        assert_eq!(sweep.estimates.len(), 4);
        assert!(sweep.estimates.iter().all(|row| row.len() == 3));

        // any cell reproduces standalone from its derived seed
        let schedule = ScanSchedule::from_path(&path, 10).unwrap();
        let cell_config = MonteCarloConfig { trials: 8192, seed: cell_seed(77, 2, 1) };
        let standalone = estimate_detection_probability(
            &schedule,
            sweep.epsilon_values[2],
            &region,
            &ThreatPrior::UniformInRegion,
            &cell_config,
        )
        .unwrap();
        assert_eq!(standalone, *sweep.estimate(2, 1));
    }

    #[test]
    fn sweep_rejects_bad_axes() {
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let region = region40();
        let config = MonteCarloConfig { trials: 16, seed: 0 };
        let prior = ThreatPrior::UniformInRegion;
        // non-leading zero
        let grid = UniformGrid::new(0.0, 0.0, 3).unwrap();
        assert!(sweep_detection(&path, &[5], grid, &region, &prior, &config).is_err());
        // empty / unsorted scan lists
        let grid = UniformGrid::new(1.0, 2.0, 2).unwrap();
        assert!(sweep_detection(&path, &[], grid, &region, &prior, &config).is_err());
        assert!(sweep_detection(&path, &[10, 5], grid, &region, &prior, &config).is_err());
    }

    #[test]
    fn single_cell_sweeps_share_samples_across_epsilon() {
        // two one-cell sweeps differ only in epsilon, so their cells use the
        // same derived seed and the detected sets are nested exactly
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let region = region40();
        let config = MonteCarloConfig { trials: 8192, seed: 123 };
        let prior = ThreatPrior::UniformInRegion;
        let at = |eps: f64| {
            let grid = UniformGrid::new(eps, eps, 1).unwrap();
            sweep_detection(&path, &[15], grid, &region, &prior, &config).unwrap().estimate(0, 0).p_hat
        };
        assert!(at(20.0) >= at(10.0));
    }

    #[test]
    fn oracle_agreement_on_lemniscate_coverage() {
        // quick version of the grid-oracle equivalence check
        let region = region40();
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let schedule = ScanSchedule::from_path(&path, 5).unwrap();
        let config = MonteCarloConfig { trials: 50_000, seed: 8 };
        let est = estimate_detection_probability(
            &schedule,
            10.0,
            &region,
            &ThreatPrior::UniformInRegion,
            &config,
        )
        .unwrap();
        let oracle = crate::geometry::coverage_fraction_grid(&schedule, 10.0, &region, 1000).unwrap();
        assert!((est.p_hat - oracle).abs() <= 3.0 * est.std_err + 0.005);
    }

    #[test]
    fn estimate_exactness_of_p_hat() {
        // p_hat must be an exact integer ratio
        let region = region40();
        let s = schedule_at(&[(0.0, 0.0)]);
        let config = MonteCarloConfig { trials: 4097, seed: 21 };
        let est = estimate_detection_probability(&s, 10.0, &region, &ThreatPrior::UniformInRegion, &config)
            .unwrap();
        let hits = (est.p_hat * 4097.0).round();
        assert_eq!(est.p_hat, hits / 4097.0);
        assert_abs_diff_eq!(
            est.std_err,
            (est.p_hat * (1.0 - est.p_hat) / 4097.0).sqrt(),
            epsilon = 0.0
        );
    }
}
