//! Regions, surveillance paths, scan schedules, and a deterministic grid
//! coverage oracle.
//!
//! All geometry is planar. Lengths share one arbitrary unit; the sonar
//! module specialises it to nautical miles.

use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use std::f64::consts::TAU;

/// A point in the surveillance plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    /// Euclidean distance to `other`.
    pub fn distance_to(&self, other: Point2D) -> f64 {
        self.distance_squared_to(other).sqrt()
    }

    pub(crate) fn distance_squared_to(&self, other: Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// The square search area `[-delta, delta] x [-delta, delta]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveillanceRegion {
    delta: f64,
}

impl SurveillanceRegion {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::invalid(format!("region half-width must be positive, got {delta}")));
        }
        Ok(SurveillanceRegion { delta })
    }

    /// Half-width of the square.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn area(&self) -> f64 {
        4.0 * self.delta * self.delta
    }

    /// Closed-square membership test.
    pub fn contains(&self, p: Point2D) -> bool {
        p.x.abs() <= self.delta && p.y.abs() <= self.delta
    }
}

/// The curve the surveillance platform travels while scanning.
///
/// The two-lobe variant renders the polar equation `r = a cos(theta)` as
/// `(|r| cos(theta), |r| sin(theta))`: two circular lobes of diameter `a`
/// tangent at the origin. A plain circle (or any other shape) can be fed in
/// as explicit waypoints instead.
#[derive(Debug, Clone, PartialEq)]
pub enum SurveillancePath {
    TwoLobeLemniscate { amplitude: f64 },
    ExplicitWaypoints(Vec<Point2D>),
}

impl SurveillancePath {
    pub fn lemniscate(amplitude: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::invalid(format!("path amplitude must be positive, got {amplitude}")));
        }
        Ok(SurveillancePath::TwoLobeLemniscate { amplitude })
    }

    pub fn waypoints(points: Vec<Point2D>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("waypoint path needs at least one point"));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("waypoint ({}, {}) is not finite", p.x, p.y)));
        }
        Ok(SurveillancePath::ExplicitWaypoints(points))
    }

    /// Point on the two-lobe curve at polar angle `theta`.
    ///
    /// Waypoint paths have no angular parameterisation; they are consumed
    /// directly by [`ScanSchedule::from_path`].
    pub fn point_at(&self, theta: f64) -> Result<Point2D> {
        match self {
            SurveillancePath::TwoLobeLemniscate { amplitude } => {
                let r = (amplitude * theta.cos()).abs();
                Ok(Point2D::new(r * theta.cos(), r * theta.sin()))
            }
            SurveillancePath::ExplicitWaypoints(_) => Err(Error::unsupported(
                "waypoint paths have no angular parameterisation",
            )),
        }
    }

    /// Length of the path.
    ///
    /// For the two-lobe curve this is a chord-sum quadrature over
    /// `theta in [0, 2*pi]` with `steps` segments; it converges to the exact
    /// value `2*pi*a` (each lobe is a circle of diameter `a`). For waypoint
    /// paths it is the sum of segment lengths and `steps` is ignored.
    pub fn arc_length(&self, steps: usize) -> Result<f64> {
        if steps < 2 {
            return Err(Error::invalid(format!("arc length needs at least 2 steps, got {steps}")));
        }
        match self {
            SurveillancePath::TwoLobeLemniscate { .. } => {
                let mut total = 0.0;
                let mut prev = self.point_at(0.0)?;
                for i in 1..=steps {
                    let theta = TAU * (i as f64) / (steps as f64);
                    let next = self.point_at(theta)?;
                    total += prev.distance_to(next);
                    prev = next;
                }
                Ok(total)
            }
            SurveillancePath::ExplicitWaypoints(points) => {
                Ok(points.windows(2).map(|w| w[0].distance_to(w[1])).sum())
            }
        }
    }
}

/// Evenly spaced scan angles `theta_j = 2*pi*j / n` for `j = 1..=n`.
pub fn scan_angles(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("scan count must be at least 1"));
    }
    Ok((1..=n).map(|j| TAU * (j as f64) / (n as f64)).collect())
}

/// The ordered scan points visited by the sensor.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSchedule {
    points: Vec<Point2D>,
    source_path: Option<SurveillancePath>,
}

impl ScanSchedule {
    /// Builds the schedule of `n` scans along `path`.
    ///
    /// Two-lobe paths are sampled at the angles from [`scan_angles`];
    /// waypoint paths are taken verbatim and `n` must equal the waypoint
    /// count.
    pub fn from_path(path: &SurveillancePath, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("scan count must be at least 1"));
        }
        match path {
            SurveillancePath::TwoLobeLemniscate { .. } => {
                let points = scan_angles(n)?
                    .into_iter()
                    .map(|theta| path.point_at(theta))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ScanSchedule { points, source_path: Some(path.clone()) })
            }
            SurveillancePath::ExplicitWaypoints(points) => {
                if points.len() != n {
                    return Err(Error::invalid(format!(
                        "scan count {n} does not match waypoint count {}",
                        points.len()
                    )));
                }
                Ok(ScanSchedule { points: points.clone(), source_path: Some(path.clone()) })
            }
        }
    }

    /// Builds a schedule directly from scan points.
    pub fn from_points(points: Vec<Point2D>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("schedule needs at least one scan point"));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("scan point ({}, {}) is not finite", p.x, p.y)));
        }
        Ok(ScanSchedule { points, source_path: None })
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn n_scans(&self) -> usize {
        self.points.len()
    }

    pub fn source_path(&self) -> Option<&SurveillancePath> {
        self.source_path.as_ref()
    }

    /// True iff the disc of radius `epsilon` around every scan point lies
    /// inside the region: `|x_j| + eps <= delta` and `|y_j| + eps <= delta`.
    pub fn discs_contained(&self, epsilon: f64, region: &SurveillanceRegion) -> bool {
        let delta = region.delta();
        self.points
            .iter()
            .all(|p| p.x.abs() + epsilon <= delta && p.y.abs() + epsilon <= delta)
    }

    /// True iff the scan discs of radius `epsilon` have pairwise disjoint
    /// interiors, i.e. all pairwise centre distances are `>= 2*epsilon`.
    /// Tangency counts as non-overlapping.
    pub fn discs_disjoint(&self, epsilon: f64) -> bool {
        let limit = 4.0 * epsilon * epsilon;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                if p.distance_squared_to(*q) < limit {
                    return false;
                }
            }
        }
        true
    }
}

fn coverage_args_check(epsilon: f64, k: usize) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid(format!("coverage radius must be positive, got {epsilon}")));
    }
    if k == 0 {
        return Err(Error::invalid("grid resolution must be at least 1"));
    }
    Ok(())
}

fn covered_in_row(schedule: &ScanSchedule, eps_sq: f64, delta: f64, cell: f64, k: usize, row: usize) -> u64 {
    let y = -delta + cell * (row as f64 + 0.5);
    let mut covered = 0u64;
    for col in 0..k {
        let x = -delta + cell * (col as f64 + 0.5);
        let c = Point2D::new(x, y);
        if schedule.points().iter().any(|p| p.distance_squared_to(c) < eps_sq) {
            covered += 1;
        }
    }
    covered
}

/// Fraction of a `k x k` midpoint grid over the region whose cell centres lie
/// strictly within `epsilon` of at least one scan point.
///
/// This is the independent coverage oracle for the Monte Carlo engine: it is
/// deterministic, uses exact integer counting, and converges to the covered
/// area fraction as `k` grows (error on the order of the covered perimeter
/// divided by `k`).
pub fn coverage_fraction_grid(
    schedule: &ScanSchedule,
    epsilon: f64,
    region: &SurveillanceRegion,
    k: usize,
) -> Result<f64> {
    coverage_args_check(epsilon, k)?;
    let delta = region.delta();
    let cell = 2.0 * delta / (k as f64);
    let eps_sq = epsilon * epsilon;

    #[cfg(feature = "parallel")]
    let covered: u64 = (0..k)
        .into_par_iter()
        .map(|row| covered_in_row(schedule, eps_sq, delta, cell, k, row))
        .sum();

    #[cfg(not(feature = "parallel"))]
    let covered: u64 = (0..k).map(|row| covered_in_row(schedule, eps_sq, delta, cell, k, row)).sum();

    Ok(covered as f64 / (k as f64 * k as f64))
}

/// Single-threaded variant of [`coverage_fraction_grid`].
///
/// Always available; the parallel entry point must agree with it bit for bit
/// (integer cell counts make the reduction order irrelevant).
pub fn coverage_fraction_grid_seq(
    schedule: &ScanSchedule,
    epsilon: f64,
    region: &SurveillanceRegion,
    k: usize,
) -> Result<f64> {
    coverage_args_check(epsilon, k)?;
    let delta = region.delta();
    let cell = 2.0 * delta / (k as f64);
    let eps_sq = epsilon * epsilon;
    let covered: u64 = (0..k).map(|row| covered_in_row(schedule, eps_sq, delta, cell, k, row)).sum();
    Ok(covered as f64 / (k as f64 * k as f64))
}
