//! Closed-form detection probability for non-overlapping, fully contained
//! scan discs, and its inversion to a minimum scan count.
//!
//! With the threat uniform over the square of half-width `delta` and every
//! scan disc of radius `epsilon` inside the region, a single scan hits with
//! probability `q = pi * eps^2 / (4 * delta^2)` (disc area over region
//! area). Treating scans as independent gives the planning rule
//! `P(N) = 1 - (1 - q)^N`, which is deliberately conservative: it ignores
//! that a real schedule's discs cannot re-cover already searched area.

use crate::error::{Error, Result};

/// Probability that one contained scan disc covers the threat:
/// `pi * epsilon^2 / (4 * delta^2)`.
///
/// Errors when the ratio exceeds 1, i.e. the disc is larger than the
/// region and the contained-disc geometry no longer holds.
pub fn single_scan_hit_probability(epsilon: f64, delta: f64) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid(format!("sensor range must be positive, got {epsilon}")));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::invalid(format!("region half-width must be positive, got {delta}")));
    }
    let ratio = epsilon / delta;
    let q = std::f64::consts::PI * ratio * ratio / 4.0;
    if q > 1.0 {
        return Err(Error::domain(format!(
            "hit probability {q:.6} exceeds 1; the scan disc does not fit the region"
        )));
    }
    Ok(q)
}

/// `1 - (1 - q)^n`, the planning-rule detection probability after `n`
/// independent scans with per-scan hit probability `q`.
pub fn analytic_detection_probability(q: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("hit probability must lie in [0, 1], got {q}")));
    }
    if n == 0 {
        return Err(Error::invalid("scan count must be at least 1"));
    }
    Ok(1.0 - (1.0 - q).powf(n as f64))
}

/// Smallest `N >= 1` with `1 - (1 - q)^N >= p_target`.
///
/// Computed as `ceil(ln(1 - p_target) / ln(1 - q))` and then verified by
/// direct evaluation at the neighbours, which immunises the answer against
/// logarithm rounding.
pub fn min_scans(p_target: f64, q: f64) -> Result<usize> {
    if !(p_target > 0.0 && p_target < 1.0) {
        return Err(Error::invalid(format!("target probability must lie in (0, 1), got {p_target}")));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain(format!("target unreachable: hit probability is {q}")));
    }
    if q == 1.0 {
        return Ok(1);
    }
    if 1.0 - q == 1.0 {
        // q below f64 resolution: (1 - q)^N is computationally 1 for all N
        return Err(Error::domain(format!("hit probability {q} is too small to invert")));
    }

    let guess = ((1.0 - p_target).ln() / (1.0 - q).ln()).ceil();
    let mut n = if guess.is_finite() && guess >= 1.0 { guess as usize } else { 1 };
    for _ in 0..64 {
        if n > 1 && analytic_detection_probability(q, n - 1)? >= p_target {
            n -= 1;
        } else if analytic_detection_probability(q, n)? < p_target {
            n += 1;
        } else {
            return Ok(n);
        }
    }
    Err(Error::domain("minimum scan count did not stabilise near the closed-form estimate"))
}

/// How the planning-rule ratio is supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleOfThumbInput {
    /// `rho = (epsilon / delta)^2` directly.
    RatioSquared(f64),
    /// The raw lengths; `rho` is computed from them.
    EpsilonDelta { epsilon: f64, delta: f64 },
}

impl RuleOfThumbInput {
    /// The single-scan hit probability `q = pi * rho / 4`.
    pub fn hit_probability(&self) -> Result<f64> {
        match *self {
            RuleOfThumbInput::RatioSquared(rho) => {
                if !(rho.is_finite() && rho > 0.0) {
                    return Err(Error::invalid(format!("ratio squared must be positive, got {rho}")));
                }
                let q = std::f64::consts::PI * rho / 4.0;
                if q > 1.0 {
                    return Err(Error::domain(format!(
                        "hit probability {q:.6} exceeds 1; ratio squared {rho} is too large"
                    )));
                }
                Ok(q)
            }
            RuleOfThumbInput::EpsilonDelta { epsilon, delta } => {
                single_scan_hit_probability(epsilon, delta)
            }
        }
    }
}

/// The planning-rule curve `N -> 1 - (1 - q)^N`, tabulated for `N = 1..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleOfThumbCurve {
    pub q: f64,
    /// `(N, detection probability)` pairs in ascending `N`.
    pub points: Vec<(usize, f64)>,
}

pub fn rule_of_thumb_curve(input: RuleOfThumbInput, n_max: usize) -> Result<RuleOfThumbCurve> {
    if n_max == 0 {
        return Err(Error::invalid("curve needs at least one scan count"));
    }
    let q = input.hit_probability()?;
    let points = (1..=n_max)
        .map(|n| Ok((n, analytic_detection_probability(q, n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RuleOfThumbCurve { q, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const Q_RHO_005: f64 = 0.0392699; // pi * 0.05 / 4, rounded as used in the worked example

    #[test]
    fn hit_probability_examples() {
        assert_abs_diff_eq!(
            single_scan_hit_probability(10.0, 40.0).unwrap(),
            0.04908738521234052,
            epsilon = 1e-12
        );
        let rho = RuleOfThumbInput::RatioSquared(0.05);
        assert_abs_diff_eq!(rho.hit_probability().unwrap(), 0.039269908169872414, epsilon = 1e-12);
        assert!(single_scan_hit_probability(0.0, 40.0).is_err());
    }

    #[test]
    fn hit_probability_rejects_oversized_disc() {
        // q = pi * 2500 / 6400 > 1
        assert!(matches!(single_scan_hit_probability(50.0, 40.0), Err(Error::Domain(_))));
        assert!(matches!(
            RuleOfThumbInput::RatioSquared(2.0).hit_probability(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn detection_probability_examples() {
        let q = 0.3;
        assert_abs_diff_eq!(analytic_detection_probability(q, 1).unwrap(), q, epsilon = 1e-15);
        assert_abs_diff_eq!(
            analytic_detection_probability(Q_RHO_005, 30).unwrap(),
            0.69939,
            epsilon = 1e-4
        );
        assert_eq!(analytic_detection_probability(1.0, 17).unwrap(), 1.0);
    }

    #[test]
    fn min_scans_examples() {
        assert_eq!(min_scans(0.5, 0.5).unwrap(), 1);
        assert_eq!(min_scans(0.7, Q_RHO_005).unwrap(), 31);
        // closed threshold: 1 - 0.25 = 0.75 counts as reaching 0.75
        assert_eq!(min_scans(0.75, 0.5).unwrap(), 2);
        assert_eq!(min_scans(0.9, 1.0).unwrap(), 1);
    }

    #[test]
    fn min_scans_brackets_the_target() {
        let n = min_scans(0.7, Q_RHO_005).unwrap();
        assert!(analytic_detection_probability(Q_RHO_005, n - 1).unwrap() < 0.7);
        assert!(analytic_detection_probability(Q_RHO_005, n).unwrap() >= 0.7);
    }

    #[test]
    fn min_scans_rejects_degenerate_inputs() {
        assert!(matches!(min_scans(0.5, 0.0), Err(Error::Domain(_))));
        assert!(min_scans(0.0, 0.5).is_err());
        assert!(min_scans(1.0, 0.5).is_err());
        assert!(matches!(min_scans(0.5, 1e-300), Err(Error::Domain(_))));
    }

    #[test]
    fn curve_examples() {
        let one = rule_of_thumb_curve(RuleOfThumbInput::RatioSquared(0.05), 1).unwrap();
        assert_eq!(one.points.len(), 1);
        assert_eq!(one.points[0].0, 1);
        assert_abs_diff_eq!(one.points[0].1, one.q, epsilon = 0.0);

        let thirty = rule_of_thumb_curve(RuleOfThumbInput::RatioSquared(0.05), 30).unwrap();
        assert_abs_diff_eq!(thirty.points.last().unwrap().1, 0.69939, epsilon = 1e-4);

        let certain = rule_of_thumb_curve(RuleOfThumbInput::RatioSquared(4.0 / std::f64::consts::PI), 3)
            .unwrap();
        assert!(certain.points.iter().all(|&(_, p)| p == 1.0));
    }

    #[test]
    fn curve_is_strictly_increasing_for_interior_q() {
        let curve = rule_of_thumb_curve(RuleOfThumbInput::RatioSquared(0.05), 60).unwrap();
        for w in curve.points.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
    }

    #[test]
    fn consistency_with_coverage_oracle_for_single_scan() {
        use crate::geometry::{coverage_fraction_grid, Point2D, ScanSchedule, SurveillanceRegion};
        let region = SurveillanceRegion::new(40.0).unwrap();
        let schedule = ScanSchedule::from_points(vec![Point2D::new(0.0, 0.0)]).unwrap();
        let q = single_scan_hit_probability(10.0, 40.0).unwrap();
        let p1 = analytic_detection_probability(q, 1).unwrap();
        let grid = coverage_fraction_grid(&schedule, 10.0, &region, 2000).unwrap();
        assert!((p1 - grid).abs() < 1e-3);
    }

    #[test]
    fn product_form_close_to_exact_union_when_discs_disjoint() {
        use crate::geometry::{coverage_fraction_grid, Point2D, ScanSchedule, SurveillanceRegion};
        let region = SurveillanceRegion::new(40.0).unwrap();
        let schedule =
            ScanSchedule::from_points(vec![Point2D::new(-20.0, 0.0), Point2D::new(20.0, 0.0)]).unwrap();
        assert!(schedule.discs_disjoint(5.0) && schedule.discs_contained(5.0, &region));
        let q = single_scan_hit_probability(5.0, 40.0).unwrap();
        let product_form = analytic_detection_probability(q, 2).unwrap();
        let grid = coverage_fraction_grid(&schedule, 5.0, &region, 2000).unwrap();
        assert!((product_form - grid).abs() < 0.005);
    }
}
