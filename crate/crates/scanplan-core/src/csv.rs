//! CSV emission for sweep grids, signal-excess curves, mission tables, and
//! the concordance report.
//!
//! All numbers are printed with six decimal places and `\n` line endings so
//! the output is byte-deterministic for fixed inputs. Negative infinity
//! (a possible signal excess) renders as `-inf`.

use crate::analytic::RuleOfThumbCurve;
use crate::concordance::ConcordanceReport;
use crate::montecarlo::SweepGrid;
use crate::sonar::{MissionReport, SeCurve};

/// Fixed six-decimal rendering used by every emitter.
pub(crate) fn fmt6(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        return "-inf".to_string();
    }
    if x == f64::INFINITY {
        return "inf".to_string();
    }
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Header `epsilon,pd_N<k>,se_N<k>,...` with one probability /
/// standard-error pair per scan count; one row per sensor range.
pub fn emit_sweep_csv(grid: &SweepGrid) -> String {
    let mut out = String::from("epsilon");
    for n in &grid.n_values {
        out.push_str(&format!(",pd_N{n},se_N{n}"));
    }
    out.push('\n');
    for (i, epsilon) in grid.epsilon_values.iter().enumerate() {
        out.push_str(&fmt6(*epsilon));
        for estimate in &grid.estimates[i] {
            out.push(',');
            out.push_str(&fmt6(estimate.p_hat));
            out.push(',');
            out.push_str(&fmt6(estimate.std_err));
        }
        out.push('\n');
    }
    out
}

/// Header `range,se_db,pd_N<k>...`; one row per range sample.
pub fn emit_mission_csv(report: &MissionReport) -> String {
    let mut out = String::from("range,se_db");
    for n in &report.n_values {
        out.push_str(&format!(",pd_N{n}"));
    }
    out.push('\n');
    for row in &report.rows {
        out.push_str(&fmt6(row.range_nmi));
        out.push(',');
        out.push_str(&fmt6(row.se_db));
        for estimate in &row.estimates {
            out.push(',');
            out.push_str(&fmt6(estimate.p_hat));
        }
        out.push('\n');
    }
    out
}

/// Header `range,se_db`; one row per range sample.
pub fn emit_se_curve_csv(curve: &SeCurve) -> String {
    let mut out = String::from("range,se_db\n");
    for (range, se) in &curve.samples {
        out.push_str(&fmt6(*range));
        out.push(',');
        out.push_str(&fmt6(*se));
        out.push('\n');
    }
    out
}

/// Header `n,pd`; one row per scan count.
pub fn emit_rule_curve_csv(curve: &RuleOfThumbCurve) -> String {
    let mut out = String::from("n,pd\n");
    for (n, p) in &curve.points {
        out.push_str(&n.to_string());
        out.push(',');
        out.push_str(&fmt6(*p));
        out.push('\n');
    }
    out
}

/// Header `anchor,stated,computed,abs_difference,claim,notes`; free-text
/// fields are quoted when needed.
pub fn emit_concordance_csv(report: &ConcordanceReport) -> String {
    let mut out = String::from("anchor,stated,computed,abs_difference,claim,notes\n");
    for row in &report.rows {
        out.push_str(row.id);
        out.push(',');
        out.push_str(&fmt6(row.stated));
        out.push(',');
        out.push_str(&fmt6(row.computed));
        out.push(',');
        match row.difference {
            Some(d) => out.push_str(&fmt6(d)),
            None => out.push_str("not comparable"),
        }
        out.push(',');
        out.push_str(&csv_field(row.claim));
        out.push(',');
        out.push_str(&csv_field(&row.notes));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{SurveillancePath, SurveillanceRegion};
    use crate::grid::UniformGrid;
    use crate::montecarlo::{sweep_detection, MonteCarloConfig, ThreatPrior};

    fn small_sweep(seed: u64) -> SweepGrid {
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let region = SurveillanceRegion::new(40.0).unwrap();
        sweep_detection(
            &path,
            &[5, 10],
            UniformGrid::new(0.0, 10.0, 2).unwrap(),
            &region,
            &ThreatPrior::UniformInRegion,
            &MonteCarloConfig { trials: 4096, seed },
        )
        .unwrap()
    }

    #[test]
    fn zero_cell_sweep_renders_exactly() {
        let path = SurveillancePath::lemniscate(20.0).unwrap();
        let region = SurveillanceRegion::new(40.0).unwrap();
        let grid = sweep_detection(
            &path,
            &[5],
            UniformGrid::new(0.0, 0.0, 1).unwrap(),
            &region,
            &ThreatPrior::UniformInRegion,
            &MonteCarloConfig { trials: 100, seed: 1 },
        )
        .unwrap();
        assert_eq!(emit_sweep_csv(&grid), "epsilon,pd_N5,se_N5\n0.000000,0.000000,0.000000\n");
    }

    #[test]
    fn sweep_csv_shape_and_determinism() {
        let a = emit_sweep_csv(&small_sweep(9));
        let b = emit_sweep_csv(&small_sweep(9));
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 3); // header + 2 epsilon rows
        assert_eq!(a.lines().next().unwrap(), "epsilon,pd_N5,se_N5,pd_N10,se_N10");
    }

    #[test]
    fn sweep_csv_parses_back_at_six_decimals() {
        let grid = small_sweep(5);
        let text = emit_sweep_csv(&grid);
        for (i, line) in text.lines().skip(1).enumerate() {
            let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            assert_eq!(fields.len(), 1 + 2 * grid.n_values.len());
            assert!((fields[0] - grid.epsilon_values[i]).abs() < 5e-7);
            for (j, _) in grid.n_values.iter().enumerate() {
                assert!((fields[1 + 2 * j] - grid.estimates[i][j].p_hat).abs() < 5e-7);
            }
        }
    }

    #[test]
    fn mission_csv_renders_neg_infinity() {
        use crate::sonar::{mission_report, SonarParameters};
        let params = SonarParameters {
            source_level_db: 250.0,
            frequency: 10.0,
            detection_index: 25.0,
            pulse_duration_s: 100.0,
            cylinder_length_ft: 300.0,
            cylinder_radius_ft: 15.0,
            aspect_angle_rad: std::f64::consts::FRAC_PI_2,
            sound_speed_mph: 3355.0,
            rl_factor: 0.1,
        };
        let path = SurveillancePath::lemniscate(16.0).unwrap();
        let region = SurveillanceRegion::new(200.0).unwrap();
        let report = mission_report(
            &params,
            &path,
            &region,
            &[5],
            UniformGrid::new(10.0, 20.0, 2).unwrap(),
            &MonteCarloConfig { trials: 64, seed: 2 },
        )
        .unwrap();
        let text = emit_mission_csv(&report);
        assert_eq!(text.lines().next().unwrap(), "range,se_db,pd_N5");
        assert!(text.lines().nth(1).unwrap().starts_with("10.000000,-inf,"));
    }

    #[test]
    fn fmt6_normalises_negative_zero() {
        assert_eq!(fmt6(-0.0), "0.000000");
        assert_eq!(fmt6(-1e-9), "0.000000");
        assert_eq!(fmt6(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn quoting_only_when_needed() {
        assert_eq!(csv_field("plain note"), "plain note");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
