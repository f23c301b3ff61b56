//! Scan-count planning for area surveillance.
//!
//! A sensor platform travels a known path over a square search region and
//! scans at evenly spaced path positions; a hidden threat is detected when
//! it lies strictly within the sensor's effective range of some scan point.
//! This crate estimates the resulting detection probability, inverts the
//! closed-form planning rule to a minimum scan count, and chains an active
//! sonar performance model into the same machinery so that acoustic
//! parameters map to effective range and then to mission-level detection
//! probabilities.
//!
//! - [`geometry`]: regions, paths, scan schedules, and a deterministic grid
//!   coverage oracle used to validate the Monte Carlo engine.
//! - [`montecarlo`]: seeded, reproducible detection-probability estimates
//!   and the range/scan-count sweep.
//! - [`analytic`]: the non-overlapping-disc planning rule and its inversion.
//! - [`sonar`]: absorption, transmission loss, target strength, detection
//!   threshold, signal excess, effective-range root finding, and the
//!   mission table.
//! - [`config`], [`csv`], [`concordance`]: the flat config format, CSV
//!   emission, and the reference-concordance report behind the CLI.
//!
//! Monte Carlo results are bit-identical for a fixed seed at any thread
//! count; the `parallel` feature (on by default) runs trial blocks and the
//! coverage oracle on rayon, and disabling it falls back to the sequential
//! implementations without changing any output.

pub mod analytic;
pub mod concordance;
pub mod config;
pub mod csv;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod montecarlo;
pub mod sonar;

pub use error::{Error, Result};
