//! Uniform sample grids used for sweeps and range tables.

use crate::error::{Error, Result};

/// An inclusive `[min, max]` interval sampled at `steps` evenly spaced points.
///
/// With `steps == 1` the grid degenerates to the single point `min` and
/// requires `min == max`. The last sample is always exactly `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    min: f64,
    max: f64,
    steps: usize,
}

impl UniformGrid {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::invalid("grid bounds must be finite"));
        }
        if steps == 0 {
            return Err(Error::invalid("grid needs at least one step"));
        }
        if min > max {
            return Err(Error::invalid(format!("grid min {min} exceeds max {max}")));
        }
        if steps == 1 && min != max {
            return Err(Error::invalid("single-step grid requires min == max"));
        }
        Ok(UniformGrid { min, max, steps })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + span * (i as f64) / (last as f64)
                }
            })
            .collect()
    }
}
