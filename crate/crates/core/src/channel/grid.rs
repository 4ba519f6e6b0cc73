use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Geometry of the sampled flight plane.
///
/// Positions are stored row-major: index `j * n1 + i` is column `i`, row `j`.
/// Coordinates are centered so that the middle of the grid sits at the
/// origin, directly above the transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Number of columns (x direction).
    pub n1: usize,
    /// Number of rows (y direction).
    pub n2: usize,
    /// Spacing between neighbouring positions, meters.
    pub step: f64,
    /// Height of the flight plane above the transmitter, meters.
    pub height: f64,
    /// Carrier frequency, Hz.
    pub carrier_freq: f64,
}

impl GridSpec {
    pub fn new(n1: usize, n2: usize, step: f64, height: f64, carrier_freq: f64) -> Result<Self> {
        let grid = GridSpec {
            n1,
            n2,
            step,
            height,
            carrier_freq,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 < 2 || self.n2 < 2 {
            return Err(Error::invalid(
                "grid",
                format!("need at least 2x2 positions, got {}x{}", self.n1, self.n2),
            ));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::invalid("step", format!("must be > 0, got {}", self.step)));
        }
        if !(self.height >= 0.0 && self.height.is_finite()) {
            return Err(Error::invalid("height", format!("must be >= 0, got {}", self.height)));
        }
        if !(self.carrier_freq > 0.0 && self.carrier_freq.is_finite()) {
            return Err(Error::invalid(
                "carrier_freq",
                format!("must be > 0, got {}", self.carrier_freq),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::PositionOutOfRange {
                index,
                len: self.len(),
            })
        }
    }

    pub fn index(&self, col: usize, row: usize) -> usize {
        debug_assert!(col < self.n1 && row < self.n2);
        row * self.n1 + col
    }

    /// (column, row) of a position index.
    pub fn cell(&self, index: usize) -> (usize, usize) {
        (index % self.n1, index / self.n1)
    }

    /// Planar coordinates (x, y) in meters of a position index.
    pub fn coords(&self, index: usize) -> (f64, f64) {
        let (i, j) = self.cell(index);
        let cx = (self.n1 as f64 - 1.0) / 2.0;
        let cy = (self.n2 as f64 - 1.0) / 2.0;
        ((i as f64 - cx) * self.step, (j as f64 - cy) * self.step)
    }

    /// Planar distance in meters between two positions.
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let (ia, ja) = self.cell(a);
        let (ib, jb) = self.cell(b);
        let dx = ia.abs_diff(ib) as f64;
        let dy = ja.abs_diff(jb) as f64;
        self.step * (dx * dx + dy * dy).sqrt()
    }

    /// 3D distance in meters from the transmitter to a position.
    pub fn distance_to_transmitter(&self, index: usize) -> f64 {
        let (x, y) = self.coords(index);
        (x * x + y * y + self.height * self.height).sqrt()
    }
}
