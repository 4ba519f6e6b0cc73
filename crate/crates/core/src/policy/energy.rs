use serde::{Deserialize, Serialize};

use crate::channel::GridSpec;
use crate::error::{Error, Result};

/// Linear flight-energy model `α₁·d/V − α₀`, clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyModel {
    /// Power draw while flying, J/s.
    pub alpha1: f64,
    /// Fixed offset, J.
    pub alpha0: f64,
    /// Cruise velocity, m/s.
    pub velocity: f64,
}

impl Default for EnergyModel {
    /// Horizontal-flight fit (308.71 J/s, 0.85 J) at 5 m/s.
    fn default() -> Self {
        EnergyModel {
            alpha1: 308.71,
            alpha0: 0.85,
            velocity: 5.0,
        }
    }
}

impl EnergyModel {
    pub fn new(alpha1: f64, alpha0: f64, velocity: f64) -> Result<Self> {
        let m = EnergyModel {
            alpha1,
            alpha0,
            velocity,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha1 > 0.0 && self.alpha1.is_finite()) {
            return Err(Error::invalid("alpha1", format!("must be > 0, got {}", self.alpha1)));
        }
        if !(self.alpha0 >= 0.0 && self.alpha0.is_finite()) {
            return Err(Error::invalid("alpha0", format!("must be >= 0, got {}", self.alpha0)));
        }
        if !(self.velocity > 0.0 && self.velocity.is_finite()) {
            return Err(Error::invalid(
                "velocity",
                format!("must be > 0, got {}", self.velocity),
            ));
        }
        Ok(())
    }

    /// Energy in joules to fly `distance` meters.
    #[inline]
    pub fn for_distance(&self, distance: f64) -> f64 {
        (self.alpha1 * distance / self.velocity - self.alpha0).max(0.0)
    }
}

/// Energy to move between two grid positions.
pub fn energy(from: usize, to: usize, model: &EnergyModel, grid: &GridSpec) -> Result<f64> {
    grid.check_index(from)?;
    grid.check_index(to)?;
    Ok(model.for_distance(grid.distance(from, to)))
}
