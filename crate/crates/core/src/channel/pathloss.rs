use std::f64::consts::PI;

use super::grid::{GridSpec, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Free-space path loss in dB, `20·log10(4π·d·f/c)`, for `distance` in
/// meters and `freq` in Hz.
pub fn free_space_path_loss_db(distance: f64, freq: f64) -> f64 {
    20.0 * (4.0 * PI * distance * freq / SPEED_OF_LIGHT).log10()
}

/// Path loss from the transmitter (below the grid center at `grid.height`)
/// to the position `index`.
pub fn friis_path_loss(grid: &GridSpec, index: usize) -> Result<f64> {
    grid.check_index(index)?;
    let d = grid.distance_to_transmitter(index);
    if d <= 0.0 {
        return Err(Error::invalid(
            "height",
            format!("position {index} coincides with the transmitter"),
        ));
    }
    Ok(free_space_path_loss_db(d, grid.carrier_freq))
}
