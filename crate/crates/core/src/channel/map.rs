use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::pathloss::friis_path_loss;
use super::shadowing::{synthesize_shadowing, ShadowingParams};
use crate::error::{Error, Result};

/// Midrise uniform quantizer over `[min, max]`.
///
/// Cell `k` covers `[min + k·w, min + (k+1)·w)` and reconstructs to its
/// midpoint; a value exactly on a cell edge goes to the upper cell, and
/// `max` itself belongs to the last cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantizer {
    pub min: f64,
    pub max: f64,
    pub num_levels: usize,
}

impl Quantizer {
    pub fn new(min: f64, max: f64, num_levels: usize) -> Result<Self> {
        if num_levels < 2 {
            return Err(Error::invalid(
                "num_levels",
                format!("must be >= 2, got {num_levels}"),
            ));
        }
        if !(min.is_finite() && max.is_finite() && max >= min) {
            return Err(Error::invalid("quantizer", format!("bad range [{min}, {max}]")));
        }
        Ok(Quantizer {
            min,
            max,
            num_levels,
        })
    }

    pub fn fit(values: &[f64], num_levels: usize) -> Result<Self> {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Quantizer::new(min, max, num_levels)
    }

    pub fn width(&self) -> f64 {
        (self.max - self.min) / self.num_levels as f64
    }

    fn is_degenerate(&self) -> bool {
        self.max == self.min
    }

    /// Reconstruction values. A zero-width range has a single level.
    pub fn levels(&self) -> Vec<f64> {
        if self.is_degenerate() {
            return vec![self.min];
        }
        let w = self.width();
        (0..self.num_levels)
            .map(|k| self.min + (k as f64 + 0.5) * w)
            .collect()
    }

    pub fn cell(&self, value: f64) -> usize {
        if self.is_degenerate() {
            return 0;
        }
        let k = ((value - self.min) / self.width()).floor();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(self.num_levels - 1)
        }
    }
}

/// All positions sharing one quantized attenuation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChallengeClass {
    /// Quantized attenuation, dB.
    pub value: f64,
    /// Position indices in ascending order.
    pub positions: Vec<usize>,
}

/// Attenuation map of a grid: continuous `eta = a_PL + a_SH`, its
/// quantization and the partition of positions into challenge classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMap {
    pub grid: GridSpec,
    /// Shadowing parameters the map was synthesized with, if any.
    pub shadowing: Option<ShadowingParams>,
    pub quantizer: Quantizer,
    /// Continuous attenuation per position, dB.
    pub eta: Vec<f64>,
    /// Quantized attenuation per position, dB.
    pub quantized: Vec<f64>,
    /// All quantizer reconstruction values, ascending.
    pub levels: Vec<f64>,
    /// Non-empty classes in ascending attenuation order. Their values form
    /// the challenge set.
    pub classes: Vec<ChallengeClass>,
    class_of: Vec<usize>,
}

impl ChannelMap {
    /// Quantizes an arbitrary attenuation field over `grid`.
    pub fn from_eta(grid: GridSpec, eta: Vec<f64>, num_levels: usize) -> Result<Self> {
        grid.validate()?;
        if eta.len() != grid.len() {
            return Err(Error::invalid(
                "eta",
                format!("expected {} values, got {}", grid.len(), eta.len()),
            ));
        }
        if let Some(bad) = eta.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("eta", format!("non-finite attenuation {bad}")));
        }
        let quantizer = Quantizer::fit(&eta, num_levels)?;
        let levels = quantizer.levels();

        let cells: Vec<usize> = eta.iter().map(|&v| quantizer.cell(v)).collect();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); levels.len()];
        for (pos, &c) in cells.iter().enumerate() {
            members[c].push(pos);
        }
        let mut class_index = vec![usize::MAX; levels.len()];
        let mut classes = Vec::new();
        for (c, positions) in members.into_iter().enumerate() {
            if !positions.is_empty() {
                class_index[c] = classes.len();
                classes.push(ChallengeClass {
                    value: levels[c],
                    positions,
                });
            }
        }
        let class_of: Vec<usize> = cells.iter().map(|&c| class_index[c]).collect();
        let quantized = cells.iter().map(|&c| levels[c]).collect();

        Ok(ChannelMap {
            grid,
            shadowing: None,
            quantizer,
            eta,
            quantized,
            levels,
            classes,
            class_of,
        })
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// The challenge set: unique quantized attenuations, ascending.
    pub fn challenges(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.value).collect()
    }

    /// Index into `classes` of the position's quantized attenuation.
    pub fn class_of(&self, position: usize) -> usize {
        self.class_of[position]
    }

    /// Class index of a challenge value. The value must be one of the
    /// map's quantized attenuations (exact match).
    pub fn class_index(&self, challenge: f64) -> Result<usize> {
        self.classes
            .binary_search_by(|c| c.value.total_cmp(&challenge))
            .map_err(|_| Error::UnknownChallenge(challenge))
    }

    /// Largest class size.
    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(|c| c.positions.len()).max().unwrap_or(0)
    }
}

/// Builds the attenuation map: free-space path loss plus correlated
/// shadowing, uniformly quantized to `num_levels` levels.
pub fn build_channel_map(
    grid: &GridSpec,
    params: &ShadowingParams,
    num_levels: usize,
) -> Result<ChannelMap> {
    let shadowing = synthesize_shadowing(grid, params)?;
    let eta = shadowing
        .iter()
        .enumerate()
        .map(|(k, sh)| friis_path_loss(grid, k).map(|pl| pl + sh))
        .collect::<Result<Vec<_>>>()?;
    let mut map = ChannelMap::from_eta(*grid, eta, num_levels)?;
    map.shadowing = Some(*params);
    Ok(map)
}

/// Spread `max â − min â` of the quantized attenuations, dB.
pub fn attenuation_range(map: &ChannelMap) -> f64 {
    match (map.classes.first(), map.classes.last()) {
        (Some(lo), Some(hi)) => hi.value - lo.value,
        _ => 0.0,
    }
}
