use super::energy::EnergyModel;
use super::table::{PolicyKind, PositionPolicy};
use super::TIE_TOLERANCE;
use crate::channel::ChannelMap;
use crate::error::Result;

/// Cheapest position realizing `challenge` from `current`.
pub fn greedy_next(
    current: usize,
    challenge: f64,
    map: &ChannelMap,
    model: &EnergyModel,
) -> Result<usize> {
    map.grid.check_index(current)?;
    let class = map.class_index(challenge)?;
    Ok(greedy_in_class(current, class, map, model))
}

pub(crate) fn greedy_in_class(
    current: usize,
    class: usize,
    map: &ChannelMap,
    model: &EnergyModel,
) -> usize {
    let candidates = &map.classes[class].positions;
    let cost = |v: usize| model.for_distance(map.grid.distance(current, v));
    let best = candidates
        .iter()
        .map(|&v| cost(v))
        .fold(f64::INFINITY, f64::min);
    *candidates
        .iter()
        .find(|&&v| cost(v) <= best + TIE_TOLERANCE)
        .expect("challenge classes are never empty")
}

/// Purely greedy policy.
#[derive(Debug, Clone, Copy)]
pub struct Greedy {
    pub model: EnergyModel,
}

impl PositionPolicy for Greedy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Greedy
    }

    fn next_position(&self, map: &ChannelMap, current: usize, class: usize, _t: usize) -> Result<usize> {
        map.grid.check_index(current)?;
        Ok(greedy_in_class(current, class, map, &self.model))
    }
}
