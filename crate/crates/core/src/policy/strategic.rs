use super::energy::EnergyModel;
use super::table::{PolicyKind, PositionPolicy};
use super::TIE_TOLERANCE;
use crate::channel::ChannelMap;
use crate::error::{Error, Result};

/// Per-position strategic value: attenuation diversity in an `L × L`
/// neighbourhood, plus the weights of the decaying bonus.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategicField {
    pub y: Vec<f64>,
    pub window_l: usize,
    /// Weight of the strategic value against flight energy.
    pub delta: f64,
    /// Decay time constant of the bonus, in steps.
    pub beta: f64,
}

impl StrategicField {
    pub fn with_decay(mut self, delta: f64, beta: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::invalid("delta", format!("must be >= 0, got {delta}")));
        }
        if !(beta > 0.0) {
            return Err(Error::invalid("beta", format!("must be > 0, got {beta}")));
        }
        self.delta = delta;
        self.beta = beta;
        Ok(self)
    }

    /// Bonus multiplier `δ·exp(−t/β)` at step `t`.
    pub fn weight(&self, t: usize) -> f64 {
        self.delta * (-(t as f64) / self.beta).exp()
    }

    pub fn max_y(&self) -> f64 {
        self.y.iter().copied().fold(0.0, f64::max)
    }
}

/// First index of a length-`len` window around `center` kept inside `0..n`.
fn window_start(center: usize, len: usize, n: usize) -> usize {
    let half = (len - 1) / 2;
    center.saturating_sub(half).min(n - len)
}

/// Root-sum-of-squares deviation of the quantized attenuation over the
/// `L × L` block of positions closest to each position.
///
/// Near the border the block is shifted to stay inside the grid, so every
/// window holds `L²` positions (fewer only if the grid itself is narrower
/// than `L`). The bonus weights default to δ = 100, β = 20.
pub fn strategic_field(map: &ChannelMap, window_l: usize) -> Result<StrategicField> {
    if window_l == 0 {
        return Err(Error::invalid("window_l", "must be >= 1"));
    }
    let g = &map.grid;
    let lx = window_l.min(g.n1);
    let ly = window_l.min(g.n2);
    let count = (lx * ly) as f64;
    let a = &map.quantized;
    let mut y = Vec::with_capacity(map.len());
    for k in 0..map.len() {
        let (ci, cj) = g.cell(k);
        let i0 = window_start(ci, lx, g.n1);
        let j0 = window_start(cj, ly, g.n2);
        let cells = || (j0..j0 + ly).flat_map(move |j| (i0..i0 + lx).map(move |i| a[g.index(i, j)]));
        let mu = cells().sum::<f64>() / count;
        let ss: f64 = cells().map(|v| (v - mu) * (v - mu)).sum();
        y.push(ss.sqrt());
    }
    Ok(StrategicField {
        y,
        window_l,
        delta: 100.0,
        beta: 20.0,
    })
}

/// Position in the challenge class maximizing `δ·e^{−t/β}·Y − ε`.
pub fn std_next(
    current: usize,
    challenge: f64,
    t: usize,
    field: &StrategicField,
    map: &ChannelMap,
    model: &EnergyModel,
) -> Result<usize> {
    map.grid.check_index(current)?;
    let class = map.class_index(challenge)?;
    strategic_in_class(current, class, t, field, map, model)
}

pub(crate) fn strategic_in_class(
    current: usize,
    class: usize,
    t: usize,
    field: &StrategicField,
    map: &ChannelMap,
    model: &EnergyModel,
) -> Result<usize> {
    if field.y.len() != map.len() {
        return Err(Error::PolicyMismatch(format!(
            "strategic field covers {} positions, map has {}",
            field.y.len(),
            map.len()
        )));
    }
    let weight = field.weight(t);
    let candidates = &map.classes[class].positions;
    let score = |v: usize| weight * field.y[v] - model.for_distance(map.grid.distance(current, v));
    let best = candidates
        .iter()
        .map(|&v| score(v))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(*candidates
        .iter()
        .find(|&&v| score(v) >= best - TIE_TOLERANCE)
        .expect("challenge classes are never empty"))
}

/// Strategic-value heuristic with a decaying bonus.
#[derive(Debug, Clone)]
pub struct Strategic {
    pub field: StrategicField,
    pub model: EnergyModel,
}

impl PositionPolicy for Strategic {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Strategic
    }

    fn next_position(&self, map: &ChannelMap, current: usize, class: usize, t: usize) -> Result<usize> {
        map.grid.check_index(current)?;
        strategic_in_class(current, class, t, &self.field, map, &self.model)
    }
}
