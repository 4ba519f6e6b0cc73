//! Discounted value iteration over (position, challenge) states.
//!
//! With reward `−ε(x, v)` for flying from `x` to `v` and the next challenge
//! drawn uniformly and independently, the optimality equation is
//!
//! ```text
//! V(x, a) = max_{v ∈ X_a} [ −ε(x, v) + γ·U(v) ],   U(v) = mean_{a'} V(v, a')
//! ```
//!
//! so each sweep only needs the per-position average `U`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::energy::EnergyModel;
use super::table::{PolicyKind, PolicyTable};
use crate::channel::ChannelMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueIterationParams {
    pub gamma: f64,
    /// Stop once the max-norm change of a sweep drops below this.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for ValueIterationParams {
    fn default() -> Self {
        ValueIterationParams {
            gamma: 0.95,
            tol: 1e-6,
            max_iters: 10_000,
        }
    }
}

impl ValueIterationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::invalid("gamma", format!("must be in (0, 1), got {}", self.gamma)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid("tol", format!("must be > 0, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be >= 1"));
        }
        Ok(())
    }
}

/// Best action and its value for one state, given `U`.
/// Ties keep the lowest position index.
fn best_action(
    map: &ChannelMap,
    model: &EnergyModel,
    gamma: f64,
    u: &[f64],
    x: usize,
    class: usize,
) -> (usize, f64) {
    let mut best = (usize::MAX, f64::NEG_INFINITY);
    for &v in &map.classes[class].positions {
        let q = gamma * u[v] - model.for_distance(map.grid.distance(x, v));
        if q > best.1 {
            best = (v, q);
        }
    }
    best
}

fn average_over_challenges(values: &[f64], nc: usize) -> Vec<f64> {
    values
        .chunks_exact(nc)
        .map(|row| row.iter().sum::<f64>() / nc as f64)
        .collect()
}

/// Solves the movement MDP by value iteration and extracts the greedy
/// policy of the final values.
pub fn solve_value_iteration(
    map: &ChannelMap,
    model: &EnergyModel,
    params: &ValueIterationParams,
) -> Result<PolicyTable> {
    params.validate()?;
    model.validate()?;
    let nc = map.num_classes();
    if nc == 0 || map.classes.iter().any(|c| c.positions.is_empty()) {
        return Err(Error::EmptyChallengeSet);
    }
    let n = map.len();
    let gamma = params.gamma;

    let mut values = vec![0.0; n * nc];
    let mut next = vec![0.0; n * nc];
    let mut deltas = Vec::new();
    let mut converged = false;

    for _ in 0..params.max_iters {
        let u = average_over_challenges(&values, nc);
        next.par_chunks_mut(nc).enumerate().for_each(|(x, row)| {
            for (class, slot) in row.iter_mut().enumerate() {
                *slot = best_action(map, model, gamma, &u, x, class).1;
            }
        });
        let delta = values
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut values, &mut next);
        deltas.push(delta);
        if delta < params.tol {
            converged = true;
            break;
        }
    }

    let u = average_over_challenges(&values, nc);
    let next_position: Vec<usize> = (0..n * nc)
        .into_par_iter()
        .map(|s| best_action(map, model, gamma, &u, s / nc, s % nc).0)
        .collect();

    Ok(PolicyTable {
        kind: PolicyKind::ValueIteration,
        num_positions: n,
        challenges: map.challenges(),
        next_position,
        values: Some(values),
        gamma: Some(gamma),
        iterations_used: deltas.len(),
        converged,
        deltas,
    })
}
