//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the solver or policy code it is used to check.

#![allow(dead_code)]

use std::collections::HashMap;

use crpla::channel::ChannelMap;
use crpla::policy::EnergyModel;

/// Flight energy recomputed from raw grid indices.
pub fn oracle_energy(map: &ChannelMap, model: &EnergyModel, a: usize, b: usize) -> f64 {
    let n1 = map.grid.n1;
    let (ax, ay) = ((a % n1) as f64, (a / n1) as f64);
    let (bx, by) = ((b % n1) as f64, (b / n1) as f64);
    let d = map.grid.step * ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt();
    let e = model.alpha1 * d / model.velocity - model.alpha0;
    if e > 0.0 {
        e
    } else {
        0.0
    }
}

/// Distinct quantized values in ascending order and, for each, the
/// positions holding it (scanned from the per-position array).
pub fn oracle_classes(map: &ChannelMap) -> (Vec<f64>, Vec<Vec<usize>>) {
    let mut values: Vec<f64> = map.quantized.clone();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();
    let members = values
        .iter()
        .map(|v| (0..map.len()).filter(|&p| map.quantized[p] == *v).collect())
        .collect();
    (values, members)
}

/// Finite-horizon expectimax over (position, challenge) states: the
/// drone chooses among positions realizing the challenge, then nature
/// draws the next challenge uniformly. Memoized on (depth, position,
/// challenge).
pub struct Expectimax<'a> {
    map: &'a ChannelMap,
    model: EnergyModel,
    gamma: f64,
    members: Vec<Vec<usize>>,
    memo: HashMap<(usize, usize, usize), f64>,
}

impl<'a> Expectimax<'a> {
    pub fn new(map: &'a ChannelMap, model: EnergyModel, gamma: f64) -> Self {
        let (_, members) = oracle_classes(map);
        Expectimax {
            map,
            model,
            gamma,
            members,
            memo: HashMap::new(),
        }
    }

    pub fn num_challenges(&self) -> usize {
        self.members.len()
    }

    /// Horizon whose discounted tail stays below `tail`.
    pub fn horizon_for(&self, tail: f64) -> usize {
        let max_e = (0..self.map.len())
            .flat_map(|a| (0..self.map.len()).map(move |b| (a, b)))
            .map(|(a, b)| oracle_energy(self.map, &self.model, a, b))
            .fold(0.0, f64::max);
        let mut h = 0;
        while self.gamma.powi(h as i32) * max_e / (1.0 - self.gamma) >= tail {
            h += 1;
        }
        h
    }

    /// Q-value of moving from `x` to `v` with `depth` decisions left.
    pub fn q(&mut self, depth: usize, x: usize, v: usize) -> f64 {
        let na = self.members.len();
        let mut future = 0.0;
        for a2 in 0..na {
            future += self.value(depth - 1, v, a2);
        }
        -oracle_energy(self.map, &self.model, x, v) + self.gamma * future / na as f64
    }

    pub fn value(&mut self, depth: usize, x: usize, a: usize) -> f64 {
        if depth == 0 {
            return 0.0;
        }
        if let Some(&v) = self.memo.get(&(depth, x, a)) {
            return v;
        }
        let candidates = self.members[a].clone();
        let best = candidates
            .into_iter()
            .map(|v| self.q(depth, x, v))
            .fold(f64::NEG_INFINITY, f64::max);
        self.memo.insert((depth, x, a), best);
        best
    }
}

/// Plain recursive expectimax with no memo; exponential, for tiny horizons.
pub fn naive_expectimax(
    map: &ChannelMap,
    model: &EnergyModel,
    gamma: f64,
    depth: usize,
    x: usize,
    a: usize,
) -> f64 {
    if depth == 0 {
        return 0.0;
    }
    let (_, members) = oracle_classes(map);
    let na = members.len();
    members[a]
        .iter()
        .map(|&v| {
            let future: f64 = (0..na)
                .map(|a2| naive_expectimax(map, model, gamma, depth - 1, v, a2))
                .sum();
            -oracle_energy(map, model, x, v) + gamma * future / na as f64
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Lowest-index maximizer of `score` over all positions realizing
/// `challenge`, scanning the whole grid. Scores within `tie` of the best
/// count as ties.
pub fn scan_argmax(
    map: &ChannelMap,
    challenge: f64,
    tie: f64,
    mut score: impl FnMut(usize) -> f64,
) -> usize {
    let feasible: Vec<usize> = (0..map.len())
        .filter(|&p| map.quantized[p] == challenge)
        .collect();
    let scores: Vec<f64> = feasible.iter().map(|&p| score(p)).collect();
    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    feasible
        .iter()
        .zip(&scores)
        .find(|(_, &s)| s >= best - tie)
        .map(|(&p, _)| p)
        .expect("challenge must be realized somewhere")
}
