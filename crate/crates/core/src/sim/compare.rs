use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::episode::{run_episode, EpisodeRngs, EpisodeTrace};
use crate::auth::Hypothesis;
use crate::channel::ChannelMap;
use crate::error::Result;
use crate::policy::{
    solve_value_iteration, strategic_field, Greedy, PolicyKind, PositionPolicy, Strategic,
};
use crate::stats;

/// Builds the three policies for `map` in the order BI, STD, PG.
pub fn build_policies(
    config: &ExperimentConfig,
    map: &ChannelMap,
) -> Result<Vec<Box<dyn PositionPolicy>>> {
    Ok(PolicyKind::ALL
        .iter()
        .map(|&kind| build_policy(config, map, kind))
        .collect::<Result<Vec<_>>>()?)
}

/// Builds one policy for `map` from the config.
pub fn build_policy(
    config: &ExperimentConfig,
    map: &ChannelMap,
    kind: PolicyKind,
) -> Result<Box<dyn PositionPolicy>> {
    let model = config.energy;
    Ok(match kind {
        PolicyKind::ValueIteration => Box::new(solve_value_iteration(
            map,
            &model,
            &config.value_iteration,
        )?),
        PolicyKind::Greedy => Box::new(Greedy { model }),
        PolicyKind::Strategic => {
            let s = config.strategic;
            let field = strategic_field(map, s.window_l)?.with_decay(s.delta, s.beta)?;
            Box::new(Strategic { field, model })
        }
    })
}

/// Per-step energies of several policies run on common random numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub kinds: Vec<PolicyKind>,
    /// `traces[p][s]`: episode of policy `p` from random start `s`.
    pub traces: Vec<Vec<EpisodeTrace>>,
}

impl Comparison {
    pub fn num_starts(&self) -> usize {
        self.traces.first().map_or(0, Vec::len)
    }

    pub fn episode_len(&self) -> usize {
        self.traces
            .first()
            .and_then(|p| p.first())
            .map_or(0, |t| t.steps.len())
    }

    pub fn policy_index(&self, kind: PolicyKind) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }

    /// Energies of policy `p` at step `t` (1-based) across all starts.
    pub fn energies_at(&self, p: usize, t: usize) -> Vec<f64> {
        self.traces[p].iter().map(|tr| tr.steps[t - 1].energy).collect()
    }

    /// Per-start mean energy over steps `t_lo..=t_hi` (1-based).
    pub fn window_means(&self, p: usize, t_lo: usize, t_hi: usize) -> Vec<f64> {
        self.traces[p]
            .iter()
            .map(|tr| stats::mean(&tr.energies()[t_lo - 1..t_hi]))
            .collect()
    }

    /// Mean and standard deviation of the energy per step and policy.
    pub fn energy_rows(&self) -> Vec<EnergyRow> {
        let mut rows = Vec::new();
        for (p, kind) in self.kinds.iter().enumerate() {
            for t in 1..=self.episode_len() {
                let e = self.energies_at(p, t);
                rows.push(EnergyRow {
                    policy: kind.to_string(),
                    t,
                    mean_energy_j: stats::mean(&e),
                    std_energy_j: stats::sample_std(&e),
                    starts: e.len(),
                });
            }
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub policy: String,
    pub t: usize,
    pub mean_energy_j: f64,
    pub std_energy_j: f64,
    pub starts: usize,
}

/// Runs every policy from `config.num_starts` random starts. Start `s` uses
/// the same start position, challenge sequence and channel draws for all
/// policies.
pub fn compare_with(
    config: &ExperimentConfig,
    map: &ChannelMap,
    policies: &[&dyn PositionPolicy],
) -> Result<Comparison> {
    let verifier = config.verifier()?;
    let schedule = vec![Hypothesis::Legit; config.episode_len];
    let per_start: Vec<Vec<EpisodeTrace>> = (0..config.num_starts as u64)
        .into_par_iter()
        .map(|s| {
            let rngs = EpisodeRngs::for_start(config.master_seed, s);
            policies
                .iter()
                .map(|policy| {
                    run_episode(
                        map,
                        *policy,
                        &config.energy,
                        &verifier,
                        &schedule,
                        &mut rngs.clone(),
                    )
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut traces: Vec<Vec<EpisodeTrace>> = vec![Vec::with_capacity(per_start.len()); policies.len()];
    for start in per_start {
        for (p, trace) in start.into_iter().enumerate() {
            traces[p].push(trace);
        }
    }
    Ok(Comparison {
        kinds: policies.iter().map(|p| p.kind()).collect(),
        traces,
    })
}

/// Builds all three policies for `map` and compares them.
pub fn compare_policies(config: &ExperimentConfig, map: &ChannelMap) -> Result<Comparison> {
    let owned = build_policies(config, map)?;
    let refs: Vec<&dyn PositionPolicy> = owned.iter().map(|p| p.as_ref()).collect();
    compare_with(config, map, &refs)
}
