use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::auth::{
    draw_challenge, sample_attack_response, sample_legit_response, verify, Decision, Hypothesis,
    VerifierConfig,
};
use crate::channel::ChannelMap;
use crate::error::{Error, Result};
use crate::policy::{EnergyModel, PositionPolicy};
use crate::rng::{stream_rng, Stream};

/// Independent random streams of one episode. Two episodes built from the
/// same `(master, start_index)` see the same start, challenges, fading and
/// attack guesses regardless of the policy.
#[derive(Debug, Clone)]
pub struct EpisodeRngs {
    pub start: ChaCha8Rng,
    pub challenge: ChaCha8Rng,
    pub fading: ChaCha8Rng,
    pub attack: ChaCha8Rng,
}

impl EpisodeRngs {
    pub fn for_start(master: u64, start_index: u64) -> Self {
        EpisodeRngs {
            start: stream_rng(master, Stream::Start, start_index),
            challenge: stream_rng(master, Stream::Challenge, start_index),
            fading: stream_rng(master, Stream::Fading, start_index),
            attack: stream_rng(master, Stream::Attack, start_index),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Protocol step, starting at 1.
    pub t: usize,
    pub challenge: f64,
    pub from: usize,
    pub to: usize,
    pub energy: f64,
    pub observed: f64,
    pub hypothesis: Hypothesis,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrace {
    pub start: usize,
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EpisodeSummary {
    pub legit: usize,
    pub false_alarms: usize,
    pub attacks: usize,
    pub missed: usize,
    pub total_energy: f64,
}

impl EpisodeTrace {
    pub fn total_energy(&self) -> f64 {
        self.steps.iter().map(|s| s.energy).sum()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.energy).collect()
    }

    pub fn summary(&self) -> EpisodeSummary {
        let mut s = EpisodeSummary {
            total_energy: self.total_energy(),
            ..Default::default()
        };
        for step in &self.steps {
            match (step.hypothesis, step.decision) {
                (Hypothesis::Legit, d) => {
                    s.legit += 1;
                    s.false_alarms += (d == Decision::Reject) as usize;
                }
                (Hypothesis::Attack, d) => {
                    s.attacks += 1;
                    s.missed += (d == Decision::Accept) as usize;
                }
            }
        }
        s
    }
}

impl std::ops::AddAssign for EpisodeSummary {
    fn add_assign(&mut self, o: Self) {
        self.legit += o.legit;
        self.false_alarms += o.false_alarms;
        self.attacks += o.attacks;
        self.missed += o.missed;
        self.total_energy += o.total_energy;
    }
}

/// Runs the challenge / move / response / verification loop for
/// `schedule.len()` steps from a uniformly drawn start position.
pub fn run_episode(
    map: &ChannelMap,
    policy: &dyn PositionPolicy,
    model: &EnergyModel,
    verifier: &VerifierConfig,
    schedule: &[Hypothesis],
    rngs: &mut EpisodeRngs,
) -> Result<EpisodeTrace> {
    policy.check_compatible(map)?;
    let challenges = map.challenges();
    let (lo, hi) = match (challenges.first(), challenges.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(Error::EmptyChallengeSet),
    };
    let mut position = rngs.start.random_range(0..map.len());
    let start = position;
    let mut steps = Vec::with_capacity(schedule.len());

    for (k, &hypothesis) in schedule.iter().enumerate() {
        let t = k + 1;
        let challenge = draw_challenge(&challenges, &mut rngs.challenge)?;
        let class = map.class_index(challenge)?;
        let to = policy.next_position(map, position, class, t)?;
        if map.class_of(to) != class {
            return Err(Error::PolicyMismatch(format!(
                "policy moved to position {to}, which does not realize {challenge} dB"
            )));
        }
        let energy = model.for_distance(map.grid.distance(position, to));
        let observed = match hypothesis {
            Hypothesis::Legit => sample_legit_response(challenge, &mut rngs.fading),
            Hypothesis::Attack => sample_attack_response(lo, hi, &mut rngs.attack)?,
        };
        steps.push(StepRecord {
            t,
            challenge,
            from: position,
            to,
            energy,
            observed,
            hypothesis,
            decision: verify(observed, challenge, verifier),
        });
        position = to;
    }
    Ok(EpisodeTrace { start, steps })
}
