use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    /// Bellman value iteration.
    #[serde(rename = "bi")]
    ValueIteration,
    /// Purely greedy.
    #[serde(rename = "pg")]
    Greedy,
    /// Strategic-value heuristic.
    #[serde(rename = "std")]
    Strategic,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] = [
        PolicyKind::ValueIteration,
        PolicyKind::Strategic,
        PolicyKind::Greedy,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PolicyKind::ValueIteration => "bi",
            PolicyKind::Greedy => "pg",
            PolicyKind::Strategic => "std",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bi" => Ok(PolicyKind::ValueIteration),
            "pg" => Ok(PolicyKind::Greedy),
            "std" => Ok(PolicyKind::Strategic),
            other => Err(Error::Config(format!("unknown policy `{other}`"))),
        }
    }
}

/// Anything that picks the next position for a state.
///
/// `class` indexes `map.classes`; `t` is the 1-based protocol step.
pub trait PositionPolicy: Sync {
    fn kind(&self) -> PolicyKind;

    fn next_position(&self, map: &ChannelMap, current: usize, class: usize, t: usize)
        -> Result<usize>;

    /// Fails if the policy was not built for `map`.
    fn check_compatible(&self, _map: &ChannelMap) -> Result<()> {
        Ok(())
    }
}

/// Tabulated state → next-position mapping.
///
/// States are laid out as `position * num_classes + class`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTable {
    pub kind: PolicyKind,
    pub num_positions: usize,
    /// Challenge values the table was built for, ascending.
    pub challenges: Vec<f64>,
    pub next_position: Vec<usize>,
    /// Expected discounted reward per state (value iteration only).
    pub values: Option<Vec<f64>>,
    pub gamma: Option<f64>,
    pub iterations_used: usize,
    pub converged: bool,
    /// Max-norm value change of every sweep (value iteration only).
    pub deltas: Vec<f64>,
}

impl PolicyTable {
    /// Tabulates `policy` at step `t` for every state of `map`.
    pub fn tabulate(policy: &dyn PositionPolicy, map: &ChannelMap, t: usize) -> Result<Self> {
        let nc = map.num_classes();
        let mut next_position = Vec::with_capacity(map.len() * nc);
        for x in 0..map.len() {
            for c in 0..nc {
                next_position.push(policy.next_position(map, x, c, t)?);
            }
        }
        Ok(PolicyTable {
            kind: policy.kind(),
            num_positions: map.len(),
            challenges: map.challenges(),
            next_position,
            values: None,
            gamma: None,
            iterations_used: 0,
            converged: true,
            deltas: Vec::new(),
        })
    }

    pub fn num_classes(&self) -> usize {
        self.challenges.len()
    }

    pub fn state(&self, position: usize, class: usize) -> usize {
        position * self.num_classes() + class
    }

    pub fn lookup(&self, position: usize, class: usize) -> usize {
        self.next_position[self.state(position, class)]
    }

    pub fn value(&self, position: usize, class: usize) -> Option<f64> {
        self.values.as_ref().map(|v| v[self.state(position, class)])
    }

    /// One row per state, ordered by challenge then position.
    pub fn dump_rows(&self, map: &ChannelMap) -> Result<Vec<PolicyDumpRow>> {
        self.check_compatible(map)?;
        let mut rows = Vec::with_capacity(self.next_position.len());
        for (c, &challenge_db) in self.challenges.iter().enumerate() {
            for x in 0..self.num_positions {
                let to = self.lookup(x, c);
                let (from_x, from_y) = map.grid.coords(x);
                let (to_x, to_y) = map.grid.coords(to);
                rows.push(PolicyDumpRow {
                    challenge_db,
                    from_x,
                    from_y,
                    to_x,
                    to_y,
                    value: self.value(x, c),
                });
            }
        }
        Ok(rows)
    }

    pub fn solver_log(&self) -> Vec<SolverLogRow> {
        self.deltas
            .iter()
            .enumerate()
            .map(|(i, &max_delta)| SolverLogRow {
                iteration: i + 1,
                max_delta,
            })
            .collect()
    }
}

impl PositionPolicy for PolicyTable {
    fn kind(&self) -> PolicyKind {
        self.kind
    }

    fn next_position(&self, map: &ChannelMap, current: usize, class: usize, _t: usize) -> Result<usize> {
        map.grid.check_index(current)?;
        if class >= self.num_classes() {
            return Err(Error::PolicyMismatch(format!("class {class} out of range")));
        }
        Ok(self.lookup(current, class))
    }

    fn check_compatible(&self, map: &ChannelMap) -> Result<()> {
        if self.num_positions != map.len() {
            return Err(Error::PolicyMismatch(format!(
                "policy has {} positions, map has {}",
                self.num_positions,
                map.len()
            )));
        }
        if self.challenges != map.challenges() {
            return Err(Error::PolicyMismatch(
                "policy and map have different challenge sets".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyDumpRow {
    pub challenge_db: f64,
    pub from_x: f64,
    pub from_y: f64,
    pub to_x: f64,
    pub to_y: f64,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverLogRow {
    pub iteration: usize,
    pub max_delta: f64,
}
