//! Movement energy and position-selection policies.
//!
//! A state is the pair (current position, drawn challenge). Every policy
//! must answer with a position whose quantized attenuation equals the
//! challenge; they differ in how they trade the immediate flight cost
//! against where the drone ends up.

mod energy;
mod greedy;
mod strategic;
mod table;
mod value_iteration;

pub use energy::{energy, EnergyModel};
pub use greedy::{greedy_next, Greedy};
pub use strategic::{std_next, strategic_field, Strategic, StrategicField};
pub use table::{PolicyDumpRow, PolicyKind, PolicyTable, PositionPolicy, SolverLogRow};
pub use value_iteration::{solve_value_iteration, ValueIterationParams};

/// Scores closer than this (in joules) are treated as tied, and ties go to
/// the lowest position index.
pub const TIE_TOLERANCE: f64 = 1e-9;
