//! Challenge-response physical-layer authentication (CR-PLA) for a mobile
//! receiver.
//!
//! The verifier (a drone) keeps a quantized attenuation map of its flight
//! region. For every incoming message it draws a random target attenuation,
//! flies to a position that realizes it, and checks that the measured
//! attenuation is consistent with the target. The crate covers:
//!
//! - [`channel`]: grid geometry, free-space path loss, correlated shadowing
//!   synthesis, quantization and challenge classes.
//! - [`auth`]: challenge drawing, the logarithmic verification test, the
//!   random-guessing attacker and analytic/simulated FA-MD curves.
//! - [`policy`]: movement energy and the three position policies (Bellman
//!   value iteration, purely greedy, strategic-value heuristic).
//! - [`sim`]: experiment configuration, episodes, policy comparison and CSV
//!   output used by the `crpla` binary.

pub mod auth;
pub mod channel;
pub mod error;
pub mod policy;
pub mod rng;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
