use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::auth::{Hypothesis, VerifierConfig};
use crate::channel::{build_channel_map, ChannelMap, GridSpec, ShadowingParams};
use crate::error::{Error, Result};
use crate::policy::{EnergyModel, PolicyKind, ValueIterationParams};
use crate::rng::{derive_seed, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShadowingSettings {
    pub sigma_sh: f64,
    /// Coherence distance in meters; ten wavelengths when absent.
    pub d_coh: Option<f64>,
    /// Shadowing seed; derived from the master seed when absent.
    pub seed: Option<u64>,
}

impl Default for ShadowingSettings {
    fn default() -> Self {
        ShadowingSettings {
            sigma_sh: 6.0,
            d_coh: None,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifierSettings {
    pub p_fa: f64,
}

impl Default for VerifierSettings {
    fn default() -> Self {
        VerifierSettings { p_fa: 0.01 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrategicSettings {
    pub window_l: usize,
    pub delta: f64,
    pub beta: f64,
}

impl Default for StrategicSettings {
    fn default() -> Self {
        StrategicSettings {
            window_l: 5,
            delta: 100.0,
            beta: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetSettings {
    /// Attenuation ranges r, dB.
    pub r_grid: Vec<f64>,
    pub p_fa_grid: Vec<f64>,
    pub trials: usize,
}

impl Default for DetSettings {
    fn default() -> Self {
        DetSettings {
            r_grid: vec![5.0, 10.0, 20.0, 40.0],
            p_fa_grid: vec![0.5, (-1f64).exp(), 0.1, 0.05, 0.01],
            trials: 100_000,
        }
    }
}

/// Which hypothesis holds at each protocol step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AttackSchedule {
    /// Every message is legitimate.
    Legit,
    /// Every message is forged.
    Attack,
    /// Each message is forged independently with probability `p`.
    Bernoulli { p: f64 },
}

impl AttackSchedule {
    pub fn validate(&self) -> Result<()> {
        if let AttackSchedule::Bernoulli { p } = self {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::invalid(
                    "attack_schedule.p",
                    format!("must be in [0, 1], got {p}"),
                ));
            }
        }
        Ok(())
    }

    pub fn flags<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Hypothesis> {
        match *self {
            AttackSchedule::Legit => vec![Hypothesis::Legit; len],
            AttackSchedule::Attack => vec![Hypothesis::Attack; len],
            AttackSchedule::Bernoulli { p } => (0..len)
                .map(|_| {
                    if rng.random::<f64>() < p {
                        Hypothesis::Attack
                    } else {
                        Hypothesis::Legit
                    }
                })
                .collect(),
        }
    }
}

fn default_grid() -> GridSpec {
    GridSpec {
        n1: 50,
        n2: 50,
        step: 1.0,
        height: 20.0,
        carrier_freq: 1.8e9,
    }
}

/// Full experiment description. Every field has a default; the defaults
/// reproduce the reference scenario (50 m × 50 m at 1 m, 20 m height,
/// 1.8 GHz, σ = 6 dB, D_coh = 10λ, 10 levels, γ = 0.95, L = 5, δ = 100,
/// β = 20).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    pub shadowing: ShadowingSettings,
    pub num_levels: usize,
    pub energy: EnergyModel,
    pub verifier: VerifierSettings,
    pub value_iteration: ValueIterationParams,
    pub strategic: StrategicSettings,
    /// Policy used by `simulate`.
    pub policy: PolicyKind,
    /// Protocol steps per episode.
    pub episode_len: usize,
    /// Number of random starting positions.
    pub num_starts: usize,
    pub attack_schedule: AttackSchedule,
    pub det: DetSettings,
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            grid: default_grid(),
            shadowing: ShadowingSettings::default(),
            num_levels: 10,
            energy: EnergyModel::default(),
            verifier: VerifierSettings::default(),
            value_iteration: ValueIterationParams::default(),
            strategic: StrategicSettings::default(),
            policy: PolicyKind::ValueIteration,
            episode_len: 100,
            num_starts: 200,
            attack_schedule: AttackSchedule::Legit,
            det: DetSettings::default(),
            master_seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.shadowing_params()?;
        if self.num_levels < 2 {
            return Err(Error::invalid("num_levels", "must be >= 2"));
        }
        self.energy.validate()?;
        self.verifier()?;
        self.value_iteration.validate()?;
        if self.strategic.window_l == 0 {
            return Err(Error::invalid("strategic.window_l", "must be >= 1"));
        }
        if !(self.strategic.delta >= 0.0 && self.strategic.delta.is_finite()) {
            return Err(Error::invalid("strategic.delta", "must be >= 0"));
        }
        if !(self.strategic.beta > 0.0) {
            return Err(Error::invalid("strategic.beta", "must be > 0"));
        }
        if self.episode_len == 0 {
            return Err(Error::invalid("episode_len", "must be >= 1"));
        }
        if self.num_starts == 0 {
            return Err(Error::invalid("num_starts", "must be >= 1"));
        }
        self.attack_schedule.validate()?;
        if self.det.trials == 0 {
            return Err(Error::invalid("det.trials", "must be >= 1"));
        }
        if let Some(r) = self.det.r_grid.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::invalid("det.r_grid", format!("ranges must be > 0, got {r}")));
        }
        for &p in &self.det.p_fa_grid {
            VerifierConfig::new(p)?;
        }
        Ok(())
    }

    pub fn shadowing_params(&self) -> Result<ShadowingParams> {
        let d_coh = self
            .shadowing
            .d_coh
            .unwrap_or(10.0 * self.grid.wavelength());
        let seed = self
            .shadowing
            .seed
            .unwrap_or_else(|| derive_seed(self.master_seed, Stream::Shadowing, 0));
        ShadowingParams::new(self.shadowing.sigma_sh, d_coh, seed)
    }

    pub fn verifier(&self) -> Result<VerifierConfig> {
        VerifierConfig::new(self.verifier.p_fa)
    }

    pub fn build_map(&self) -> Result<ChannelMap> {
        build_channel_map(&self.grid, &self.shadowing_params()?, self.num_levels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_reference_defaults() {
        let cfg = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.grid.len(), 2500);
        let p = cfg.shadowing_params().unwrap();
        assert!((p.d_coh - 10.0 * 299_792_458.0 / 1.8e9).abs() < 1e-12);
        assert_eq!(cfg.value_iteration.gamma, 0.95);
        assert_eq!(cfg.strategic, StrategicSettings { window_l: 5, delta: 100.0, beta: 20.0 });
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"gird": {}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"verifier": {"p_fa": 0.1, "x": 1}}"#).is_err());
    }

    #[test]
    fn partial_override() {
        let cfg = ExperimentConfig::from_json(
            r#"{"num_levels": 4, "policy": "std", "attack_schedule": {"kind": "bernoulli", "p": 0.3}}"#,
        )
        .unwrap();
        assert_eq!(cfg.num_levels, 4);
        assert_eq!(cfg.policy, PolicyKind::Strategic);
        assert_eq!(cfg.attack_schedule, AttackSchedule::Bernoulli { p: 0.3 });
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for text in [
            r#"{"num_levels": 1}"#,
            r#"{"verifier": {"p_fa": 1.5}}"#,
            r#"{"episode_len": 0}"#,
            r#"{"value_iteration": {"gamma": 1.0, "tol": 1e-6, "max_iters": 10}}"#,
            r#"{"attack_schedule": {"kind": "bernoulli", "p": 2.0}}"#,
        ] {
            let err = ExperimentConfig::from_json(text).unwrap_err();
            assert!(err.is_config_error(), "{text}: {err}");
        }
    }

    #[test]
    fn roundtrips_through_json() {
        let cfg = ExperimentConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }
}
