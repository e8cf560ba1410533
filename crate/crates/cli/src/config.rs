use std::path::{Path, PathBuf};

use dqke_core::channel::PrngStrength;
use dqke_core::Seed;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// A config file: one experiment, its parameters and optional run settings.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: String,
    #[serde(default)]
    pub seed: Option<Seed>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    pub params: serde_json::Value,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn params<P: DeserializeOwned>(&self) -> Result<P, String> {
        serde_json::from_value(self.params.clone()).map_err(|e| format!("params: {e}"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bb84Params {
    pub key_blocks: usize,
    pub flip_probability: f64,
}

impl Default for Bb84Params {
    fn default() -> Self {
        Bb84Params {
            key_blocks: 4,
            flip_probability: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttackParams {
    pub n: usize,
    pub eta: usize,
    pub flips: usize,
}

impl Default for AttackParams {
    fn default() -> Self {
        AttackParams { n: 512, eta: 32, flips: 1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UeParamsConfig {
    pub n: usize,
    pub s: usize,
}

impl Default for UeParamsConfig {
    fn default() -> Self {
        UeParamsConfig { n: 8, s: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WardenKind {
    Count,
    SeedSearch,
}

impl WardenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WardenKind::Count => "count",
            WardenKind::SeedSearch => "seed-search",
        }
    }
}

/// Time-bin parameters; `n_used` may be replaced by `sqrt_c`, giving
/// `n_used = max(⌊sqrt_c·√n_slots⌋, slots one BB84 attempt needs)`. With
/// neither, `n_used` is 64.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CovertParams {
    pub n_slots: usize,
    #[serde(default)]
    pub n_used: Option<usize>,
    #[serde(default)]
    pub sqrt_c: Option<f64>,
    pub p_dark: f64,
    pub p_signal: f64,
    pub prng: PrngStrength,
    pub warden: WardenKind,
    #[serde(default)]
    pub decoy_eta: usize,
}

impl Default for CovertParams {
    fn default() -> Self {
        CovertParams {
            n_slots: 4096,
            n_used: None,
            sqrt_c: None,
            p_dark: 0.01,
            p_signal: 0.5,
            prng: PrngStrength::Strong,
            warden: WardenKind::Count,
            decoy_eta: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistillParams {
    pub theta: f64,
    pub n: usize,
}

impl Default for DistillParams {
    fn default() -> Self {
        DistillParams {
            theta: std::f64::consts::FRAC_PI_6,
            n: 100_000,
        }
    }
}
