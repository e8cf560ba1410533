//! Two-hypothesis security experiments.
//!
//! A challenger flips `b` per trial, shows the distinguisher the observation
//! for that hypothesis and scores `b == b'`. Trials run in parallel; each
//! trial draws from substreams `(master_seed, label, trial_index)`, so results
//! are a pure function of the configuration.

mod stats;
mod stream;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use stats::{
    binomial_sigma, chi_square_uniform, mutual_information_bits, wilson_interval, AdvantageEstimate,
    RateEstimate, Z95,
};
pub use stream::{RandomStream, Seed, SeedParseError};

use crate::error::ExperimentError;

pub const MIN_TRIALS: u64 = 100;

/// Substream labels shared by every experiment.
pub mod labels {
    pub const CHALLENGE: &str = "challenge";
    pub const ADVERSARY: &str = "adversary";
}

/// Decision procedure mapping an observation to a guess `b'`.
///
/// `false` guesses hypothesis 0 (real / protocol running), `true` guesses
/// hypothesis 1 (fake / idle).
pub trait Distinguisher<O: ?Sized>: Sync {
    fn name(&self) -> &str;
    fn guess(&self, observation: &O, coins: &mut RandomStream) -> bool;
}

/// Ignores its input and flips a coin.
#[derive(Debug, Clone, Copy, Default)]
pub struct CoinFlip;

impl<O: ?Sized> Distinguisher<O> for CoinFlip {
    fn name(&self) -> &str {
        "coin-flip"
    }

    fn guess(&self, _: &O, coins: &mut RandomStream) -> bool {
        coins.bit()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub trials: u64,
    pub master_seed: Seed,
    /// Security parameter; see [`KappaParams`].
    pub kappa: u32,
}

impl ExperimentConfig {
    pub fn new(trials: u64, master_seed: Seed) -> Self {
        ExperimentConfig {
            trials,
            master_seed,
            kappa: 16,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials < MIN_TRIALS {
            return Err(ExperimentError::TooFewTrials(self.trials));
        }
        Ok(())
    }
}

/// Concrete lengths derived from the security parameter κ.
///
/// | quantity                      | value        |
/// |-------------------------------|--------------|
/// | session key bits              | κ            |
/// | MAC tag bits `s`              | ⌈κ/2⌉        |
/// | BB84 key blocks (3 bits each) | ⌈κ/3⌉        |
/// | UE message bits `n`           | κ            |
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KappaParams {
    pub key_bits: usize,
    pub mac_bits: usize,
    pub bb84_key_blocks: usize,
    pub ue_message_bits: usize,
}

impl KappaParams {
    pub fn from_kappa(kappa: u32) -> Self {
        let k = kappa.max(1) as usize;
        KappaParams {
            key_bits: k,
            mac_bits: k.div_ceil(2),
            bb84_key_blocks: k.div_ceil(3),
            ue_message_bits: k,
        }
    }
}

/// Handle for one trial: hands out its labelled substreams.
#[derive(Debug, Clone, Copy)]
pub struct Trial {
    pub master_seed: Seed,
    pub index: u64,
}

impl Trial {
    pub fn stream(&self, label: &str) -> RandomStream {
        RandomStream::derive(self.master_seed, label, self.index)
    }
}

/// Runs `config.trials` independent trials of the two-hypothesis game.
///
/// `sampler` returns `(observation_b0, observation_b1)`; the challenge bit is
/// drawn from the `challenge` substream and the distinguisher's coins from the
/// `adversary` substream.
pub fn run_experiment<O, S, D, E>(
    sampler: S,
    dist: &D,
    config: &ExperimentConfig,
) -> Result<AdvantageEstimate, ExperimentError>
where
    O: Send,
    S: Fn(&Trial) -> Result<(O, O), E> + Sync,
    D: Distinguisher<O> + ?Sized,
    E: Into<ExperimentError> + Send,
{
    config.validate()?;
    let wins = (0..config.trials)
        .into_par_iter()
        .map(|index| {
            let trial = Trial {
                master_seed: config.master_seed,
                index,
            };
            let b = trial.stream(labels::CHALLENGE).bit();
            let (o0, o1) = sampler(&trial).map_err(Into::into)?;
            let obs = if b { o1 } else { o0 };
            let guess = dist.guess(&obs, &mut trial.stream(labels::ADVERSARY));
            Ok::<u64, ExperimentError>(u64::from(guess == b))
        })
        .try_reduce(|| 0u64, |a, b| Ok(a + b))?;
    Ok(AdvantageEstimate::from_wins(wins, config.trials))
}
