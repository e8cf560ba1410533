use super::prng::{PrngSpec, PrngStrength};
use super::timebin::{detection_count_pmfs, prng_schedule, TimeBinChannel, WardenObservation};
use crate::error::ProtocolError;
use crate::games::{Distinguisher, RandomStream};

/// Likelihood-ratio test on the total detection count.
///
/// Guesses "active" (`false`) iff the active-channel probability of the
/// observed count strictly exceeds the idle one.
#[derive(Debug, Clone)]
pub struct CountTestWarden {
    n_slots: usize,
    favours_active: Vec<bool>,
}

impl CountTestWarden {
    pub fn new(channel: &TimeBinChannel, n_used: usize) -> Result<Self, ProtocolError> {
        let (idle, active) = detection_count_pmfs::<f64>(channel, n_used)?;
        Ok(CountTestWarden {
            n_slots: channel.n_slots(),
            favours_active: idle.iter().zip(&active).map(|(i, a)| a > i).collect(),
        })
    }

    pub fn says_active(&self, obs: &WardenObservation) -> bool {
        debug_assert_eq!(obs.detections.len(), self.n_slots);
        self.favours_active.get(obs.count()).copied().unwrap_or(false)
    }
}

impl Distinguisher<WardenObservation> for CountTestWarden {
    fn name(&self) -> &str {
        "count-test"
    }

    fn guess(&self, obs: &WardenObservation, _: &mut RandomStream) -> bool {
        !self.says_active(obs)
    }
}

/// Warden that enumerates every 16-bit schedule key.
///
/// For each key it counts detections inside that key's schedule and reports
/// "active" when the best key reaches the midpoint
/// `⌈n_used·(p_dark + p_signal)/2⌉`.
#[derive(Debug, Clone)]
pub struct SeedSearchWarden {
    n_slots: usize,
    threshold: usize,
    /// `keys_by_slot[s]` lists the keys whose schedule uses slot `s`.
    keys_by_slot: Vec<Vec<u16>>,
}

impl SeedSearchWarden {
    pub const KEYSPACE: usize = 1 << 16;

    pub fn new(channel: &TimeBinChannel, n_used: usize) -> Result<Self, ProtocolError> {
        channel.check_used(n_used)?;
        let mut keys_by_slot = vec![Vec::new(); channel.n_slots()];
        for key in 0..Self::KEYSPACE {
            let spec = PrngSpec::new(PrngStrength::Weak, key as u128);
            for slot in prng_schedule(channel.n_slots(), n_used, spec)?.used_slots {
                keys_by_slot[slot].push(key as u16);
            }
        }
        let mid = n_used as f64 * (channel.p_dark() + channel.p_signal()) / 2.0;
        Ok(SeedSearchWarden {
            n_slots: channel.n_slots(),
            threshold: (mid.ceil() as usize).max(1),
            keys_by_slot,
        })
    }

    /// Highest in-schedule detection count over all keys, with its key.
    pub fn best_key(&self, obs: &WardenObservation) -> (u16, usize) {
        let mut hits = vec![0u16; Self::KEYSPACE];
        for slot in obs.detections.support() {
            if slot < self.n_slots {
                for &k in &self.keys_by_slot[slot] {
                    hits[k as usize] += 1;
                }
            }
        }
        let (key, count) = hits
            .iter()
            .enumerate()
            .max_by_key(|&(k, &c)| (c, std::cmp::Reverse(k)))
            .expect("non-empty keyspace");
        (key as u16, *count as usize)
    }

    pub fn says_active(&self, obs: &WardenObservation) -> bool {
        self.best_key(obs).1 >= self.threshold
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }
}

impl Distinguisher<WardenObservation> for SeedSearchWarden {
    fn name(&self) -> &str {
        "seed-search"
    }

    fn guess(&self, obs: &WardenObservation, _: &mut RandomStream) -> bool {
        !self.says_active(obs)
    }
}
