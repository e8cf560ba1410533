use crate::bb84::Bb84Config;
use crate::channel::{PrngStrength, TimeBinChannel};
use crate::error::ProtocolError;

/// Covert sub-session parameters plus the decoy rate Eve applies to the
/// non-covert one.
#[derive(Debug, Clone)]
pub struct CovertQkeConfig {
    bb84: Bb84Config,
    channel: TimeBinChannel,
    prng: PrngStrength,
    n_used: usize,
    decoy_eta: usize,
}

impl CovertQkeConfig {
    /// Fails unless `required_slots(bb84) ≤ n_used ≤ n_slots`.
    pub fn new(
        bb84: Bb84Config,
        channel: TimeBinChannel,
        prng: PrngStrength,
        n_used: usize,
    ) -> Result<Self, ProtocolError> {
        bb84.validate()?;
        channel.check_used(n_used)?;
        let needed = required_slots(&bb84);
        if n_used < needed {
            return Err(ProtocolError::CovertCapacity {
                needed,
                available: n_used,
            });
        }
        Ok(CovertQkeConfig {
            bb84,
            channel,
            prng,
            n_used,
            decoy_eta: 0,
        })
    }

    /// `n_used = max(⌊c·√n_slots⌋, required_slots(bb84))`.
    pub fn with_sqrt_rule(
        bb84: Bb84Config,
        channel: TimeBinChannel,
        prng: PrngStrength,
        c: f64,
    ) -> Result<Self, ProtocolError> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(ProtocolError::InvalidConfig(format!("sqrt-rule constant {c} must be >= 0")));
        }
        let scaled = (c * (channel.n_slots() as f64).sqrt()).floor() as usize;
        let n_used = scaled.max(required_slots(&bb84));
        Self::new(bb84, channel, prng, n_used)
    }

    /// Eve measures `eta/N` of the non-covert session's qubits.
    pub fn with_decoys(mut self, eta: usize) -> Result<Self, ProtocolError> {
        if eta > self.bb84.qubit_count() {
            return Err(ProtocolError::InvalidConfig(format!(
                "decoy count {eta} exceeds {} qubits",
                self.bb84.qubit_count()
            )));
        }
        self.decoy_eta = eta;
        Ok(self)
    }

    pub fn bb84(&self) -> &Bb84Config {
        &self.bb84
    }

    pub fn channel(&self) -> &TimeBinChannel {
        &self.channel
    }

    pub fn prng(&self) -> PrngStrength {
        self.prng
    }

    pub fn n_used(&self) -> usize {
        self.n_used
    }

    pub fn decoy_eta(&self) -> usize {
        self.decoy_eta
    }
}

/// Slots one sift attempt occupies when it completes: one per qubit plus
/// one per classical bit.
pub fn required_slots(bb84: &Bb84Config) -> usize {
    let n = bb84.qubit_count();
    let nv = bb84.code_bits();
    // b, retained, p, q (N bits each); two check strings; u + v.
    n + 4 * n + 3 * nv
}
