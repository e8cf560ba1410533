use rayon::prelude::*;

use super::scheme::{encode_states, ue_codeword, ue_decrypt, UeKey, UeParams};
use crate::channel::{ClassicalAuthChannel, Party, QubitChannel};
use crate::denial::{deny_by_flipping, eve_decoy_attack, judge_check, EvePolicy, EveRecord};
use crate::error::{ExperimentError, ProtocolError};
use crate::games::{RandomStream, RateEstimate, Seed, Trial, MIN_TRIALS};
use crate::gf2::BitVector;

pub mod tags {
    pub const ACK: &str = "ack";
    pub const MAC_KEY: &str = "mac_key";
}

#[derive(Debug, Clone)]
pub struct UeQkeRun {
    pub key_a: BitVector,
    pub key_b: BitVector,
    pub transcript: ClassicalAuthChannel,
    pub z: BitVector,
    pub eve: Option<EveRecord>,
}

/// QKE from uncloneable encryption.
///
/// Alice draws the session key `x` (`rng_a`), encrypts it under the
/// pre-shared key and sends the qubits; Bob acknowledges with an empty
/// message; Alice then publishes the MAC key and Bob decrypts (`rng_b`).
/// A failed MAC check is returned as [`ProtocolError::Reject`].
pub fn qke_from_ue(
    params: &UeParams,
    key: &UeKey,
    qchan: &QubitChannel,
    rng_a: &mut RandomStream,
    rng_b: &mut RandomStream,
    rng_chan: &mut RandomStream,
) -> Result<UeQkeRun, ProtocolError> {
    let x = BitVector::random(params.n(), rng_a);
    let z = ue_codeword(params, key, &x, rng_a)?;
    let (delivered, eve) = qchan.transmit(&encode_states(&z, &key.b), rng_chan)?;
    let mut transcript = ClassicalAuthChannel::new();
    transcript.send(Party::Bob, tags::ACK, BitVector::zeros(0));
    let announced = transcript.send(Party::Alice, tags::MAC_KEY, key.k.clone());
    let bob_key = UeKey {
        k: announced,
        ..key.clone()
    };
    let key_b = ue_decrypt(params, &bob_key, &delivered, rng_b)?;
    Ok(UeQkeRun {
        key_a: x,
        key_b,
        transcript,
        z,
        eve,
    })
}

/// Judge detection rate when the sender of a UE ciphertext denies by
/// flipping `flips` codeword bits, against decoys at rate `eta / N`.
///
/// Every position is measured by Bob in the right basis, so every position
/// counts as sifted.
pub fn ue_denial_detection(
    params: &UeParams,
    eta: usize,
    flips: usize,
    trials: u64,
    master_seed: Seed,
) -> Result<RateEstimate, ExperimentError> {
    if trials < MIN_TRIALS {
        return Err(ExperimentError::TooFewTrials(trials));
    }
    let n = params.qubit_count();
    let policy = EvePolicy::decoys(eta, n)?;
    let all: Vec<usize> = (0..n).collect();
    let detected = (0..trials)
        .into_par_iter()
        .map(|index| {
            let t = Trial { master_seed, index };
            let mut ra = t.stream("alice");
            let key = UeKey::generate(params, &mut ra);
            let m = BitVector::random(params.n(), &mut ra);
            let z = ue_codeword(params, &key, &m, &mut ra)?;
            let (_, record) = eve_decoy_attack(&policy, &encode_states(&z, &key.b), &mut t.stream("eve"))?;
            let claim = deny_by_flipping(&z, &key.b, &all, flips, &mut t.stream("denier"));
            Ok::<u64, ProtocolError>(u64::from(judge_check(&claim, &record).detected))
        })
        .try_reduce(|| 0, |x, y| Ok(x + y))?;
    Ok(RateEstimate::from_counts(detected, trials))
}
