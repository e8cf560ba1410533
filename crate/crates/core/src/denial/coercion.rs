use serde::{Deserialize, Serialize};

use super::eve::{EvePolicy, EveRecord};
use super::judge::{deny_by_flipping, judge_check, DenialClaim};
use crate::bb84::{run_bb84, tags, Bb84Config};
use crate::channel::{ClassicalAuthChannel, QubitChannel};
use crate::error::{ExperimentError, ProtocolError};
use crate::games::{run_experiment, AdvantageEstimate, Distinguisher, ExperimentConfig, RandomStream, Trial};
use crate::gf2::BitVector;

/// A protocol the coercer can audit.
///
/// `coerced_views` runs one session on the trial's substreams and returns
/// the adversary's view when the parties reveal the truth (hypothesis 0)
/// and when they run their faking program (hypothesis 1).
pub trait CoercibleProtocol: Sync {
    type View: Send;

    fn name(&self) -> &str;

    fn has_faking_program(&self) -> bool {
        true
    }

    fn coerced_views(&self, trial: &Trial) -> Result<(Self::View, Self::View), ProtocolError>;
}

/// The coercer-deniability game: `b = 0` shows the real disclosure, `b = 1`
/// the faked one.
pub fn coercer_experiment<P, D>(
    protocol: &P,
    adversary: &D,
    config: &ExperimentConfig,
) -> Result<AdvantageEstimate, ExperimentError>
where
    P: CoercibleProtocol,
    D: Distinguisher<P::View> + ?Sized,
{
    if !protocol.has_faking_program() {
        return Err(ExperimentError::NoFakingProgram);
    }
    run_experiment(|t: &Trial| protocol.coerced_views(t), adversary, config)
}

/// Views that let a judge replay a disclosure against Eve's record.
pub trait Disclosure {
    /// Claimed raw bits and bases of the audited qubit stream.
    fn claim(&self) -> DenialClaim;
    fn eve_record(&self) -> &EveRecord;
}

/// Guesses "fake" iff [`judge_check`] finds a contradiction.
#[derive(Debug, Clone, Copy, Default)]
pub struct JudgeAdversary;

impl<V: Disclosure> Distinguisher<V> for JudgeAdversary {
    fn name(&self) -> &str {
        "judge"
    }

    fn guess(&self, view: &V, _: &mut RandomStream) -> bool {
        judge_check(&view.claim(), view.eve_record()).detected
    }
}

/// What the coercer holds after auditing a BB84 party.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bb84CoercedView {
    pub key: BitVector,
    pub transcript: ClassicalAuthChannel,
    pub eve: EveRecord,
    pub claimed_bits: BitVector,
    pub claimed_bases: BitVector,
}

impl Disclosure for Bb84CoercedView {
    fn claim(&self) -> DenialClaim {
        DenialClaim::honest(self.claimed_bits.clone(), self.claimed_bases.clone())
    }

    fn eve_record(&self) -> &EveRecord {
        &self.eve
    }
}

/// BB84 under decoy interception, denied by flipping sifted raw bits.
#[derive(Debug, Clone)]
pub struct NaiveBb84Denial {
    pub config: Bb84Config,
    pub eta: usize,
    pub flips: usize,
}

impl NaiveBb84Denial {
    fn channel(&self) -> Result<QubitChannel, ProtocolError> {
        let policy = EvePolicy::decoys(self.eta, self.config.qubit_count())?;
        Ok(QubitChannel::noiseless().with_interceptor(policy))
    }
}

impl CoercibleProtocol for NaiveBb84Denial {
    type View = Bb84CoercedView;

    fn name(&self) -> &str {
        "bb84-naive-denial"
    }

    fn coerced_views(&self, trial: &Trial) -> Result<(Bb84CoercedView, Bb84CoercedView), ProtocolError> {
        let mut log = ClassicalAuthChannel::new();
        let run = run_bb84(
            &self.config,
            &self.channel()?,
            &mut log,
            &mut trial.stream("alice"),
            &mut trial.stream("bob"),
            &mut trial.stream("chan"),
        )?;
        let s = &run.session;
        let eve = run.eve.clone().unwrap_or_default();
        let claim = deny_by_flipping(&s.a, &s.b, &s.retained, self.flips, &mut trial.stream("denier"));
        let fake_key = key_for_claim(&self.config, &run.transcript, &claim.claimed_bits, &s.p, &s.q)?;
        let real = Bb84CoercedView {
            key: run.alice.session_key.clone(),
            transcript: run.transcript.clone(),
            eve: eve.clone(),
            claimed_bits: s.a.clone(),
            claimed_bases: s.b.clone(),
        };
        let fake = Bb84CoercedView {
            key: fake_key,
            transcript: run.transcript,
            eve,
            claimed_bits: claim.claimed_bits,
            claimed_bases: claim.claimed_bases,
        };
        Ok((real, fake))
    }
}

/// Key implied by claimed raw bits: `u* = (u + v) ⊕ v*`, decoded to C1 and
/// labelled block by block.
fn key_for_claim(
    config: &Bb84Config,
    transcript: &ClassicalAuthChannel,
    claimed: &BitVector,
    p: &[usize],
    q: &[usize],
) -> Result<BitVector, ProtocolError> {
    let rest: Vec<usize> = p.iter().copied().filter(|i| q.binary_search(i).is_err()).collect();
    let announced = &transcript
        .find(tags::MASKED_CODEWORD)
        .ok_or_else(|| ProtocolError::InvalidConfig("transcript lacks u+v".into()))?
        .payload;
    let pair = config.codes();
    let u_star = announced.xor(&claimed.select(&rest))?;
    let labels: Vec<BitVector> = u_star
        .chunks(pair.n())
        .iter()
        .map(|blk| pair.key_from_coset(&pair.c1().decode_to_codeword(blk)?))
        .collect::<Result<_, _>>()?;
    Ok(BitVector::concat_all(&labels))
}

/// Plain BB84 offers no faking program; the experiment refuses it.
#[derive(Debug, Clone)]
pub struct HonestBb84 {
    pub config: Bb84Config,
}

impl CoercibleProtocol for HonestBb84 {
    type View = Bb84CoercedView;

    fn name(&self) -> &str {
        "bb84"
    }

    fn has_faking_program(&self) -> bool {
        false
    }

    fn coerced_views(&self, _: &Trial) -> Result<(Bb84CoercedView, Bb84CoercedView), ProtocolError> {
        Err(ProtocolError::InvalidConfig("BB84 has no faking program".into()))
    }
}
