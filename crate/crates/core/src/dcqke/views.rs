use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use super::config::CovertQkeConfig;
use super::covert::{covert_observations, covert_session, labels, CovertTranscript};
use crate::bb84::{lookup, replay_consistent, run_bb84, Bb84Run, NamedBits, ALICE_PRIVATE, BOB_PRIVATE};
use crate::channel::{warden_observe, ClassicalAuthChannel, PrngSpec, QubitChannel, WardenObservation};
use crate::denial::{coercer_experiment, CoercibleProtocol, DenialClaim, Disclosure, EvePolicy, EveRecord};
use crate::error::{ExperimentError, ProtocolError};
use crate::games::{AdvantageEstimate, Distinguisher, ExperimentConfig, RandomStream, Trial};
use crate::gf2::BitVector;

/// Name of the schedule key inside the covert randomness.
pub const PRNG_SEED: &str = "prng_seed";

/// Aborted non-covert sessions are rerun this many times inside games.
pub const OVERT_ATTEMPTS: usize = 16;

/// Both parties' private values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Randomness {
    pub alice: Vec<NamedBits>,
    pub bob: Vec<NamedBits>,
}

impl Randomness {
    fn of(run: &Bb84Run) -> Self {
        Randomness {
            alice: run.alice.private_values.clone(),
            bob: run.bob.private_values.clone(),
        }
    }

    /// True iff the names are exactly the BB84 private-value schema.
    pub fn matches_schema(&self) -> bool {
        let names = |v: &[NamedBits]| v.iter().map(|nb| nb.name.clone()).collect::<Vec<_>>();
        names(&self.alice) == ALICE_PRIVATE && names(&self.bob) == BOB_PRIVATE
    }
}

/// A completed DC-QKE run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcQkeResult {
    pub real_key: BitVector,
    pub fake_key: BitVector,
    /// Covert-session privates; Alice's list ends with [`PRNG_SEED`].
    pub real_randomness: Randomness,
    pub fake_randomness: Randomness,
    pub covert_transcript: CovertTranscript,
    pub noncovert_transcript: ClassicalAuthChannel,
    /// Eve's decoy record on the non-covert session.
    pub noncovert_eve: EveRecord,
    pub covert_observation: WardenObservation,
    /// Fresh idle-channel sample standing in for the covert slots.
    pub idle_observation: WardenObservation,
}

fn seed_bits(spec: &PrngSpec) -> BitVector {
    let width = spec.strength.seed_bits() as usize;
    let bytes = spec.seed.to_be_bytes();
    let all = BitVector::from_bytes(&bytes, 128).expect("16 bytes");
    all.slice(128 - width, width)
}

fn overt_channel(config: &CovertQkeConfig) -> Result<QubitChannel, ProtocolError> {
    let policy = EvePolicy::decoys(config.decoy_eta(), config.bb84().qubit_count())?;
    Ok(QubitChannel::noiseless().with_interceptor(policy))
}

fn overt_once(config: &CovertQkeConfig, root: &mut RandomStream) -> Result<(Bb84Run, EveRecord), ProtocolError> {
    let mut log = ClassicalAuthChannel::new();
    let (mut ra, mut rb, mut rc) = (root.fork("alice"), root.fork("bob"), root.fork("chan"));
    let run = run_bb84(config.bb84(), &overt_channel(config)?, &mut log, &mut ra, &mut rb, &mut rc)?;
    let eve = run.eve.clone().unwrap_or_default();
    Ok((run, eve))
}

/// Non-covert session, rerun on fresh forks after an abort.
fn overt_session(
    config: &CovertQkeConfig,
    root: &mut RandomStream,
    attempts: usize,
) -> Result<(Bb84Run, EveRecord), ProtocolError> {
    let mut last = None;
    for _ in 0..attempts {
        match overt_once(config, &mut root.fork("session")) {
            Err(e @ ProtocolError::Abort { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or_else(|| ProtocolError::InvalidConfig("zero session attempts".into())))
}

/// DC-QKE: a covert session for the real key and an independent honest
/// session for the fake one. Either failure fails the run.
///
/// Forks `covert`, `overt` and `idle` from `rng`.
pub fn run_dc_qke(config: &CovertQkeConfig, rng: &mut RandomStream) -> Result<DcQkeResult, ProtocolError> {
    let covert = covert_session(config, &mut rng.fork(labels::COVERT))?;
    let (overt, noncovert_eve) = overt_session(config, &mut rng.fork(labels::OVERT), 1)?;
    let idle_observation = warden_observe(config.channel(), None, &mut rng.fork(labels::IDLE))?;
    let (run, covert_transcript) = covert.outcome?;
    let mut real_randomness = Randomness::of(&run);
    real_randomness.alice.push(NamedBits::new(PRNG_SEED, seed_bits(&covert.prng)));
    Ok(DcQkeResult {
        real_key: run.alice.session_key,
        fake_key: overt.alice.session_key.clone(),
        real_randomness,
        fake_randomness: Randomness::of(&overt),
        covert_transcript,
        noncovert_transcript: overt.transcript,
        noncovert_eve,
        covert_observation: covert.warden_view,
        idle_observation,
    })
}

/// The parties' faking program: the fake key and the honest private values
/// of the non-covert session.
pub fn faking_program(result: &DcQkeResult) -> (BitVector, Randomness) {
    (result.fake_key.clone(), result.fake_randomness.clone())
}

/// A coerced party's disclosure together with everything the adversary saw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct View {
    pub key: BitVector,
    pub transcript: ClassicalAuthChannel,
    pub eve: EveRecord,
    /// The adversary's record of the covert slots.
    pub slots: WardenObservation,
    pub randomness: Randomness,
}

impl View {
    /// Schema names match and the randomness replays the transcript.
    pub fn well_formed(&self) -> bool {
        self.randomness.matches_schema()
            && replay_consistent(&self.transcript, &self.randomness.alice, &self.randomness.bob)
    }
}

impl Disclosure for View {
    fn claim(&self) -> DenialClaim {
        let get = |name| lookup(&self.randomness.alice, name).cloned().unwrap_or_default();
        DenialClaim::honest(get("a"), get("b"))
    }

    fn eve_record(&self) -> &EveRecord {
        &self.eve
    }
}

fn views_from(
    key: &BitVector,
    randomness: &Randomness,
    transcript: &ClassicalAuthChannel,
    eve: &EveRecord,
    active: WardenObservation,
    idle: WardenObservation,
) -> (View, View) {
    let view = |slots| View {
        key: key.clone(),
        transcript: transcript.clone(),
        eve: eve.clone(),
        slots,
        randomness: randomness.clone(),
    };
    (view(active), view(idle))
}

/// `(real, fake)`: both disclose the faking program's output against the
/// non-covert transcript; real carries the covert slots as observed, fake a
/// fresh idle-channel sample.
pub fn build_views(result: &DcQkeResult) -> (View, View) {
    let (key, randomness) = faking_program(result);
    views_from(
        &key,
        &randomness,
        &result.noncovert_transcript,
        &result.noncovert_eve,
        result.covert_observation.clone(),
        result.idle_observation.clone(),
    )
}

/// DC-QKE as a coercible protocol.
///
/// Slot observations come from the same substreams as the covert game, so
/// both games see identical warden records on shared seeds.
#[derive(Debug, Clone)]
pub struct DcQke {
    pub config: CovertQkeConfig,
}

impl CoercibleProtocol for DcQke {
    type View = View;

    fn name(&self) -> &str {
        "dc-qke"
    }

    fn coerced_views(&self, trial: &Trial) -> Result<(View, View), ProtocolError> {
        let (active, idle) = covert_observations(&self.config, trial)?;
        let (run, eve) = overt_session(&self.config, &mut trial.stream(labels::OVERT), OVERT_ATTEMPTS)?;
        let randomness = Randomness::of(&run);
        Ok(views_from(&run.alice.session_key, &randomness, &run.transcript, &eve, active, idle))
    }
}

/// The coercer-deniability game for DC-QKE.
pub fn deniability_experiment<D>(
    config: &CovertQkeConfig,
    adversary: &D,
    exp: &ExperimentConfig,
) -> Result<AdvantageEstimate, ExperimentError>
where
    D: Distinguisher<View> + ?Sized,
{
    coercer_experiment(&DcQke { config: config.clone() }, adversary, exp)
}

/// Lifts a warden to views by applying it to the slot record.
#[derive(Debug, Clone)]
pub struct OnSlots<W> {
    pub warden: W,
    name: String,
}

impl<W: Distinguisher<WardenObservation>> OnSlots<W> {
    pub fn new(warden: W) -> Self {
        let name = format!("{}-on-slots", warden.name());
        OnSlots { warden, name }
    }
}

impl<W: Distinguisher<WardenObservation>> Distinguisher<View> for OnSlots<W> {
    fn name(&self) -> &str {
        &self.name
    }

    fn guess(&self, view: &View, coins: &mut RandomStream) -> bool {
        self.warden.guess(&view.slots, coins)
    }
}

/// Turns a deniability adversary into a covert-game warden.
///
/// Given slot observations it runs its own non-covert session, hands the
/// adversary the resulting view and reports "covert session present" iff
/// the adversary says "real".
#[derive(Debug)]
pub struct ReductionDistinguisher<A> {
    adversary: A,
    config: CovertQkeConfig,
    calls: AtomicUsize,
    name: String,
}

impl<A: Distinguisher<View>> ReductionDistinguisher<A> {
    pub fn new(adversary: A, config: CovertQkeConfig) -> Self {
        let name = format!("reduction({})", adversary.name());
        ReductionDistinguisher {
            adversary,
            config,
            calls: AtomicUsize::new(0),
            name,
        }
    }

    /// Adversary invocations so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    fn synthesize(&self, slots: &WardenObservation, coins: &mut RandomStream) -> Result<View, ProtocolError> {
        let (run, eve) = overt_session(&self.config, &mut coins.fork(labels::OVERT), OVERT_ATTEMPTS)?;
        Ok(View {
            key: run.alice.session_key.clone(),
            randomness: Randomness::of(&run),
            transcript: run.transcript,
            eve,
            slots: slots.clone(),
        })
    }
}

/// Alias matching the operation name.
pub fn reduction_distinguisher<A: Distinguisher<View>>(
    adversary: A,
    config: &CovertQkeConfig,
) -> ReductionDistinguisher<A> {
    ReductionDistinguisher::new(adversary, config.clone())
}

impl<A: Distinguisher<View>> Distinguisher<WardenObservation> for ReductionDistinguisher<A> {
    fn name(&self) -> &str {
        &self.name
    }

    fn guess(&self, obs: &WardenObservation, coins: &mut RandomStream) -> bool {
        let view = match self.synthesize(obs, coins) {
            Ok(v) => v,
            // No transcript to wrap: fall back to a coin.
            Err(_) => return coins.bit(),
        };
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.adversary.guess(&view, coins)
    }
}

