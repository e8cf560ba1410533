use serde::{Deserialize, Serialize};

use super::config::{Bb84Config, MAX_SIFT_ATTEMPTS};
use crate::channel::{ClassicalAuthChannel, Party, QuantumLink, QubitChannel};
use crate::denial::EveRecord;
use crate::error::{CodeError, ProtocolError};
use crate::games::RandomStream;
use crate::gf2::{BitVector, NestedCodePair};
use crate::qcore::{measure, prepare_bb84, Basis};
use crate::StateVector;

/// Transcript tags, in send order.
pub mod tags {
    pub const BASES: &str = "b";
    pub const RETAINED: &str = "retained";
    pub const KEPT: &str = "p";
    pub const CHECK: &str = "q";
    pub const CHECK_BOB: &str = "check_bob";
    pub const CHECK_ALICE: &str = "check_alice";
    pub const MASKED_CODEWORD: &str = "u_plus_v";
    pub const ALL: [&str; 7] = [BASES, RETAINED, KEPT, CHECK, CHECK_BOB, CHECK_ALICE, MASKED_CODEWORD];
}

/// Names of the private values each party would have to disclose.
pub const ALICE_PRIVATE: [&str; 3] = ["a", "b", "u"];
pub const BOB_PRIVATE: [&str; 3] = ["b_prime", "a_prime", "u"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedBits {
    pub name: String,
    pub bits: BitVector,
}

impl NamedBits {
    pub fn new(name: &str, bits: BitVector) -> Self {
        NamedBits {
            name: name.to_owned(),
            bits,
        }
    }
}

pub fn lookup<'a>(values: &'a [NamedBits], name: &str) -> Option<&'a BitVector> {
    values.iter().find(|v| v.name == name).map(|v| &v.bits)
}

/// A party's output tuple `(sk, pid, public, private)`.
///
/// An aborted session yields [`ProtocolError::Abort`] instead of a result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionResult {
    pub session_key: BitVector,
    pub party_id: Party,
    pub public_values: Vec<NamedBits>,
    pub private_values: Vec<NamedBits>,
}

impl SessionResult {
    pub fn private(&self, name: &str) -> Option<&BitVector> {
        lookup(&self.private_values, name)
    }

    pub fn public(&self, name: &str) -> Option<&BitVector> {
        lookup(&self.public_values, name)
    }
}

/// Every intermediate value of one completed session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bb84Session {
    pub a: BitVector,
    pub b: BitVector,
    pub b_prime: BitVector,
    pub a_prime: BitVector,
    /// Positions where bases agree.
    pub retained: Vec<usize>,
    /// The `2·nv` kept positions, ascending.
    pub p: Vec<usize>,
    /// Check positions, ascending; `q ⊂ p`, `|q| = |p|/2`.
    pub q: Vec<usize>,
    pub v_alice: BitVector,
    pub v_bob: BitVector,
    pub u: BitVector,
    pub error_rate: f64,
    pub attempts: usize,
}

#[derive(Debug, Clone)]
pub struct Bb84Run {
    pub alice: SessionResult,
    pub bob: SessionResult,
    pub session: Bb84Session,
    pub transcript: ClassicalAuthChannel,
    pub eve: Option<EveRecord>,
}

/// Positions where `b` and `b_prime` agree.
pub fn sift(
    a: &BitVector,
    b: &BitVector,
    a_prime: &BitVector,
    b_prime: &BitVector,
) -> Result<Vec<usize>, CodeError> {
    let n = a.len();
    for v in [b, a_prime, b_prime] {
        v.check_len(n)?;
    }
    Ok((0..n).filter(|&i| b[i] == b_prime[i]).collect())
}

/// Per-block key extraction.
///
/// Alice labels the coset of `u`; Bob decodes `v_bob ⊕ (u ⊕ v_alice)` to C1
/// and labels that.
pub fn extract_key(
    pair: &NestedCodePair,
    v_alice: &BitVector,
    v_bob: &BitVector,
    u: &BitVector,
) -> Result<(BitVector, BitVector), CodeError> {
    let n = pair.n();
    let len = u.len();
    v_alice.check_len(len)?;
    v_bob.check_len(len)?;
    if len % n != 0 {
        return Err(CodeError::LengthMismatch {
            expected: len.next_multiple_of(n),
            actual: len,
        });
    }
    let announced = u.xor(v_alice)?;
    let mut ka = Vec::new();
    let mut kb = Vec::new();
    for blk in 0..len / n {
        let u_blk = u.slice(blk * n, n);
        ka.push(pair.key_from_coset(&u_blk)?);
        let noisy = v_bob.slice(blk * n, n).xor(&announced.slice(blk * n, n))?;
        let corrected = pair.c1().decode_to_codeword(&noisy)?;
        kb.push(pair.key_from_coset(&corrected)?);
    }
    Ok((BitVector::concat_all(&ka), BitVector::concat_all(&kb)))
}

fn sorted_choice(rng: &mut RandomStream, from: &[usize], k: usize) -> Vec<usize> {
    let mut picked: Vec<usize> = rng
        .distinct_indices(from.len(), k)
        .into_iter()
        .map(|i| from[i])
        .collect();
    picked.sort_unstable();
    picked
}

fn select(v: &BitVector, positions: &[usize]) -> BitVector {
    v.select(positions)
}

/// Alice's preparation: `a` then `b`, one draw per bit each.
pub fn prepare(n: usize, rng_a: &mut RandomStream) -> (BitVector, BitVector, Vec<StateVector>) {
    let a = BitVector::random(n, rng_a);
    let b = BitVector::random(n, rng_a);
    let states = (0..n)
        .map(|i| prepare_bb84(a[i], Basis::from_bit(b[i])))
        .collect();
    (a, b, states)
}

/// Bob's measurement: `b'` (one draw per bit), then one draw per outcome.
pub fn measure_all(
    states: &[StateVector],
    rng_b: &mut RandomStream,
) -> Result<(BitVector, BitVector), ProtocolError> {
    let b_prime = BitVector::random(states.len(), rng_b);
    let mut a_prime = BitVector::zeros(states.len());
    for (i, psi) in states.iter().enumerate() {
        a_prime.set(i, measure(psi, Basis::from_bit(b_prime[i]), rng_b)?.0);
    }
    Ok((b_prime, a_prime))
}

/// Runs one session end to end.
///
/// `rng_a`, `rng_b` are the parties' private randomness and `rng_chan`
/// drives channel noise and interception. If sifting keeps fewer than
/// `2·nv` positions the whole session is restarted on the same streams, at
/// most [`MAX_SIFT_ATTEMPTS`] times. `cchan` receives the messages of every
/// attempt; [`Bb84Run::transcript`] holds the final attempt only.
pub fn run_bb84(
    config: &Bb84Config,
    qchan: &QubitChannel,
    cchan: &mut ClassicalAuthChannel,
    rng_a: &mut RandomStream,
    rng_b: &mut RandomStream,
    rng_chan: &mut RandomStream,
) -> Result<Bb84Run, ProtocolError> {
    run_bb84_over(config, &mut qchan.clone(), cchan, rng_a, rng_b, rng_chan)
}

/// [`run_bb84`] over an arbitrary quantum link.
pub fn run_bb84_over<L: QuantumLink + ?Sized>(
    config: &Bb84Config,
    link: &mut L,
    cchan: &mut ClassicalAuthChannel,
    rng_a: &mut RandomStream,
    rng_b: &mut RandomStream,
    rng_chan: &mut RandomStream,
) -> Result<Bb84Run, ProtocolError> {
    config.validate()?;
    let n = config.qubit_count();
    let nv = config.code_bits();
    for attempt in 1..=MAX_SIFT_ATTEMPTS {
        let (a, b, states) = prepare(n, rng_a);
        let mut log = ClassicalAuthChannel::new();
        let (delivered, eve) = link.carry(&states, &mut log, rng_chan)?;
        let (b_prime, a_prime) = measure_all(&delivered, rng_b)?;

        log.send(Party::Alice, tags::BASES, b.clone());
        let retained = sift(&a, &b, &a_prime, &b_prime)?;
        log.send(Party::Bob, tags::RETAINED, BitVector::indicator(n, retained.iter().copied()));
        if retained.len() < 2 * nv {
            cchan.log_extend(&log);
            continue;
        }
        let p = sorted_choice(rng_a, &retained, 2 * nv);
        log.send(Party::Alice, tags::KEPT, BitVector::indicator(n, p.iter().copied()));
        let q = sorted_choice(rng_a, &p, nv);
        log.send(Party::Alice, tags::CHECK, BitVector::indicator(n, q.iter().copied()));

        let check_bob = log.send(Party::Bob, tags::CHECK_BOB, select(&a_prime, &q));
        let check_alice = log.send(Party::Alice, tags::CHECK_ALICE, select(&a, &q));
        let errors = check_bob.xor(&check_alice)?.weight();
        let error_rate = errors as f64 / nv as f64;
        if error_rate > config.error_threshold() {
            cchan.log_extend(&log);
            return Err(ProtocolError::Abort {
                error_rate,
                threshold: config.error_threshold(),
            });
        }

        let rest: Vec<usize> = p.iter().copied().filter(|i| q.binary_search(i).is_err()).collect();
        let v_alice = select(&a, &rest);
        let v_bob = select(&a_prime, &rest);
        let pair = config.codes();
        let u = BitVector::concat_all(
            &(0..config.key_blocks())
                .map(|_| pair.c1().sample_codeword(rng_a))
                .collect::<Vec<_>>(),
        );
        log.send(Party::Alice, tags::MASKED_CODEWORD, u.xor(&v_alice)?);
        let (ka, kb) = extract_key(pair, &v_alice, &v_bob, &u)?;
        let u_bob = bob_codeword(pair, &v_bob, log.find(tags::MASKED_CODEWORD).expect("sent"))?;

        let public: Vec<NamedBits> = log
            .log()
            .iter()
            .map(|e| NamedBits::new(&e.tag, e.payload.clone()))
            .collect();
        let alice = SessionResult {
            session_key: ka,
            party_id: Party::Alice,
            public_values: public.clone(),
            private_values: vec![
                NamedBits::new("a", a.clone()),
                NamedBits::new("b", b.clone()),
                NamedBits::new("u", u.clone()),
            ],
        };
        let bob = SessionResult {
            session_key: kb,
            party_id: Party::Bob,
            public_values: public,
            private_values: vec![
                NamedBits::new("b_prime", b_prime.clone()),
                NamedBits::new("a_prime", a_prime.clone()),
                NamedBits::new("u", u_bob),
            ],
        };
        cchan.log_extend(&log);
        return Ok(Bb84Run {
            alice,
            bob,
            session: Bb84Session {
                a,
                b,
                b_prime,
                a_prime,
                retained,
                p,
                q,
                v_alice,
                v_bob,
                u,
                error_rate,
                attempts: attempt,
            },
            transcript: log,
            eve,
        });
    }
    Err(ProtocolError::SiftShortfall {
        needed: 2 * nv,
        attempts: MAX_SIFT_ATTEMPTS,
    })
}

fn bob_codeword(
    pair: &NestedCodePair,
    v_bob: &BitVector,
    announced: &crate::channel::Envelope,
) -> Result<BitVector, CodeError> {
    let noisy = v_bob.xor(&announced.payload)?;
    let blocks: Vec<BitVector> = noisy
        .chunks(pair.n())
        .iter()
        .map(|blk| pair.c1().decode_to_codeword(blk))
        .collect::<Result<_, _>>()?;
    Ok(BitVector::concat_all(&blocks))
}

/// True iff the disclosed private values regenerate every classical message
/// of `transcript` bit-exactly. Index sets are taken from the transcript.
pub fn replay_consistent(
    transcript: &ClassicalAuthChannel,
    alice_private: &[NamedBits],
    bob_private: &[NamedBits],
) -> bool {
    let get = |vals: &[NamedBits], name: &str| lookup(vals, name).cloned();
    let (Some(a), Some(b), Some(u)) = (
        get(alice_private, "a"),
        get(alice_private, "b"),
        get(alice_private, "u"),
    ) else {
        return false;
    };
    let (Some(b_prime), Some(a_prime)) = (get(bob_private, "b_prime"), get(bob_private, "a_prime"))
    else {
        return false;
    };
    let msg = |tag: &str| transcript.find(tag).map(|e| e.payload.clone());
    let (Some(p_ind), Some(q_ind)) = (msg(tags::KEPT), msg(tags::CHECK)) else {
        return false;
    };
    let n = a.len();
    if [&b, &b_prime, &a_prime, &p_ind, &q_ind].iter().any(|v| v.len() != n) {
        return false;
    }
    let Ok(retained) = sift(&a, &b, &a_prime, &b_prime) else {
        return false;
    };
    let q = q_ind.support();
    let rest: Vec<usize> = p_ind.support().into_iter().filter(|i| !q_ind[*i]).collect();
    let expected = [
        (tags::BASES, Some(b.clone())),
        (tags::RETAINED, Some(BitVector::indicator(n, retained))),
        (tags::CHECK_BOB, Some(a_prime.select(&q))),
        (tags::CHECK_ALICE, Some(a.select(&q))),
        (tags::MASKED_CODEWORD, u.xor(&a.select(&rest)).ok()),
    ];
    expected
        .iter()
        .all(|(tag, want)| want.is_some() && msg(tag) == *want)
}

impl ClassicalAuthChannel {
    pub(crate) fn log_extend(&mut self, other: &ClassicalAuthChannel) {
        for e in other.log() {
            self.send(e.sender, &e.tag, e.payload.clone());
        }
    }
}
