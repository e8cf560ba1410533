use serde::{Deserialize, Serialize};

use super::mac::MacScheme;
use crate::error::ProtocolError;
use crate::games::RandomStream;
use crate::gf2::{BitVector, DualContainingPair};
use crate::qcore::{measure, prepare_bb84, Basis};
use crate::StateVector;

/// Lengths for uncloneable encryption of `n`-bit messages with `s`-bit
/// tags, using `blocks` copies of the code pair.
#[derive(Debug, Clone)]
pub struct UeParams {
    n: usize,
    s: usize,
    pair: DualContainingPair,
    blocks: usize,
    mac: MacScheme,
}

impl UeParams {
    /// Chooses the smallest `blocks` whose payload covers `n + s`; the
    /// payload must divide evenly.
    pub fn new(n: usize, s: usize, pair: DualContainingPair) -> Result<Self, ProtocolError> {
        if n == 0 {
            return Err(ProtocolError::InvalidConfig("message length must be positive".into()));
        }
        let per_block = pair.payload_len();
        if per_block == 0 || (n + s) % per_block != 0 {
            return Err(ProtocolError::InvalidConfig(format!(
                "n + s = {} is not a multiple of the per-block payload {per_block}",
                n + s
            )));
        }
        Ok(UeParams {
            n,
            s,
            blocks: (n + s) / per_block,
            mac: MacScheme::new(s)?,
            pair,
        })
    }

    /// C1 = C2 = Hamming[7,4]: one payload bit per 7 qubits.
    pub fn toy(n: usize, s: usize) -> Result<Self, ProtocolError> {
        Self::new(n, s, DualContainingPair::toy())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn pair(&self) -> &DualContainingPair {
        &self.pair
    }

    pub fn mac(&self) -> &MacScheme {
        &self.mac
    }

    /// `N·blocks`.
    pub fn qubit_count(&self) -> usize {
        self.pair.n() * self.blocks
    }

    pub fn syndrome_len(&self) -> usize {
        self.pair.syndrome_len() * self.blocks
    }
}

/// Pre-shared key `(k, e, c1_syn, b)`.
///
/// `k` is the `2s`-bit MAC key; `c1_syn` holds one C1 syndrome per block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UeKey {
    pub k: BitVector,
    pub e: BitVector,
    pub c1_syn: BitVector,
    pub b: BitVector,
}

impl UeKey {
    /// Draws `k`, `e`, `c1_syn`, `b` in that order, one draw per bit.
    pub fn generate(params: &UeParams, rng: &mut RandomStream) -> Self {
        UeKey {
            k: BitVector::random(params.mac.key_len(), rng),
            e: BitVector::random(params.n + params.s, rng),
            c1_syn: BitVector::random(params.syndrome_len(), rng),
            b: BitVector::random(params.qubit_count(), rng),
        }
    }

    pub fn check(&self, params: &UeParams) -> Result<(), ProtocolError> {
        self.k.check_len(params.mac.key_len())?;
        self.e.check_len(params.n + params.s)?;
        self.c1_syn.check_len(params.syndrome_len())?;
        self.b.check_len(params.qubit_count())?;
        Ok(())
    }
}

/// Hex form of a [`UeKey`]; lengths come from the parameters on decode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UeKeyHex {
    pub k: String,
    pub e: String,
    pub c1_syn: String,
    pub b: String,
}

impl From<&UeKey> for UeKeyHex {
    fn from(key: &UeKey) -> Self {
        UeKeyHex {
            k: key.k.to_hex(),
            e: key.e.to_hex(),
            c1_syn: key.c1_syn.to_hex(),
            b: key.b.to_hex(),
        }
    }
}

impl UeKeyHex {
    pub fn decode(&self, params: &UeParams) -> Result<UeKey, ProtocolError> {
        Ok(UeKey {
            k: BitVector::from_hex(&self.k, params.mac.key_len())?,
            e: BitVector::from_hex(&self.e, params.n + params.s)?,
            c1_syn: BitVector::from_hex(&self.c1_syn, params.syndrome_len())?,
            b: BitVector::from_hex(&self.b, params.qubit_count())?,
        })
    }
}

pub fn mac_tag(scheme: &MacScheme, k: &BitVector, m: &BitVector) -> Result<BitVector, ProtocolError> {
    scheme.tag(k, m)
}

/// Classical part of encryption: `x = m‖MAC_k(m)`, `y = x ⊕ e`, then one
/// constrained codeword per block.
pub fn ue_codeword(
    params: &UeParams,
    key: &UeKey,
    m: &BitVector,
    rng: &mut RandomStream,
) -> Result<BitVector, ProtocolError> {
    key.check(params)?;
    m.check_len(params.n)?;
    let x = m.concat(&params.mac.tag(&key.k, m)?);
    let y = x.xor(&key.e)?;
    let per = params.pair.payload_len();
    let syn = params.pair.syndrome_len();
    let blocks: Vec<BitVector> = (0..params.blocks)
        .map(|j| {
            params
                .pair
                .encode_ue_codeword(&key.c1_syn.slice(j * syn, syn), &y.slice(j * per, per), rng)
        })
        .collect::<Result<_, _>>()?;
    Ok(BitVector::concat_all(&blocks))
}

/// Qubit `i` carries `z_i` in basis `b_i`.
pub fn encode_states(z: &BitVector, bases: &BitVector) -> Vec<StateVector> {
    (0..z.len())
        .map(|i| prepare_bb84(z[i], Basis::from_bit(bases[i])))
        .collect()
}

pub fn ue_encrypt(
    params: &UeParams,
    key: &UeKey,
    m: &BitVector,
    rng: &mut RandomStream,
) -> Result<Vec<StateVector>, ProtocolError> {
    let z = ue_codeword(params, key, m, rng)?;
    Ok(encode_states(&z, &key.b))
}

/// Recovers `y` from a (possibly noisy) codeword.
pub fn decode_payload(params: &UeParams, key: &UeKey, z: &BitVector) -> Result<BitVector, ProtocolError> {
    z.check_len(params.qubit_count())?;
    let (n, syn) = (params.pair.n(), params.pair.syndrome_len());
    let parts: Vec<BitVector> = (0..params.blocks)
        .map(|j| {
            params
                .pair
                .decode_ue_codeword(&key.c1_syn.slice(j * syn, syn), &z.slice(j * n, n))
        })
        .collect::<Result<_, _>>()?;
    Ok(BitVector::concat_all(&parts))
}

/// Splits `x` into `(m, tag)` and checks the tag.
pub fn open_payload(params: &UeParams, key: &BitVector, x: &BitVector) -> Result<BitVector, ProtocolError> {
    let m = x.slice(0, params.n);
    let tag = x.slice(params.n, params.s);
    if params.mac.verify(key, &m, &tag)? {
        Ok(m)
    } else {
        Err(ProtocolError::Reject)
    }
}

/// Measures qubit `i` in basis `b_i` (one draw each), decodes and verifies.
pub fn ue_decrypt(
    params: &UeParams,
    key: &UeKey,
    states: &[StateVector],
    rng: &mut RandomStream,
) -> Result<BitVector, ProtocolError> {
    key.check(params)?;
    if states.len() != params.qubit_count() {
        return Err(ProtocolError::InvalidConfig(format!(
            "expected {} qubits, got {}",
            params.qubit_count(),
            states.len()
        )));
    }
    let mut z = BitVector::zeros(states.len());
    for (i, psi) in states.iter().enumerate() {
        z.set(i, measure(psi, Basis::from_bit(key.b[i]), rng)?.0);
    }
    let y = decode_payload(params, key, &z)?;
    open_payload(params, &key.k, &y.xor(&key.e)?)
}

/// Fake key opening the ciphertext of `m` as `m_fake`, with a fresh MAC key.
pub fn ue_fake(
    params: &UeParams,
    key: &UeKey,
    m: &BitVector,
    m_fake: &BitVector,
    rng: &mut RandomStream,
) -> Result<UeKey, ProtocolError> {
    let k_fake = BitVector::random(params.mac.key_len(), rng);
    ue_fake_with_mac_key(params, key, m, m_fake, &k_fake)
}

/// `e' = (x ⊕ e) ⊕ x'` with `x' = m_fake‖MAC_{k'}(m_fake)`; syndrome and
/// bases are revealed unchanged.
pub fn ue_fake_with_mac_key(
    params: &UeParams,
    key: &UeKey,
    m: &BitVector,
    m_fake: &BitVector,
    k_fake: &BitVector,
) -> Result<UeKey, ProtocolError> {
    key.check(params)?;
    m.check_len(params.n)?;
    m_fake.check_len(params.n)?;
    let y = m.concat(&params.mac.tag(&key.k, m)?).xor(&key.e)?;
    let x_fake = m_fake.concat(&params.mac.tag(k_fake, m_fake)?);
    Ok(UeKey {
        k: k_fake.clone(),
        e: y.xor(&x_fake)?,
        c1_syn: key.c1_syn.clone(),
        b: key.b.clone(),
    })
}

/// Judge replay of a disclosed key against a full record of `z`.
///
/// Consistent iff every block of `z` has the disclosed syndrome and
/// `Q·z ⊕ e` opens to `claimed` under the disclosed MAC key.
pub fn ue_judge_replay(params: &UeParams, key: &UeKey, z: &BitVector, claimed: &BitVector) -> bool {
    if key.check(params).is_err() || z.len() != params.qubit_count() {
        return false;
    }
    let (n, syn) = (params.pair.n(), params.pair.syndrome_len());
    let syndromes_ok = (0..params.blocks).all(|j| {
        params.pair.c1().syndrome(&z.slice(j * n, n)).ok() == Some(key.c1_syn.slice(j * syn, syn))
    });
    let per = params.pair.payload_len();
    let y: Vec<BitVector> = (0..params.blocks)
        .filter_map(|j| params.pair.quotient_checks().mul_vec(&z.slice(j * n, n)).ok())
        .collect();
    if !syndromes_ok || y.len() * per != params.n + params.s {
        return false;
    }
    let x = match BitVector::concat_all(&y).xor(&key.e) {
        Ok(x) => x,
        Err(_) => return false,
    };
    matches!(open_payload(params, &key.k, &x), Ok(m) if m == *claimed)
}
