use serde::{Deserialize, Serialize};

use super::prng::{sparse_sample, KeyedPrng, PrngSpec, SlotSource};
use crate::error::ProtocolError;
use crate::games::RandomStream;
use crate::gf2::BitVector;
use crate::scalar::Scalar;

/// Time-bin channel with independent per-slot detections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeBinChannel {
    n_slots: usize,
    p_dark: f64,
    p_signal: f64,
}

impl TimeBinChannel {
    /// Requires `0 ≤ p_dark ≤ p_signal ≤ 1`; equality gives a channel whose
    /// signals are invisible.
    pub fn new(n_slots: usize, p_dark: f64, p_signal: f64) -> Result<Self, ProtocolError> {
        if n_slots == 0 {
            return Err(ProtocolError::InvalidConfig("n_slots must be positive".into()));
        }
        if !(0.0 <= p_dark && p_dark <= p_signal && p_signal <= 1.0) {
            return Err(ProtocolError::InvalidConfig(format!(
                "need 0 <= p_dark <= p_signal <= 1, got p_dark = {p_dark}, p_signal = {p_signal}"
            )));
        }
        Ok(TimeBinChannel {
            n_slots,
            p_dark,
            p_signal,
        })
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn p_dark(&self) -> f64 {
        self.p_dark
    }

    pub fn p_signal(&self) -> f64 {
        self.p_signal
    }

    pub(crate) fn check_used(&self, n_used: usize) -> Result<(), ProtocolError> {
        if n_used > self.n_slots {
            return Err(ProtocolError::CovertCapacity {
                needed: n_used,
                available: self.n_slots,
            });
        }
        Ok(())
    }
}

/// The warden's per-slot detection record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WardenObservation {
    pub detections: BitVector,
}

impl WardenObservation {
    pub fn count(&self) -> usize {
        self.detections.weight()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleSource {
    TrueRandom,
    Prng(PrngSpec),
}

/// Slots carrying signals, in draw order (pulse `i` rides `used_slots[i]`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CovertSchedule {
    pub used_slots: Vec<usize>,
    pub source: ScheduleSource,
}

impl CovertSchedule {
    pub fn len(&self) -> usize {
        self.used_slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.used_slots.is_empty()
    }

    pub fn indicator(&self, n_slots: usize) -> BitVector {
        BitVector::indicator(n_slots, self.used_slots.iter().copied())
    }
}

fn schedule_from(
    source: &mut impl SlotSource,
    kind: ScheduleSource,
    n_slots: usize,
    n_used: usize,
) -> Result<CovertSchedule, ProtocolError> {
    if n_used > n_slots {
        return Err(ProtocolError::CovertCapacity {
            needed: n_used,
            available: n_slots,
        });
    }
    Ok(CovertSchedule {
        used_slots: sparse_sample(source, n_slots, n_used),
        source: kind,
    })
}

/// Schedule drawn from true randomness.
pub fn covert_schedule(
    n_slots: usize,
    n_used: usize,
    rng: &mut RandomStream,
) -> Result<CovertSchedule, ProtocolError> {
    schedule_from(rng, ScheduleSource::TrueRandom, n_slots, n_used)
}

/// Schedule expanded from a pre-shared generator key.
pub fn prng_schedule(
    n_slots: usize,
    n_used: usize,
    spec: PrngSpec,
) -> Result<CovertSchedule, ProtocolError> {
    schedule_from(&mut KeyedPrng::new(spec), ScheduleSource::Prng(spec), n_slots, n_used)
}

/// One Bernoulli draw per slot, in slot order.
pub fn warden_observe(
    channel: &TimeBinChannel,
    schedule: Option<&CovertSchedule>,
    rng: &mut RandomStream,
) -> Result<WardenObservation, ProtocolError> {
    let mut used = vec![false; channel.n_slots];
    if let Some(s) = schedule {
        for &slot in &s.used_slots {
            if slot >= channel.n_slots {
                return Err(ProtocolError::InvalidConfig(format!(
                    "scheduled slot {slot} outside channel of {} slots",
                    channel.n_slots
                )));
            }
            used[slot] = true;
        }
    }
    let detections = used
        .iter()
        .map(|&u| rng.bernoulli(if u { channel.p_signal } else { channel.p_dark }))
        .collect();
    Ok(WardenObservation { detections })
}

fn ln_factorials<T: Scalar>(n: usize) -> Vec<T> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = T::zero();
    table.push(acc);
    for i in 1..=n {
        acc += T::from_usize(i).expect("representable").ln();
        table.push(acc);
    }
    table
}

fn binomial_pmf<T: Scalar>(n: usize, p: T, lnf: &[T]) -> Vec<T> {
    let mut pmf = vec![T::zero(); n + 1];
    if p <= T::zero() {
        pmf[0] = T::one();
    } else if p >= T::one() {
        pmf[n] = T::one();
    } else {
        let (lp, lq) = (p.ln(), (T::one() - p).ln());
        for (k, slot) in pmf.iter_mut().enumerate() {
            let kt = T::from_usize(k).expect("representable");
            let rest = T::from_usize(n - k).expect("representable");
            *slot = (lnf[n] - lnf[k] - lnf[n - k] + kt * lp + rest * lq).exp();
        }
    }
    pmf
}

fn convolve<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == T::zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact total-detection-count distributions `(idle, active)`.
pub fn detection_count_pmfs<T: Scalar>(
    channel: &TimeBinChannel,
    n_used: usize,
) -> Result<(Vec<T>, Vec<T>), ProtocolError> {
    channel.check_used(n_used)?;
    let n = channel.n_slots;
    let lnf = ln_factorials::<T>(n);
    let (pd, ps) = (T::lit(channel.p_dark), T::lit(channel.p_signal));
    let idle = binomial_pmf(n, pd, &lnf);
    let active = if n_used == 0 || pd == ps {
        idle.clone()
    } else {
        convolve(&binomial_pmf(n - n_used, pd, &lnf), &binomial_pmf(n_used, ps, &lnf))
    };
    Ok((idle, active))
}

/// Detection bias `ε = ½·TV(idle, active)` of the count statistic.
pub fn warden_bias_exact<T: Scalar>(
    channel: &TimeBinChannel,
    n_used: usize,
) -> Result<T, ProtocolError> {
    let (idle, active) = detection_count_pmfs::<T>(channel, n_used)?;
    let l1 = idle
        .iter()
        .zip(&active)
        .fold(T::zero(), |acc, (&a, &b)| acc + (a - b).abs());
    Ok(l1 * T::lit(0.25))
}

/// Largest `n_used` whose exact bias stays at or below `epsilon`.
///
/// Binary search; the bias is nondecreasing in `n_used`.
pub fn max_covert_slots(
    n_slots: usize,
    p_dark: f64,
    p_signal: f64,
    epsilon: f64,
) -> Result<usize, ProtocolError> {
    let ch = TimeBinChannel::new(n_slots, p_dark, p_signal)?;
    let bias = |u: usize| warden_bias_exact::<f64>(&ch, u);
    if bias(n_slots)? <= epsilon {
        return Ok(n_slots);
    }
    let (mut lo, mut hi) = (0usize, n_slots);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bias(mid)? <= epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
