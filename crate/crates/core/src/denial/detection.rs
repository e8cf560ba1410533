use rayon::prelude::*;

use super::eve::{eve_decoy_attack, EvePolicy};
use super::judge::{deny_by_flipping, judge_check};
use crate::bb84::{prepare, sift};
use crate::error::{ExperimentError, ProtocolError};
use crate::games::{RateEstimate, Seed, Trial, MIN_TRIALS};
use crate::gf2::BitVector;

/// Largest `N` accepted by [`exact_detection_probability`].
pub const MAX_EXACT_N: usize = 10;

fn check_params(n: usize, eta: usize, flips: usize) -> Result<(), ProtocolError> {
    if n == 0 || eta > n {
        return Err(ProtocolError::InvalidConfig(format!("need 0 <= eta <= N, got eta = {eta}, N = {n}")));
    }
    if flips == 0 {
        return Err(ProtocolError::InvalidConfig("flips must be at least 1".into()));
    }
    Ok(())
}

/// One detection trial on the qubit layer.
///
/// Alice prepares `n` states (`alice` stream), Eve attacks at rate `eta/n`
/// (`eve` stream), Bob picks bases (`bob` stream), the denier flips
/// sifted bits (`denier` stream) and the judge checks the claim.
pub fn detection_trial(trial: &Trial, n: usize, policy: &EvePolicy, flips: usize) -> Result<bool, ProtocolError> {
    let (a, b, states) = prepare(n, &mut trial.stream("alice"));
    let (_, record) = eve_decoy_attack(policy, &states, &mut trial.stream("eve"))?;
    let b_prime = BitVector::random(n, &mut trial.stream("bob"));
    let sifted = sift(&a, &b, &a, &b_prime)?;
    let claim = deny_by_flipping(&a, &b, &sifted, flips, &mut trial.stream("denier"));
    Ok(judge_check(&claim, &record).detected)
}

/// Monte-Carlo judge detection rate with a Wilson 95% interval.
pub fn detection_probability(
    n: usize,
    eta: usize,
    flips: usize,
    trials: u64,
    master_seed: Seed,
) -> Result<RateEstimate, ExperimentError> {
    check_params(n, eta, flips)?;
    if trials < MIN_TRIALS {
        return Err(ExperimentError::TooFewTrials(trials));
    }
    let policy = EvePolicy::decoys(eta, n)?;
    let detected = (0..trials)
        .into_par_iter()
        .map(|index| {
            let trial = Trial { master_seed, index };
            detection_trial(&trial, n, &policy, flips).map(u64::from)
        })
        .try_reduce(|| 0, |x, y| Ok(x + y))?;
    Ok(RateEstimate::from_counts(detected, trials))
}

/// Exact detection probability by exhaustive enumeration.
///
/// Walks all `6^n` joint configurations of (sifted or not) × (Eve absent,
/// Eve in Alice's basis, Eve in the other basis). For each configuration,
/// the fraction of detecting flip sets is found by listing every flip subset
/// of the sifted positions, memoised on (sifted count, matched count).
pub fn exact_detection_probability(n: usize, eta: usize, flips: usize) -> Result<f64, ProtocolError> {
    check_params(n, eta, flips)?;
    if n > MAX_EXACT_N {
        return Err(ProtocolError::InvalidConfig(format!(
            "exhaustive enumeration limited to N <= {MAX_EXACT_N}"
        )));
    }
    let m = eta as f64 / n as f64;
    // (sifted, eve state) weights; eve: 0 none, 1 matched, 2 other
    let weights = [
        [0.5 * (1.0 - m), 0.5 * m / 2.0, 0.5 * m / 2.0],
        [0.5 * (1.0 - m), 0.5 * m / 2.0, 0.5 * m / 2.0],
    ];
    let mut memo = vec![vec![None::<f64>; n + 1]; n + 1];
    let mut total = 0.0;
    let mut digits = vec![0usize; n];
    loop {
        let mut w = 1.0;
        let (mut s, mut matched) = (0usize, 0usize);
        for &d in &digits {
            let (sifted, eve) = (d / 3, d % 3);
            w *= weights[sifted][eve];
            if sifted == 1 {
                s += 1;
                matched += usize::from(eve == 1);
            }
        }
        if w > 0.0 {
            let frac = *memo[s][matched].get_or_insert_with(|| subset_fraction(s, matched, flips));
            total += w * frac;
        }
        // base-6 increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(total);
            }
            digits[i] += 1;
            if digits[i] < 6 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Fraction of `min(f, s)`-subsets of `s` positions that hit one of the
/// first `matched`, by listing them.
fn subset_fraction(s: usize, matched: usize, f: usize) -> f64 {
    let k = f.min(s);
    if k == 0 {
        return 0.0;
    }
    let matched_mask = (1u32 << matched) - 1;
    let (mut hit, mut all) = (0u64, 0u64);
    for mask in 0u32..1 << s {
        if mask.count_ones() as usize == k {
            all += 1;
            hit += u64::from(mask & matched_mask != 0);
        }
    }
    hit as f64 / all as f64
}
