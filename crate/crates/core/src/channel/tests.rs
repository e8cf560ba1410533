use super::*;
use crate::denial::EvePolicy;
use crate::games::{binomial_sigma, run_experiment, ExperimentConfig, Seed, Trial};
use crate::qcore::{measure, prepare_bb84, Basis};
use crate::StateVector;
use std::convert::Infallible;

fn rng(label: &str) -> crate::RandomStream {
    crate::RandomStream::derive(Seed(0xc4a), label, 0)
}

fn zeros(n: usize) -> Vec<StateVector> {
    vec![prepare_bb84(false, Basis::Computational); n]
}

#[test]
fn noiseless_channel_delivers_identically() {
    let states: Vec<StateVector> = (0..8)
        .map(|i| prepare_bb84(i % 2 == 1, Basis::from_bit(i % 3 == 0)))
        .collect();
    let (out, rec) = QubitChannel::noiseless().transmit(&states, &mut rng("t")).unwrap();
    assert_eq!(out, states);
    assert!(rec.is_none());
}

#[test]
fn certain_flip_inverts() {
    let ch = QubitChannel::new(1.0).unwrap();
    let (out, _) = transmit(&ch, &zeros(3), &mut rng("t")).unwrap();
    assert!(out.iter().all(|s| *s == prepare_bb84(true, Basis::Computational)));
}

#[test]
fn flip_rate_matches_probability() {
    let n = 10_000;
    let ch = QubitChannel::new(0.1).unwrap();
    let mut r = rng("flip");
    let (out, _) = ch.transmit(&zeros(n), &mut r).unwrap();
    let errors = out
        .iter()
        .filter(|s| measure(*s, Basis::Computational, &mut r).unwrap().0)
        .count();
    let frac = errors as f64 / n as f64;
    assert!((frac - 0.1).abs() < 3.0 * binomial_sigma(0.1, n as u64));
}

#[test]
fn rejects_multi_qubit_and_bad_probability() {
    let two = crate::qcore::bell_state(crate::qcore::BellKind::PhiPlus);
    assert!(QubitChannel::noiseless().transmit(&[two], &mut rng("t")).is_err());
    assert!(QubitChannel::new(1.5).is_err());
}

#[test]
fn interceptor_records_before_noise() {
    let ch = QubitChannel::noiseless().with_interceptor(EvePolicy::new(1.0).unwrap());
    let (_, rec) = ch.transmit(&zeros(50), &mut rng("eve")).unwrap();
    let rec = rec.unwrap();
    assert_eq!(rec.len(), 50);
    for e in rec.entries() {
        if e.basis == Basis::Computational {
            assert!(!e.outcome);
        }
    }
}

#[test]
fn classical_log_is_ordered_and_unmodified() {
    let mut c = ClassicalAuthChannel::new();
    let p: crate::gf2::BitVector = "1011".parse().unwrap();
    assert_eq!(c.send(Party::Alice, "b", p.clone()), p);
    c.send(Party::Bob, "ack", crate::gf2::BitVector::zeros(0));
    assert_eq!(c.tags(), vec!["b", "ack"]);
    assert_eq!(c.find("b").unwrap().payload, p);
    assert_eq!(c.find("b").unwrap().bytes(), vec![0b1011_0000]);
    assert_eq!(c.total_bits(), 4);
}

#[test]
fn full_schedule_uses_every_slot() {
    let mut s = covert_schedule(16, 16, &mut rng("s")).unwrap().used_slots;
    s.sort_unstable();
    assert_eq!(s, (0..16).collect::<Vec<_>>());
    assert!(covert_schedule(4, 5, &mut rng("s")).is_err());
}

#[test]
fn prng_schedules_are_deterministic_and_key_dependent() {
    for strength in [PrngStrength::Strong, PrngStrength::Weak] {
        let a = prng_schedule(1024, 32, PrngSpec::new(strength, 77)).unwrap();
        let b = prng_schedule(1024, 32, PrngSpec::new(strength, 77)).unwrap();
        let c = prng_schedule(1024, 32, PrngSpec::new(strength, 78)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.used_slots, c.used_slots);
        let mut d = a.used_slots.clone();
        d.sort_unstable();
        d.dedup();
        assert_eq!(d.len(), 32);
    }
    assert_eq!(PrngSpec::new(PrngStrength::Weak, 0x1_0005).seed, 5);
}

#[test]
fn schedule_usage_is_uniform() {
    let (n, k, draws) = (1024usize, 32usize, 10_000u64);
    let mut counts = vec![0u64; n];
    let mut r = rng("uniform");
    for _ in 0..draws {
        for s in covert_schedule(n, k, &mut r).unwrap().used_slots {
            counts[s] += 1;
        }
    }
    let p = k as f64 / n as f64;
    let sigma = binomial_sigma(p, draws) * draws as f64;
    let expect = p * draws as f64;
    let outside = counts
        .iter()
        .filter(|&&c| (c as f64 - expect).abs() > 3.0 * sigma)
        .count();
    // 0.27% expected outside 3σ; allow a generous margin
    assert!(outside <= 12, "{outside} slots outside 3σ");
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expect).powi(2) / expect)
        .sum();
    // df = 1023; mean 1023, sd ≈ 45
    assert!(chi2 < 1023.0 + 5.0 * 45.3, "chi2 = {chi2}");
}

#[test]
fn warden_observation_examples() {
    let ch = TimeBinChannel::new(8, 0.0, 1.0).unwrap();
    let sched = CovertSchedule {
        used_slots: vec![3],
        source: ScheduleSource::TrueRandom,
    };
    let obs = warden_observe(&ch, Some(&sched), &mut rng("w")).unwrap();
    assert_eq!(obs.detections.support(), vec![3]);

    let ch = TimeBinChannel::new(10_000, 0.01, 0.5).unwrap();
    let c = warden_observe(&ch, None, &mut rng("w")).unwrap().count() as f64;
    assert!((c - 100.0).abs() < 3.0 * (10_000.0f64 * 0.01 * 0.99).sqrt());
}

#[test]
fn equal_rates_make_signals_invisible() {
    let ch = TimeBinChannel::new(64, 0.3, 0.3).unwrap();
    let sched = covert_schedule(64, 20, &mut rng("x")).unwrap();
    let a = warden_observe(&ch, Some(&sched), &mut rng("same")).unwrap();
    let b = warden_observe(&ch, None, &mut rng("same")).unwrap();
    assert_eq!(a, b);
    assert_eq!(warden_bias_exact::<f64>(&ch, 20).unwrap(), 0.0);
}

#[test]
fn invalid_channel_parameters() {
    assert!(TimeBinChannel::new(10, 0.5, 0.2).is_err());
    assert!(TimeBinChannel::new(0, 0.0, 0.5).is_err());
    assert!(TimeBinChannel::new(10, 0.0, 1.5).is_err());
    let ch = TimeBinChannel::new(10, 0.0, 0.5).unwrap();
    assert!(warden_bias_exact::<f64>(&ch, 11).is_err());
}

#[test]
fn exact_bias_golden_values() {
    let ch = TimeBinChannel::new(100, 0.01, 0.5).unwrap();
    assert_eq!(warden_bias_exact::<f64>(&ch, 0).unwrap(), 0.0);
    let eps = warden_bias_exact::<f64>(&ch, 10).unwrap();
    assert!((eps - 0.447_189_523_610_209_36).abs() < 1e-12, "{eps}");
    let eps32 = warden_bias_exact::<f32>(&ch, 10).unwrap();
    assert!((f64::from(eps32) - 0.447_189_523_610_209_36).abs() < 1e-4);
    let (idle, active) = detection_count_pmfs::<f64>(&ch, 10).unwrap();
    assert!((idle.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!((active.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn bias_is_monotone_on_a_grid() {
    for &(pd, ps) in &[(0.01, 0.05), (0.05, 0.1), (0.01, 0.5), (0.2, 0.3)] {
        let ch = TimeBinChannel::new(200, pd, ps).unwrap();
        let mut prev = 0.0;
        for u in (0..=200).step_by(10) {
            let e = warden_bias_exact::<f64>(&ch, u).unwrap();
            assert!(e + 1e-12 >= prev, "pd={pd} ps={ps} u={u}");
            prev = e;
        }
    }
    let mut prev = 0.0;
    for ps in [0.05, 0.1, 0.2, 0.4, 0.8] {
        let e = warden_bias_exact::<f64>(&TimeBinChannel::new(200, 0.05, ps).unwrap(), 20).unwrap();
        assert!(e + 1e-12 >= prev);
        prev = e;
    }
}

#[test]
fn square_root_regression() {
    let expected = [36, 51, 71, 101, 142, 200, 283];
    for (i, &want) in expected.iter().enumerate() {
        let n = 1usize << (8 + i);
        assert_eq!(max_covert_slots(n, 0.05, 0.1, 0.1).unwrap(), want, "n = {n}");
    }
}

#[test]
fn count_warden_tracks_exact_bias() {
    let ch = TimeBinChannel::new(100, 0.01, 0.2).unwrap();
    let n_used = 10;
    let eps = warden_bias_exact::<f64>(&ch, n_used).unwrap();
    let warden = CountTestWarden::new(&ch, n_used).unwrap();
    let cfg = ExperimentConfig::new(20_000, Seed(9));
    let est = run_experiment(
        |t: &Trial| {
            let mut r = t.stream("slots");
            let s = covert_schedule(100, n_used, &mut r).unwrap();
            let active = warden_observe(&ch, Some(&s), &mut r).unwrap();
            let idle = warden_observe(&ch, None, &mut r).unwrap();
            Ok::<_, Infallible>((active, idle))
        },
        &warden,
        &cfg,
    )
    .unwrap();
    assert!((est.advantage - eps).abs() < 3.0 * est.std_error(), "{est:?} vs {eps}");
}

#[test]
fn seed_search_finds_weak_schedules() {
    let ch = TimeBinChannel::new(256, 0.01, 0.5).unwrap();
    let warden = SeedSearchWarden::new(&ch, 16).unwrap();
    let spec = PrngSpec::new(PrngStrength::Weak, 4242);
    let sched = prng_schedule(256, 16, spec).unwrap();
    let ch_sure = TimeBinChannel::new(256, 0.0, 1.0).unwrap();
    let obs = warden_observe(&ch_sure, Some(&sched), &mut rng("ss")).unwrap();
    assert_eq!(warden.best_key(&obs), (4242, 16));
    let idle = warden_observe(&ch, None, &mut rng("idle")).unwrap();
    assert!(!warden.says_active(&idle));
}
