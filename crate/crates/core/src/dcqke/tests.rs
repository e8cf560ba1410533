use super::*;
use crate::bb84::{run_bb84, Bb84Config};
use crate::channel::{
    warden_bias_exact, ClassicalAuthChannel, CountTestWarden, PrngStrength, QubitChannel, SeedSearchWarden, TimeBinChannel,
};
use crate::denial::{judge_check, Disclosure, JudgeAdversary};
use crate::error::ProtocolError;
use crate::games::{CoinFlip, ExperimentConfig, RandomStream, Seed};

fn config(n_slots: usize, n_used: usize, pd: f64, ps: f64, prng: PrngStrength) -> CovertQkeConfig {
    let ch = TimeBinChannel::new(n_slots, pd, ps).unwrap();
    CovertQkeConfig::new(Bb84Config::minimal(), ch, prng, n_used).unwrap()
}

fn strong(n_slots: usize, n_used: usize, pd: f64, ps: f64) -> CovertQkeConfig {
    config(n_slots, n_used, pd, ps, PrngStrength::Strong)
}

fn rng(i: u64) -> RandomStream {
    RandomStream::derive(Seed(0xdc), "dcqke-test", i)
}

#[test]
fn capacity_rules() {
    assert_eq!(required_slots(&Bb84Config::minimal()), 56);
    let ch = TimeBinChannel::new(1024, 0.01, 0.5).unwrap();
    let m = Bb84Config::minimal;
    assert!(matches!(
        CovertQkeConfig::new(m(), ch, PrngStrength::Strong, 55),
        Err(ProtocolError::CovertCapacity { needed: 56, available: 55 })
    ));
    assert!(CovertQkeConfig::new(m(), ch, PrngStrength::Strong, 2000).is_err());
    let sqrt = CovertQkeConfig::with_sqrt_rule(m(), ch, PrngStrength::Strong, 3.0).unwrap();
    assert_eq!(sqrt.n_used(), 96);
    let floor = CovertQkeConfig::with_sqrt_rule(m(), ch, PrngStrength::Strong, 0.5).unwrap();
    assert_eq!(floor.n_used(), 56);
    assert!(floor.clone().with_decoys(11).is_err());
    assert_eq!(floor.with_decoys(4).unwrap().decoy_eta(), 4);
}

#[test]
fn covert_key_matches_plain_bb84_on_same_streams() {
    let cfg = strong(4096, 128, 0.01, 0.5);
    let mut done = 0;
    for i in 0..50 {
        let Ok((key, t, obs)) = run_covert_qke(&cfg, &mut rng(i)) else {
            continue;
        };
        done += 1;
        let mut root = rng(i);
        root.fork("prng-key");
        let (mut a, mut b, mut c) = (root.fork("alice"), root.fork("bob"), root.fork("chan"));
        let mut log = ClassicalAuthChannel::new();
        let plain = run_bb84(cfg.bb84(), &QubitChannel::noiseless(), &mut log, &mut a, &mut b, &mut c).unwrap();
        assert_eq!(key, plain.alice.session_key);
        assert_eq!(plain.alice.session_key, plain.bob.session_key);
        assert_eq!(t.classical, log);
        assert_eq!(t.classical_slots.len(), log.total_bits());
        assert_eq!(t.qubit_slots.len() % cfg.bb84().qubit_count(), 0);
        let used = t.schedule.indicator(4096);
        assert!(t.qubit_slots.iter().chain(&t.classical_slots).all(|&s| used[s]));
        assert_eq!(obs.detections.len(), 4096);
    }
    assert!(done >= 45, "{done}");
}

#[test]
fn covert_capacity_shortfall_is_reported() {
    let cfg = strong(4096, 56, 0.01, 0.5);
    let errs: Vec<_> = (0..200)
        .filter_map(|i| run_covert_qke(&cfg, &mut rng(i)).err())
        .collect();
    assert!(!errs.is_empty());
    assert!(errs
        .iter()
        .all(|e| matches!(e, ProtocolError::CovertCapacity { available: 56, .. })));
}

#[test]
fn strong_prng_game_tracks_exact_bias() {
    let cfg = strong(4096, 64, 0.01, 0.5);
    let eps = warden_bias_exact::<f64>(cfg.channel(), 64).unwrap();
    let est = covert_game(&cfg, &ExperimentConfig::new(3000, Seed(1))).unwrap();
    assert!((est.advantage - eps).abs() < 3.0 * est.std_error(), "{est:?} vs {eps}");
}

#[test]
fn invisible_signals_give_no_advantage() {
    let cfg = strong(1024, 64, 0.1, 0.1);
    let est = covert_game(&cfg, &ExperimentConfig::new(2000, Seed(2))).unwrap();
    assert!(est.contains(0.0), "{est:?}");
}

#[test]
fn dc_qke_keys_and_faking_program() {
    let cfg = strong(4096, 128, 0.01, 0.5).with_decoys(3).unwrap();
    let mut done = 0;
    for i in 0..60 {
        let res = match run_dc_qke(&cfg, &mut rng(1000 + i)) {
            Ok(r) => r,
            Err(ProtocolError::Abort { .. } | ProtocolError::CovertCapacity { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        done += 1;
        assert_eq!(res.real_key.len(), cfg.bb84().key_len());
        assert_eq!(res.fake_key.len(), res.real_key.len());
        let names: Vec<_> = res.real_randomness.alice.iter().map(|n| n.name.as_str()).collect();
        assert_eq!(names, ["a", "b", "u", PRNG_SEED]);
        assert_eq!(res.real_randomness.alice[3].bits.len(), 128);

        let (k, r) = faking_program(&res);
        assert_eq!((&k, &r), (&res.fake_key, &res.fake_randomness));
        let (real, fake) = build_views(&res);
        assert!(real.well_formed() && fake.well_formed());
        assert!(!judge_check(&fake.claim(), fake.eve_record()).detected);
        assert_eq!(real.slots, res.covert_observation);
        assert_eq!(fake.slots, res.idle_observation);
        let mut masked = real.clone();
        masked.slots = fake.slots.clone();
        assert_eq!(masked, fake);
    }
    assert!(done >= 40, "{done}");
}

#[test]
fn weak_seed_is_sixteen_bits() {
    let cfg = config(1024, 64, 0.01, 0.5, PrngStrength::Weak);
    let res = (0..20).find_map(|i| run_dc_qke(&cfg, &mut rng(i)).ok()).unwrap();
    assert_eq!(res.real_randomness.alice[3].bits.len(), 16);
}

#[test]
fn equal_rates_make_views_identically_distributed() {
    let cfg = strong(512, 64, 0.2, 0.2);
    let res = (0..20).find_map(|i| run_dc_qke(&cfg, &mut rng(i)).ok()).unwrap();
    let (real, fake) = build_views(&res);
    assert_eq!(real.slots.detections.len(), fake.slots.detections.len());
    let warden = OnSlots::new(CountTestWarden::new(cfg.channel(), 64).unwrap());
    let est = deniability_experiment(&cfg, &warden, &ExperimentConfig::new(1000, Seed(3))).unwrap();
    assert!(est.contains(0.0), "{est:?}");
}

#[test]
fn coin_flip_and_judge_have_no_advantage() {
    let cfg = strong(1024, 64, 0.02, 0.3).with_decoys(4).unwrap();
    let exp = ExperimentConfig::new(1000, Seed(4));
    assert!(deniability_experiment(&cfg, &CoinFlip, &exp).unwrap().contains(0.0));
    let judge = deniability_experiment(&cfg, &JudgeAdversary, &exp).unwrap();
    assert!(judge.contains(0.0), "{judge:?}");
}

#[test]
fn paired_games_agree_and_reduction_preserves_advantage() {
    let cfg = strong(1024, 64, 0.02, 0.3);
    let exp = ExperimentConfig::new(2000, Seed(5));
    let warden = CountTestWarden::new(cfg.channel(), 64).unwrap();
    let covert = covert_game_with(&cfg, &warden, &exp).unwrap();
    let deny = deniability_experiment(&cfg, &OnSlots::new(warden.clone()), &exp).unwrap();
    assert_eq!(covert, deny);
    assert!(deny.advantage > 0.1);

    let red = reduction_distinguisher(OnSlots::new(warden), &cfg);
    let via = covert_game_with(&cfg, &red, &exp).unwrap();
    assert_eq!(red.calls(), 2000);
    assert!(via.advantage >= deny.advantage - 2.0 * deny.std_error());

    let coin = reduction_distinguisher(CoinFlip, &cfg);
    assert!(covert_game_with(&cfg, &coin, &exp).unwrap().contains(0.0));
    assert_eq!(coin.calls(), 2000);
}

#[test]
fn weak_prng_collapses_both_games() {
    let cfg = config(1024, 64, 0.01, 0.6, PrngStrength::Weak);
    let search = SeedSearchWarden::new(cfg.channel(), 64).unwrap();
    let exp = ExperimentConfig::new(200, Seed(6));
    let covert = covert_game_with(&cfg, &search, &exp).unwrap();
    let deny = deniability_experiment(&cfg, &OnSlots::new(search), &exp).unwrap();
    assert!(covert.advantage > 0.45 && deny.advantage > 0.45, "{covert:?} {deny:?}");
}

#[test]
fn real_and_fake_keys_look_independent() {
    let cfg = strong(1024, 128, 0.01, 0.5);
    let mut table = [[0u32; 2]; 2];
    for i in 0..1200 {
        if let Ok(r) = run_dc_qke(&cfg, &mut rng(50_000 + i)) {
            table[r.real_key[0] as usize][r.fake_key[0] as usize] += 1;
        }
    }
    let total: u32 = table.iter().flatten().sum();
    let row = |i: usize| f64::from(table[i][0] + table[i][1]);
    let col = |j: usize| f64::from(table[0][j] + table[1][j]);
    let chi2: f64 = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| {
            let e = row(i) * col(j) / f64::from(total);
            (f64::from(table[i][j]) - e).powi(2) / e
        })
        .sum();
    // 1 degree of freedom, 99.9% point.
    assert!(chi2 < 10.83, "{table:?} chi2 = {chi2}");
    assert!((row(0) / f64::from(total) - 0.5).abs() < 0.06);
}
