//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::f64::consts::{FRAC_PI_6, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use dqke_core::bb84::{extract_key, run_bb84, Bb84Config};
use dqke_core::channel::{
    covert_schedule, max_covert_slots, warden_bias_exact, warden_observe, ClassicalAuthChannel, CountTestWarden,
    PrngStrength, QubitChannel, SeedSearchWarden, TimeBinChannel, WardenObservation,
};
use dqke_core::dcqke::{
    covert_game_with, deniability_experiment, reduction_distinguisher, CovertQkeConfig, OnSlots,
};
use dqke_core::denial::{detection_probability, exact_detection_probability};
use dqke_core::distill::{
    distill_batch, ebit_fidelity, eve_decoupling_check, teleport, Partition,
};
use dqke_core::games::{binomial_sigma, run_experiment, Distinguisher, ExperimentConfig, Trial};
use dqke_core::gf2::{BitVector, NestedCodePair};
use dqke_core::qcore::{bell_state, gates, BellKind};
use dqke_core::ue::{encode_states, ue_codeword, ue_decrypt, ue_fake, ue_judge_replay, UeKey, UeParams};
use dqke_core::{AdvantageEstimate, DensityMatrix, Matrix, ProtocolError, RandomStream, Seed, StateVector, C64};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn stream(label: &str, i: u64) -> RandomStream {
    RandomStream::derive(Seed(0xacce97), label, i)
}

// 1 ------------------------------------------------------------------------

fn denial_detection_rate() -> Outcome {
    let start = Instant::now();
    let est = detection_probability(512, 32, 1, 200_000, Seed(1)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let target = 32.0 / (2.0 * 512.0);
    check(
        (est.estimate - target).abs() <= 0.003 && elapsed < Duration::from_secs(60),
        format!(
            "rate {:.5} [{:.5}, {:.5}] vs {target} (tol 0.003), {:.1} s",
            est.estimate,
            est.ci_low,
            est.ci_high,
            elapsed.as_secs_f64()
        ),
    )
}

// 2 ------------------------------------------------------------------------

fn exact_vs_monte_carlo() -> Outcome {
    let n = 8;
    let grid = [(1, 1), (2, 1), (4, 1), (8, 1), (2, 2), (4, 2), (8, 2), (4, 3), (8, 3), (8, 5)];
    let trials = 20_000;
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (i, &(eta, flips)) in grid.iter().enumerate() {
        let exact = exact_detection_probability(n, eta, flips).map_err(|e| e.to_string())?;
        let mc = detection_probability(n, eta, flips, trials, Seed(200 + i as u128)).map_err(|e| e.to_string())?;
        let z = (mc.estimate - exact).abs() / binomial_sigma(exact, trials);
        worst = worst.max(z);
        if z > 3.0 {
            bad.push(format!("(eta {eta}, flips {flips}): {} vs {exact}", mc.estimate));
        }
    }
    check(bad.is_empty(), format!("N = {n}, 10 points, worst |z| = {worst:.2} {bad:?}"))
}

// 3 ------------------------------------------------------------------------

fn bb84_correctness() -> Outcome {
    let cfg = Bb84Config::toy(4).map_err(|e| e.to_string())?;
    let (mut agreed, mut max_err) = (0, 0.0f64);
    for i in 0..1000 {
        let [mut a, mut b, mut c] = ["alice", "bob", "chan"].map(|l| stream(l, i));
        let mut log = ClassicalAuthChannel::new();
        let run = run_bb84(&cfg, &QubitChannel::noiseless(), &mut log, &mut a, &mut b, &mut c)
            .map_err(|e| format!("session {i}: {e}"))?;
        agreed += usize::from(run.alice.session_key == run.bob.session_key);
        max_err = max_err.max(run.session.error_rate);
    }

    let pair = NestedCodePair::toy();
    let blocks = 3;
    let mut r = stream("flips", 0);
    let (mut cases, mut flip_agreed) = (0, 0);
    for _ in 0..4 {
        let u = BitVector::concat_all(&(0..blocks).map(|_| pair.c1().sample_codeword(&mut r)).collect::<Vec<_>>());
        let v = BitVector::random(7 * blocks, &mut r);
        for pos in 0..7usize.pow(blocks as u32) {
            let mut v_bob = v.clone();
            for blk in 0..blocks {
                v_bob.flip(7 * blk + pos / 7usize.pow(blk as u32) % 7);
            }
            let (ka, kb) = extract_key(&pair, &v, &v_bob, &u).map_err(|e| e.to_string())?;
            cases += 1;
            flip_agreed += usize::from(ka == kb);
        }
    }
    check(
        agreed == 1000 && max_err == 0.0 && flip_agreed == cases,
        format!("noiseless {agreed}/1000 agreed, max error {max_err}; one flip per block {flip_agreed}/{cases}"),
    )
}

// 4 ------------------------------------------------------------------------

fn ue_algebra() -> Outcome {
    let p = UeParams::toy(8, 4).map_err(|e| e.to_string())?;
    let (mut round, mut judged) = (0, 0);
    for i in 0..1000 {
        let mut r = stream("ue", i);
        let key = UeKey::generate(&p, &mut r);
        let m = BitVector::random(8, &mut r);
        let z = ue_codeword(&p, &key, &m, &mut r).map_err(|e| e.to_string())?;
        let states = encode_states(&z, &key.b);
        round += usize::from(ue_decrypt(&p, &key, &states, &mut r).map_err(|e| e.to_string())? == m);
        let m_fake = BitVector::random(8, &mut r);
        let fake = ue_fake(&p, &key, &m, &m_fake, &mut r).map_err(|e| e.to_string())?;
        judged += usize::from(ue_judge_replay(&p, &fake, &z, &m_fake));
    }

    let (mut cases, mut complete) = (0, 0);
    for n in 1..=4usize {
        let p = UeParams::toy(n, 4).map_err(|e| e.to_string())?;
        let mut r = stream("exhaustive", n as u64);
        let key = UeKey::generate(&p, &mut r);
        for mv in 0..1u64 << n {
            let m = BitVector::from_u64(mv, n);
            let z = ue_codeword(&p, &key, &m, &mut r).map_err(|e| e.to_string())?;
            let states = encode_states(&z, &key.b);
            for fv in 0..1u64 << n {
                let m_fake = BitVector::from_u64(fv, n);
                let fake = ue_fake(&p, &key, &m, &m_fake, &mut r).map_err(|e| e.to_string())?;
                let opened = ue_decrypt(&p, &fake, &states, &mut r).map_err(|e| e.to_string())?;
                cases += 1;
                complete += usize::from(opened == m_fake && ue_judge_replay(&p, &fake, &z, &m_fake));
            }
        }
    }
    check(
        round == 1000 && judged == 1000 && complete == cases,
        format!("round trip {round}/1000, fake pad judged {judged}/1000, exhaustive n<=4 {complete}/{cases}"),
    )
}

// 5 ------------------------------------------------------------------------

fn covert_bias() -> Outcome {
    let grid: [(usize, usize, f64, f64); 12] = [
        (256, 8, 0.01, 0.2),
        (256, 16, 0.05, 0.2),
        (256, 32, 0.1, 0.2),
        (256, 4, 0.01, 0.5),
        (512, 16, 0.02, 0.1),
        (512, 32, 0.05, 0.15),
        (512, 8, 0.01, 0.3),
        (512, 64, 0.1, 0.15),
        (1024, 32, 0.01, 0.05),
        (1024, 16, 0.005, 0.1),
        (1024, 64, 0.05, 0.08),
        (1024, 128, 0.2, 0.25),
    ];
    let trials = 100_000;
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (i, &(n, u, pd, ps)) in grid.iter().enumerate() {
        let ch = TimeBinChannel::new(n, pd, ps).map_err(|e| e.to_string())?;
        let eps = warden_bias_exact::<f64>(&ch, u).map_err(|e| e.to_string())?;
        let warden = CountTestWarden::new(&ch, u).map_err(|e| e.to_string())?;
        let est = run_experiment(
            |t: &Trial| {
                let mut r = t.stream("slots");
                let s = covert_schedule(n, u, &mut r)?;
                Ok::<_, ProtocolError>((warden_observe(&ch, Some(&s), &mut r)?, warden_observe(&ch, None, &mut r)?))
            },
            &warden,
            &ExperimentConfig::new(trials, Seed(500 + i as u128)),
        )
        .map_err(|e| e.to_string())?;
        let signed = est.win_rate() - 0.5;
        let sigma = binomial_sigma(0.5 + eps, trials);
        let z = (signed - eps).abs() / sigma;
        worst = worst.max(z);
        if z > 3.0 {
            bad.push(format!("{:?}: {signed:.5} vs {eps:.5}", grid[i]));
        }
    }
    let equal: Vec<f64> = [(256, 8, 0.1), (1024, 100, 0.02), (4096, 64, 0.5)]
        .iter()
        .map(|&(n, u, p)| warden_bias_exact::<f64>(&TimeBinChannel::new(n, p, p).unwrap(), u).unwrap())
        .collect();
    let zero = equal.iter().all(|&e| e == 0.0);
    check(
        bad.is_empty() && zero,
        format!("12 points at 1e5 trials, worst |z| = {worst:.2} {bad:?}; p_dark = p_signal bias {equal:?}"),
    )
}

// 6 ------------------------------------------------------------------------

fn square_root_law() -> Outcome {
    let start = Instant::now();
    let (eps, pd, ps) = (0.1, 0.05, 0.1);
    let mut pts = Vec::new();
    for k in 8..=14 {
        let n = 1usize << k;
        let u = max_covert_slots(n, pd, ps, eps).map_err(|e| e.to_string())?;
        pts.push(((n as f64).ln(), (u as f64).ln(), u));
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = num / den;
    let elapsed = start.elapsed();
    let counts: Vec<usize> = pts.iter().map(|p| p.2).collect();
    check(
        (slope - 0.5).abs() <= 0.1 && elapsed < Duration::from_secs(600),
        format!("slope {slope:.4} over 2^8..2^14, max slots {counts:?}, {:.2} s", elapsed.as_secs_f64()),
    )
}

// 7 ------------------------------------------------------------------------

struct Row7 {
    label: String,
    covert: AdvantageEstimate,
    deny: AdvantageEstimate,
    reduction: AdvantageEstimate,
    exact: f64,
}

fn paired<W>(cfg: &CovertQkeConfig, warden: W, trials: u64, seed: u128) -> Result<Row7, String>
where
    W: Distinguisher<WardenObservation> + Clone,
{
    let exp = ExperimentConfig::new(trials, Seed(seed));
    let covert = covert_game_with(cfg, &warden, &exp).map_err(|e| e.to_string())?;
    let deny = deniability_experiment(cfg, &OnSlots::new(warden.clone()), &exp).map_err(|e| e.to_string())?;
    let red = reduction_distinguisher(OnSlots::new(warden), cfg);
    let reduction = covert_game_with(cfg, &red, &exp).map_err(|e| e.to_string())?;
    if red.calls() != trials as usize {
        return Err(format!("reduction called the adversary {} times in {trials} trials", red.calls()));
    }
    let exact = warden_bias_exact::<f64>(cfg.channel(), cfg.n_used()).map_err(|e| e.to_string())?;
    let ch = cfg.channel();
    Ok(Row7 {
        label: format!(
            "{}({},{},{},{})",
            cfg.prng().as_str(),
            ch.n_slots(),
            cfg.n_used(),
            ch.p_dark(),
            ch.p_signal()
        ),
        covert,
        deny,
        reduction,
        exact,
    })
}

fn reduction_grid() -> Outcome {
    let make = |n, u, pd, ps, prng| {
        let ch = TimeBinChannel::new(n, pd, ps).map_err(|e| e.to_string())?;
        CovertQkeConfig::new(Bb84Config::minimal(), ch, prng, u)
            .and_then(|c| c.with_decoys(2))
            .map_err(|e| e.to_string())
    };
    let strong = [
        (4096, 64, 0.01, 0.5),
        (4096, 64, 0.05, 0.1),
        (1024, 64, 0.02, 0.1),
        (1024, 64, 0.1, 0.1),
    ];
    let weak = [(4096, 64, 0.01, 0.5), (1024, 64, 0.01, 0.6)];
    let mut rows = Vec::new();
    for (i, &(n, u, pd, ps)) in strong.iter().enumerate() {
        let cfg = make(n, u, pd, ps, PrngStrength::Strong)?;
        let w = CountTestWarden::new(cfg.channel(), u).map_err(|e| e.to_string())?;
        rows.push((false, paired(&cfg, w, 10_000, 700 + i as u128)?));
    }
    for (i, &(n, u, pd, ps)) in weak.iter().enumerate() {
        let cfg = make(n, u, pd, ps, PrngStrength::Weak)?;
        let w = SeedSearchWarden::new(cfg.channel(), u).map_err(|e| e.to_string())?;
        rows.push((true, paired(&cfg, w, 1000, 800 + i as u128)?));
    }

    let mut ok = true;
    let mut lines = Vec::new();
    for (idx, (is_weak, r)) in rows.iter().enumerate() {
        let ineq = r.deny.advantage <= r.covert.advantage + 2.0 * r.covert.std_error();
        let lifted = r.reduction.advantage >= r.deny.advantage - 2.0 * r.deny.std_error();
        let shape = if *is_weak {
            r.covert.advantage > 0.45 && r.deny.advantage > 0.45
        } else if idx == 0 {
            r.covert.contains(r.exact) && r.deny.contains(r.exact)
        } else {
            (r.covert.advantage - r.exact).abs() <= 3.0 * r.covert.std_error().max(1e-3)
        };
        ok &= ineq && lifted && shape;
        lines.push(format!(
            "{}: deny {:.4} covert {:.4} [{:.4},{:.4}] red {:.4} exact {:.4}{}",
            r.label,
            r.deny.advantage,
            r.covert.advantage,
            r.covert.ci_low,
            r.covert.ci_high,
            r.reduction.advantage,
            r.exact,
            if ineq && lifted && shape { "" } else { " <-" }
        ));
    }
    check(ok, lines.join("; "))
}

// 8 ------------------------------------------------------------------------

fn random_qubit(r: &mut RandomStream) -> StateVector {
    let (t, p) = (PI * r.uniform(), 2.0 * PI * r.uniform());
    StateVector::new(vec![C64::new((t / 2.0).cos(), 0.0), C64::from_polar((t / 2.0).sin(), p)]).unwrap()
}

fn distillation() -> Outcome {
    let n = 100_000;
    let (ebits, rep) = distill_batch(n, FRAC_PI_6, &mut stream("distill", 0)).map_err(|e| e.to_string())?;
    let rate_ok = (rep.rate() - 0.5).abs() <= 0.005;
    let mut worst_fid = 0.0f64;
    for e in &ebits {
        worst_fid = worst_fid.max((ebit_fidelity(e).map_err(|e| e.to_string())? - 1.0).abs());
    }
    let bound_ok = rep.rate() <= 0.8113 && (rep.rate_bound - 0.8113).abs() < 1e-4;

    let phi = bell_state(BellKind::PhiPlus);
    let mut r = stream("teleport", 0);
    let mut worst_tel = 0.0f64;
    for _ in 0..1000 {
        let psi = random_qubit(&mut r);
        let (out, _) = teleport(&psi, &phi, &mut r).map_err(|e| e.to_string())?;
        worst_tel = worst_tel.max((out.overlap(&psi).map_err(|e| e.to_string())? - 1.0).abs());
    }

    let mut r = stream("spectator", 0);
    let mut decoupled = 0;
    for e in &ebits {
        let global = e.tensor(&random_qubit(&mut r)).map_err(|e| e.to_string())?;
        decoupled += usize::from(eve_decoupling_check(&global, &Partition::standard(3)).map_err(|e| e.to_string())?);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ghz = StateVector::from_real(&[h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h]).map_err(|e| e.to_string())?;
    let ghz_rejected = !eve_decoupling_check(&ghz, &Partition::standard(3)).map_err(|e| e.to_string())?;

    check(
        rate_ok && worst_fid <= 1e-10 && bound_ok && worst_tel <= 1e-10 && decoupled == ebits.len() && ghz_rejected,
        format!(
            "rate {:.5} (n = {n}) vs bound {:.4}; max |1-F| ebits {worst_fid:.1e}, teleport {worst_tel:.1e}; \
             decoupled {decoupled}/{}; GHZ rejected {ghz_rejected}",
            rep.rate(),
            rep.rate_bound,
            ebits.len()
        ),
    )
}

// 9 ------------------------------------------------------------------------

fn gaussian(r: &mut RandomStream) -> f64 {
    let u = r.uniform().max(f64::MIN_POSITIVE);
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * r.uniform()).cos()
}

fn random_state(n: usize, r: &mut RandomStream) -> StateVector {
    StateVector::normalized((0..1 << n).map(|_| C64::new(gaussian(r), gaussian(r))).collect()).unwrap()
}

fn random_mixed(n: usize, r: &mut RandomStream) -> DensityMatrix {
    let parts: Vec<(f64, StateVector)> = (0..3).map(|_| (r.uniform(), random_state(n, r))).collect();
    let total: f64 = parts.iter().map(|p| p.0).sum();
    let parts: Vec<_> = parts.into_iter().map(|(w, s)| (w / total, s)).collect();
    DensityMatrix::from_ensemble(&parts).unwrap()
}

fn random_rotation(r: &mut RandomStream) -> Matrix {
    let (a, b, c) = (2.0 * PI * r.uniform(), 2.0 * PI * r.uniform(), PI * r.uniform());
    let (co, si) = ((c / 2.0).cos(), (c / 2.0).sin());
    Matrix::from_rows(vec![
        vec![C64::from_polar(co, a), C64::from_polar(-si, b)],
        vec![C64::from_polar(si, -b), C64::from_polar(co, -a)],
    ])
}

fn numeric_core() -> Outcome {
    let instances = 10_000u64;
    let tol = 1e-10;
    let mut fails = [0usize; 5];
    for i in 0..instances {
        let mut r = stream("core", i);
        let n = 1 + (i % 4) as usize;

        let mut psi = random_state(n, &mut r);
        for _ in 0..2 * n {
            let q = r.below(n as u64) as usize;
            psi = psi.apply_unitary(&random_rotation(&mut r), &[q]).unwrap();
            if n > 1 {
                psi = psi.apply_unitary(&gates::cnot(), &[q, (q + 1) % n]).unwrap();
            }
        }
        fails[0] += usize::from((psi.norm_sqr() - 1.0).abs() > tol);

        let rho = random_mixed(n, &mut r);
        let keep: Vec<usize> = (0..n).filter(|q| q % 2 == (i as usize / 4) % 2 || n == 1).collect();
        let red = rho.partial_trace(&keep).unwrap();
        fails[1] += usize::from((red.trace() - 1.0).abs() > tol || (rho.trace() - 1.0).abs() > tol);
        fails[2] += usize::from(red.matrix().hermiticity_defect() > tol || rho.matrix().hermiticity_defect() > tol);

        let f = rho.expectation(&psi).unwrap();
        let self_f = psi.to_density().expectation(&psi).unwrap();
        fails[3] += usize::from(!(-tol..=1.0 + tol).contains(&f) || (self_f - 1.0).abs() > tol);

        let (a, b) = (random_mixed(1 + (i % 2) as usize, &mut r), random_mixed(1 + (i / 2 % 2) as usize, &mut r));
        let joint = a.tensor(&b).unwrap().entropy_bits();
        fails[4] += usize::from((joint - a.entropy_bits() - b.entropy_bits()).abs() > tol);
    }
    let names = ["normalization", "trace", "hermiticity", "fidelity bound", "entropy additivity"];
    let summary: Vec<String> = names.iter().zip(&fails).map(|(n, f)| format!("{n} {f} fail")).collect();
    check(
        fails.iter().all(|&f| f == 0),
        format!("{instances} instances each at {tol:e}: {}", summary.join(", ")),
    )
}

// 10 -----------------------------------------------------------------------

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_dqke");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let seed = "00000000000000000000000000000001";
    let runs: [(&str, &[&str]); 5] = [
        ("attack-deny", &["--trials", "1000"]),
        ("bb84", &["--trials", "200"]),
        ("ue", &["--trials", "200", "--format", "json"]),
        ("covert", &["--trials", "500"]),
        ("dcqke", &["--trials", "300"]),
    ];
    let mut identical = 0;
    for (cmd, extra) in runs {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("{cmd}-{rep}.out"));
            let status = Command::new(bin)
                .arg(cmd)
                .args(["--seed", seed, "--out"])
                .arg(&path)
                .args(extra)
                .status()
                .map_err(|e| e.to_string())?;
            if !status.success() {
                return Err(format!("{cmd} exited with {status}"));
            }
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        identical += usize::from(!outputs[0].is_empty() && outputs[0] == outputs[1]);
    }
    check(identical == runs.len(), format!("{identical}/{} subcommands byte-identical on rerun", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("denial detection rate", denial_detection_rate),
        ("exact vs Monte-Carlo attack oracle", exact_vs_monte_carlo),
        ("BB84 correctness", bb84_correctness),
        ("UE algebra", ue_algebra),
        ("covert bias", covert_bias),
        ("square-root law", square_root_law),
        ("reduction inequality", reduction_grid),
        ("distillation", distillation),
        ("numeric core", numeric_core),
        ("determinism", determinism),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let k = i + 1;
        if !only.is_empty() && !only.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {k} ({name}): {detail} [{:.1} s]", start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
