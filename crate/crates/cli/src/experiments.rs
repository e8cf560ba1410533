use dqke_core::bb84::{run_bb84, Bb84Config};
use dqke_core::channel::{
    warden_bias_exact, ClassicalAuthChannel, CountTestWarden, QubitChannel, SeedSearchWarden, TimeBinChannel,
    WardenObservation,
};
use dqke_core::dcqke::{covert_game_with, deniability_experiment, reduction_distinguisher, CovertQkeConfig, OnSlots};
use dqke_core::denial::{detection_probability, exact_detection_probability, MAX_EXACT_N};
use dqke_core::distill::distill_batch;
use dqke_core::games::{Distinguisher, ExperimentConfig, MIN_TRIALS};
use dqke_core::gf2::BitVector;
use dqke_core::ue::{encode_states, ue_codeword, ue_decrypt, ue_fake, ue_judge_replay, UeKey, UeParams};
use dqke_core::{ExperimentError, ProtocolError, RandomStream, Seed};
use serde_json::json;

use crate::config::{AttackParams, Bb84Params, CovertParams, DistillParams, UeParamsConfig, WardenKind};
use crate::output::Row;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameters.
    Config(String),
    /// The experiment itself failed.
    Abort(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Abort(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Abort(m) | CliError::Io(m) => m,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn abort_err(e: impl std::fmt::Display) -> CliError {
    CliError::Abort(e.to_string())
}

fn experiment_err(e: ExperimentError) -> CliError {
    match e {
        ExperimentError::TooFewTrials(_) | ExperimentError::NoFakingProgram => config_err(e),
        ExperimentError::Protocol(ProtocolError::InvalidConfig(_)) => config_err(e),
        other => abort_err(other),
    }
}

fn check_trials(trials: u64) -> Result<(), CliError> {
    if trials < MIN_TRIALS {
        return Err(config_err(ExperimentError::TooFewTrials(trials)));
    }
    Ok(())
}

pub fn bb84(p: &Bb84Params, trials: u64, seed: Seed) -> Result<Vec<Row>, CliError> {
    let cfg = Bb84Config::toy(p.key_blocks).map_err(config_err)?;
    let chan = QubitChannel::new(p.flip_probability).map_err(config_err)?;
    let (mut completed, mut agreed, mut aborted, mut errors) = (0u64, 0u64, 0u64, 0.0);
    for i in 0..trials {
        let [mut a, mut b, mut c] = ["alice", "bob", "chan"].map(|l| RandomStream::derive(seed, l, i));
        let mut log = ClassicalAuthChannel::new();
        match run_bb84(&cfg, &chan, &mut log, &mut a, &mut b, &mut c) {
            Ok(run) => {
                completed += 1;
                agreed += u64::from(run.alice.session_key == run.bob.session_key);
                errors += run.session.error_rate;
            }
            Err(ProtocolError::Abort { .. } | ProtocolError::SiftShortfall { .. }) => aborted += 1,
            Err(e) => return Err(abort_err(e)),
        }
    }
    let mean_error = if completed == 0 { 0.0 } else { errors / completed as f64 };
    Ok(vec![row(json!({
        "experiment": "bb84",
        "key_blocks": p.key_blocks,
        "qubits": cfg.qubit_count(),
        "key_len": cfg.key_len(),
        "flip_probability": p.flip_probability,
        "threshold": cfg.error_threshold(),
        "trials": trials,
        "completed": completed,
        "agreed": agreed,
        "aborted": aborted,
        "mean_error_rate": mean_error,
        "seed": seed.to_string(),
    }))])
}

pub fn attack_deny(p: &AttackParams, trials: u64, seed: Seed) -> Result<Vec<Row>, CliError> {
    let est = detection_probability(p.n, p.eta, p.flips, trials, seed).map_err(experiment_err)?;
    let exact = if p.n <= MAX_EXACT_N {
        Some(exact_detection_probability(p.n, p.eta, p.flips).map_err(config_err)?)
    } else {
        None
    };
    let per_flip = p.eta as f64 / (2.0 * p.n as f64);
    Ok(vec![row(json!({
        "experiment": "attack-deny",
        "N": p.n,
        "eta": p.eta,
        "flips": p.flips,
        "trials": trials,
        "detected": est.successes,
        "estimate": est.estimate,
        "ci_low": est.ci_low,
        "ci_high": est.ci_high,
        "predicted": 1.0 - (1.0 - per_flip).powi(p.flips as i32),
        "exact": exact,
        "seed": seed.to_string(),
    }))])
}

pub fn ue(p: &UeParamsConfig, trials: u64, seed: Seed) -> Result<Vec<Row>, CliError> {
    let params = UeParams::toy(p.n, p.s).map_err(config_err)?;
    let (mut round_trip, mut fake_opened, mut judge_accepted) = (0u64, 0u64, 0u64);
    for i in 0..trials {
        let mut r = RandomStream::derive(seed, "ue", i);
        let key = UeKey::generate(&params, &mut r);
        let m = BitVector::random(p.n, &mut r);
        let z = ue_codeword(&params, &key, &m, &mut r).map_err(abort_err)?;
        let states = encode_states(&z, &key.b);
        round_trip += u64::from(ue_decrypt(&params, &key, &states, &mut r).map_err(abort_err)? == m);
        let m_fake = BitVector::random(p.n, &mut r);
        let fake = ue_fake(&params, &key, &m, &m_fake, &mut r).map_err(abort_err)?;
        fake_opened += u64::from(ue_decrypt(&params, &fake, &states, &mut r).map_err(abort_err)? == m_fake);
        judge_accepted += u64::from(ue_judge_replay(&params, &fake, &z, &m_fake));
    }
    Ok(vec![row(json!({
        "experiment": "ue",
        "n": p.n,
        "s": p.s,
        "qubits": params.qubit_count(),
        "trials": trials,
        "round_trip_ok": round_trip,
        "fake_opened": fake_opened,
        "judge_accepted": judge_accepted,
        "seed": seed.to_string(),
    }))])
}

pub const DEFAULT_N_USED: usize = 64;

fn covert_config(p: &CovertParams) -> Result<CovertQkeConfig, CliError> {
    let channel = TimeBinChannel::new(p.n_slots, p.p_dark, p.p_signal).map_err(config_err)?;
    let bb84 = Bb84Config::minimal();
    let cfg = match (p.n_used, p.sqrt_c) {
        (u, None) => CovertQkeConfig::new(bb84, channel, p.prng, u.unwrap_or(DEFAULT_N_USED)),
        (None, Some(c)) => CovertQkeConfig::with_sqrt_rule(bb84, channel, p.prng, c),
        (Some(_), Some(_)) => return Err(config_err("params: give either `n_used` or `sqrt_c`, not both")),
    };
    cfg.and_then(|c| c.with_decoys(p.decoy_eta)).map_err(config_err)
}

fn covert_row(experiment: &str, p: &CovertParams, cfg: &CovertQkeConfig, warden: &str, exact: f64) -> Row {
    row(json!({
        "experiment": experiment,
        "prng": p.prng.as_str(),
        "n_slots": p.n_slots,
        "n_used": cfg.n_used(),
        "p_dark": p.p_dark,
        "p_signal": p.p_signal,
        "warden": warden,
        "decoy_eta": cfg.decoy_eta(),
        "exact_bias": exact,
    }))
}

fn with_estimate(mut r: Row, est: &dqke_core::AdvantageEstimate, seed: Seed) -> Row {
    r.insert("trials".into(), json!(est.trials));
    r.insert("advantage".into(), json!(est.advantage));
    r.insert("ci_low".into(), json!(est.ci_low));
    r.insert("ci_high".into(), json!(est.ci_high));
    r.insert("seed".into(), json!(seed.to_string()));
    r
}

fn with_warden<T>(
    p: &CovertParams,
    cfg: &CovertQkeConfig,
    f: impl FnOnce(&dyn WardenRunner) -> Result<T, CliError>,
) -> Result<T, CliError> {
    match p.warden {
        WardenKind::Count => f(&CountTestWarden::new(cfg.channel(), cfg.n_used()).map_err(config_err)?),
        WardenKind::SeedSearch => f(&SeedSearchWarden::new(cfg.channel(), cfg.n_used()).map_err(config_err)?),
    }
}

/// The three games of a DC-QKE run, erased over the warden type.
pub trait WardenRunner {
    fn covert(&self, cfg: &CovertQkeConfig, exp: &ExperimentConfig) -> Result<dqke_core::AdvantageEstimate, ExperimentError>;
    fn deniability(&self, cfg: &CovertQkeConfig, exp: &ExperimentConfig) -> Result<dqke_core::AdvantageEstimate, ExperimentError>;
    fn reduction(&self, cfg: &CovertQkeConfig, exp: &ExperimentConfig) -> Result<dqke_core::AdvantageEstimate, ExperimentError>;
}

impl<W: Distinguisher<WardenObservation> + Clone> WardenRunner for W {
    fn covert(&self, cfg: &CovertQkeConfig, exp: &ExperimentConfig) -> Result<dqke_core::AdvantageEstimate, ExperimentError> {
        covert_game_with(cfg, self, exp)
    }

    fn deniability(&self, cfg: &CovertQkeConfig, exp: &ExperimentConfig) -> Result<dqke_core::AdvantageEstimate, ExperimentError> {
        deniability_experiment(cfg, &OnSlots::new(self.clone()), exp)
    }

    fn reduction(&self, cfg: &CovertQkeConfig, exp: &ExperimentConfig) -> Result<dqke_core::AdvantageEstimate, ExperimentError> {
        covert_game_with(cfg, &reduction_distinguisher(OnSlots::new(self.clone()), cfg), exp)
    }
}

pub fn covert(p: &CovertParams, trials: u64, seed: Seed) -> Result<Vec<Row>, CliError> {
    check_trials(trials)?;
    let cfg = covert_config(p)?;
    let exact = warden_bias_exact::<f64>(cfg.channel(), cfg.n_used()).map_err(config_err)?;
    let exp = ExperimentConfig::new(trials, seed);
    let est = with_warden(p, &cfg, |w| w.covert(&cfg, &exp).map_err(experiment_err))?;
    let base = covert_row("covert", p, &cfg, p.warden.as_str(), exact);
    Ok(vec![with_estimate(base, &est, seed)])
}

pub fn dcqke(p: &CovertParams, trials: u64, seed: Seed) -> Result<Vec<Row>, CliError> {
    check_trials(trials)?;
    let cfg = covert_config(p)?;
    let exact = warden_bias_exact::<f64>(cfg.channel(), cfg.n_used()).map_err(config_err)?;
    let exp = ExperimentConfig::new(trials, seed);
    let (c, d, r) = with_warden(p, &cfg, |w| {
        Ok((
            w.covert(&cfg, &exp).map_err(experiment_err)?,
            w.deniability(&cfg, &exp).map_err(experiment_err)?,
            w.reduction(&cfg, &exp).map_err(experiment_err)?,
        ))
    })?;
    let name = p.warden.as_str();
    Ok(vec![
        with_estimate(covert_row("covert-game", p, &cfg, name, exact), &c, seed),
        with_estimate(covert_row("deniability", p, &cfg, name, exact), &d, seed),
        with_estimate(covert_row("reduction", p, &cfg, &format!("reduction({name})"), exact), &r, seed),
    ])
}

pub fn distill(p: &DistillParams, seed: Seed) -> Result<Vec<Row>, CliError> {
    let (_, rep) = distill_batch(p.n, p.theta, &mut RandomStream::derive(seed, "distill", 0)).map_err(config_err)?;
    Ok(vec![row(json!({
        "experiment": "distill",
        "theta": p.theta,
        "n": p.n,
        "succeeded": rep.succeeded,
        "rate": rep.rate(),
        "expected": rep.expected_rate(),
        "bound": rep.rate_bound,
        "min_fidelity": rep.output_fidelity_min,
        "seed": seed.to_string(),
    }))])
}

fn row(v: serde_json::Value) -> Row {
    match v {
        serde_json::Value::Object(m) => m,
        _ => unreachable!("rows are objects"),
    }
}
