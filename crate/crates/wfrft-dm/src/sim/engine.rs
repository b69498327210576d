//! Deterministic Monte Carlo engine.
//!
//! A point simulation owns a fixed receiver set observing the same radiated
//! frames. Trials run in fixed-size batches with per-trial derived streams;
//! only integer error/bit counts cross thread boundaries, so results are
//! bit-identical at any parallelism degree. Convergence is re-checked
//! between batches: a receiver is converged once it has both its minimum
//! symbols and its minimum error count, and the whole point stops at the
//! symbol cap.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::seed::{mix, rng_from};
use super::{ProbeMode, Scheme};
use crate::chains::{
    coop_alice_encode, coop_bobs_decode, eve_decode_with_leaked_params, inde_alice_encode,
    inde_bob_decode, observe, BobProfile, Scenario,
};
use crate::fda::{steering_vector, Location};
use crate::precoding::{transmit_an_baseline, Precoder};
use crate::psk::{count_bit_errors, demap_ml, map_bits};
use crate::wfrft::WfrftParams;

/// Channel uses simulated per trial for the per-symbol schemes.
const COOP_TRIAL_USES: usize = 256;
/// Trials per scheduling batch; fixed so the trial schedule is independent
/// of thread count.
const BATCH: u64 = 16;

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub min_symbols: u64,
    pub min_errors: u64,
    pub max_symbols: u64,
}

/// One measured receiver.
#[derive(Debug, Clone)]
pub enum RxKindSpec {
    /// The k-th legitimate receiver.
    Bob(usize),
    /// A passive observer demapping its raw observation against Bob
    /// `target`'s bits.
    EveRaw { loc: Location, target: usize },
    /// Worst-case observer that knows every path's transform parameters
    /// (independent scheme only).
    EveLeaked { loc: Location, target: usize },
    /// A swept diagnostic receiver measured against Bob `target`.
    Probe {
        loc: Location,
        target: usize,
        mode: ProbeMode,
    },
}

#[derive(Debug, Clone)]
pub struct RxSpec {
    pub label: String,
    pub kind: RxKindSpec,
}

#[derive(Debug, Clone)]
pub struct RxResult {
    pub label: String,
    pub errors: u64,
    pub bits: u64,
    pub symbols: u64,
    pub trials: u64,
    pub converged: bool,
}

/// Everything a point simulation needs.
pub struct PointConfig<'a> {
    pub scenario: &'a Scenario,
    pub scheme: Scheme,
    /// Possibly built from perturbed location estimates.
    pub precoder: &'a Precoder,
    pub noise_var: f64,
    pub receivers: &'a [RxSpec],
    pub point_seed: u64,
    pub limits: Limits,
    /// Transform-order mismatch applied at the legitimate decoders.
    pub decode_dalpha: f64,
}

struct ExtraRx {
    steering: Vec<Complex64>,
    target: usize,
    mode: ExtraMode,
}

#[derive(Clone, Copy, PartialEq)]
enum ExtraMode {
    Raw,
    WithKey,
    Leaked,
}

/// Run one (scheme, point) simulation to convergence or the symbol cap.
pub fn simulate_point(cfg: &PointConfig) -> Vec<RxResult> {
    let sc = cfg.scenario;
    let k = sc.bobs.len();
    let bob_steerings: Vec<Vec<Complex64>> = sc
        .bobs
        .iter()
        .map(|b| steering_vector(&sc.fda, &b.location))
        .collect();

    let mut measure_bobs = Vec::new();
    let mut extras = Vec::new();
    let mut order = Vec::new(); // maps output slot -> (is_bob, index)
    for rx in cfg.receivers {
        match &rx.kind {
            RxKindSpec::Bob(i) => {
                assert!(*i < k, "receiver bob index in range");
                order.push((true, measure_bobs.len()));
                measure_bobs.push(*i);
            }
            RxKindSpec::EveRaw { loc, target } => {
                order.push((false, extras.len()));
                extras.push(ExtraRx {
                    steering: steering_vector(&sc.fda, loc),
                    target: *target,
                    mode: ExtraMode::Raw,
                });
            }
            RxKindSpec::EveLeaked { loc, target } => {
                assert!(
                    cfg.scheme == Scheme::WfrftInde,
                    "leaked-parameter decoding needs the per-user scheme"
                );
                order.push((false, extras.len()));
                extras.push(ExtraRx {
                    steering: steering_vector(&sc.fda, loc),
                    target: *target,
                    mode: ExtraMode::Leaked,
                });
            }
            RxKindSpec::Probe { loc, target, mode } => {
                order.push((false, extras.len()));
                extras.push(ExtraRx {
                    steering: steering_vector(&sc.fda, loc),
                    target: *target,
                    mode: match (cfg.scheme, mode) {
                        // The baseline has no key; both probe modes demap raw.
                        (Scheme::AnDm, _) => ExtraMode::Raw,
                        (_, ProbeMode::WithKey) => ExtraMode::WithKey,
                        (_, ProbeMode::WithoutKey) => ExtraMode::Raw,
                    },
                });
            }
        }
    }

    // Mismatched legitimate decoders for the robustness experiments.
    let decode_coop = sc
        .coop_wfrft
        .with_alpha(sc.coop_wfrft.alpha - cfg.decode_dalpha);
    let decode_bobs: Vec<BobProfile> = sc
        .bobs
        .iter()
        .map(|b| {
            let mut d = b.clone();
            d.wfrft = b.wfrft.with_alpha(b.wfrft.alpha - cfg.decode_dalpha);
            d
        })
        .collect();

    let uses_per_trial = match cfg.scheme {
        Scheme::WfrftInde => {
            let l = sc.bobs.iter().map(|b| b.block_len).fold(1, lcm);
            // At least ~128 uses per trial, on whole block boundaries.
            l * (127 / l + 1)
        }
        _ => COOP_TRIAL_USES,
    };

    let n_out = order.len();
    let trial = |t: u64| -> Vec<(u64, u64)> {
        let tseed = mix(cfg.point_seed, &[t]);
        match cfg.scheme {
            Scheme::WfrftCoop => coop_trial(
                sc,
                cfg.precoder,
                &bob_steerings,
                &measure_bobs,
                &extras,
                &decode_coop,
                cfg.noise_var,
                uses_per_trial,
                tseed,
                false,
            ),
            Scheme::AnDm => coop_trial(
                sc,
                cfg.precoder,
                &bob_steerings,
                &measure_bobs,
                &extras,
                &decode_coop,
                cfg.noise_var,
                uses_per_trial,
                tseed,
                true,
            ),
            Scheme::WfrftInde => inde_trial(
                sc,
                cfg.precoder,
                &bob_steerings,
                &measure_bobs,
                &extras,
                &decode_bobs,
                cfg.noise_var,
                uses_per_trial,
                tseed,
            ),
        }
    };

    let mut errors = vec![0u64; n_out];
    let mut bits = vec![0u64; n_out];
    let mut trials = 0u64;
    loop {
        let symbols = trials * uses_per_trial as u64;
        let all_done =
            symbols >= cfg.limits.min_symbols && errors.iter().all(|&e| e >= cfg.limits.min_errors);
        if all_done || symbols >= cfg.limits.max_symbols {
            break;
        }
        let batch: Vec<Vec<(u64, u64)>> = (trials..trials + BATCH)
            .into_par_iter()
            .map(trial)
            .collect();
        for res in batch {
            for (slot, (e, b)) in res.into_iter().enumerate() {
                errors[slot] += e;
                bits[slot] += b;
            }
        }
        trials += BATCH;
    }

    let symbols = trials * uses_per_trial as u64;
    cfg.receivers
        .iter()
        .enumerate()
        .map(|(slot, rx)| RxResult {
            label: rx.label.clone(),
            errors: errors[slot],
            bits: bits[slot],
            symbols,
            trials,
            converged: symbols >= cfg.limits.min_symbols && errors[slot] >= cfg.limits.min_errors,
        })
        .collect()
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gen_bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..2u8)).collect()
}

/// One trial of the per-symbol schemes (cooperative transform or AN
/// baseline). Output order: measured Bobs first, then extras, matching the
/// receiver order built in `simulate_point`.
#[allow(clippy::too_many_arguments)]
fn coop_trial(
    sc: &Scenario,
    pre: &Precoder,
    bob_steerings: &[Vec<Complex64>],
    measure_bobs: &[usize],
    extras: &[ExtraRx],
    decode_params: &WfrftParams,
    noise_var: f64,
    uses: usize,
    tseed: u64,
    an_baseline: bool,
) -> Vec<(u64, u64)> {
    let k = sc.bobs.len();
    let mut data_rng = rng_from(tseed, &[0]);
    let mut an_rng = rng_from(tseed, &[3]);
    let bits: Vec<Vec<u8>> = sc
        .bobs
        .iter()
        .map(|b| gen_bits(&mut data_rng, uses * b.alphabet.bits_per_symbol()))
        .collect();
    let syms: Vec<Vec<Complex64>> = sc
        .bobs
        .iter()
        .zip(&bits)
        .map(|(b, bt)| map_bits(bt, &b.alphabet).expect("whole symbols by construction"))
        .collect();

    let mut bob_noise: Vec<_> = (0..k).map(|i| rng_from(tseed, &[1, i as u64])).collect();
    let mut extra_noise: Vec<_> = (0..extras.len())
        .map(|i| rng_from(tseed, &[2, i as u64]))
        .collect();

    // Per-receiver symbol streams to demap after the loop.
    let mut bob_out: Vec<Vec<Complex64>> = vec![Vec::with_capacity(uses); k];
    let mut extra_out: Vec<Vec<Complex64>> = vec![Vec::with_capacity(uses); extras.len()];

    for t in 0..uses {
        let s_vec: Vec<Complex64> = (0..k).map(|i| syms[i][t]).collect();
        let x = if an_baseline {
            transmit_an_baseline(pre, &s_vec, sc.ps, &sc.an_baseline, &mut an_rng)
                .expect("validated scenario")
        } else {
            coop_alice_encode(&s_vec, &sc.coop_wfrft, pre, sc.ps).expect("validated scenario")
        };
        let bob_obs: Vec<Complex64> = (0..k)
            .map(|i| observe(&x, &bob_steerings[i], noise_var, &mut bob_noise[i]))
            .collect();
        if an_baseline {
            for i in 0..k {
                bob_out[i].push(bob_obs[i]);
            }
        } else {
            let decoded = coop_bobs_decode(&bob_obs, decode_params).expect("K >= 1");
            for i in 0..k {
                bob_out[i].push(decoded[i]);
            }
        }
        for (e, ex) in extras.iter().enumerate() {
            let y = observe(&x, &ex.steering, noise_var, &mut extra_noise[e]);
            match ex.mode {
                ExtraMode::Raw => extra_out[e].push(y),
                ExtraMode::WithKey => {
                    // The probe stands in for its target inside the
                    // cooperative ensemble.
                    let mut pooled = bob_obs.clone();
                    pooled[ex.target] = y;
                    let dec = coop_bobs_decode(&pooled, decode_params).expect("K >= 1");
                    extra_out[e].push(dec[ex.target]);
                }
                ExtraMode::Leaked => unreachable!("leaked mode is inde-only"),
            }
        }
    }

    let mut out = Vec::with_capacity(measure_bobs.len() + extras.len());
    for &i in measure_bobs {
        let rx_bits = demap_ml(&bob_out[i], &sc.bobs[i].alphabet);
        out.push(count_bit_errors(&bits[i], &rx_bits).expect("equal lengths"));
    }
    for (e, ex) in extras.iter().enumerate() {
        let alphabet = &sc.bobs[ex.target].alphabet;
        let rx_bits = demap_ml(&extra_out[e], alphabet);
        out.push(count_bit_errors(&bits[ex.target], &rx_bits).expect("equal lengths"));
    }
    out
}

/// One trial of the independent (per-user transform) scheme.
#[allow(clippy::too_many_arguments)]
fn inde_trial(
    sc: &Scenario,
    pre: &Precoder,
    bob_steerings: &[Vec<Complex64>],
    measure_bobs: &[usize],
    extras: &[ExtraRx],
    decode_bobs: &[BobProfile],
    noise_var: f64,
    uses: usize,
    tseed: u64,
) -> Vec<(u64, u64)> {
    let mut data_rng = rng_from(tseed, &[0]);
    let bits: Vec<Vec<u8>> = sc
        .bobs
        .iter()
        .map(|b| gen_bits(&mut data_rng, uses * b.alphabet.bits_per_symbol()))
        .collect();
    let streams: Vec<Vec<Complex64>> = sc
        .bobs
        .iter()
        .zip(&bits)
        .map(|(b, bt)| map_bits(bt, &b.alphabet).expect("whole symbols by construction"))
        .collect();
    let frame =
        inde_alice_encode(&streams, &sc.bobs, pre, sc.ps).expect("uses on block boundaries");

    let mut out = Vec::with_capacity(measure_bobs.len() + extras.len());
    for &i in measure_bobs {
        let mut noise = rng_from(tseed, &[1, i as u64]);
        let obs: Vec<Complex64> = frame
            .columns
            .iter()
            .map(|x| observe(x, &bob_steerings[i], noise_var, &mut noise))
            .collect();
        let decoded = inde_bob_decode(&obs, &decode_bobs[i]).expect("block boundaries");
        let rx_bits = demap_ml(&decoded, &sc.bobs[i].alphabet);
        out.push(count_bit_errors(&bits[i], &rx_bits).expect("equal lengths"));
    }
    for (e, ex) in extras.iter().enumerate() {
        let mut noise = rng_from(tseed, &[2, e as u64]);
        let obs: Vec<Complex64> = frame
            .columns
            .iter()
            .map(|x| observe(x, &ex.steering, noise_var, &mut noise))
            .collect();
        let symbol_stream = match ex.mode {
            ExtraMode::Raw => obs,
            ExtraMode::WithKey => {
                inde_bob_decode(&obs, &decode_bobs[ex.target]).expect("block boundaries")
            }
            ExtraMode::Leaked => {
                eve_decode_with_leaked_params(&obs, &sc.bobs, ex.target).expect("valid target")
            }
        };
        let alphabet = &sc.bobs[ex.target].alphabet;
        let rx_bits = demap_ml(&symbol_stream, alphabet);
        out.push(count_bit_errors(&bits[ex.target], &rx_bits).expect("equal lengths"));
    }
    out
}
