//! Experiment sweeps: BER vs SNR, BER maps, secrecy rates, robustness.

use super::csv::binomial_ci95;
use super::engine::{simulate_point, Limits, PointConfig, RxKindSpec, RxResult, RxSpec};
use super::{config, ExperimentKind, ExperimentSpec, ResultRow, Scheme};
use crate::error::Result;
use crate::fda::{steering_matrix, Location};
use crate::metrics::{
    achievable_rate, an_bob_sinr, an_eve_sinr, bob_sinr, coop_eve_sinr, coop_secrecy_rate,
    db_to_linear, inde_eve_sinr, inde_secrecy_rate,
};
use crate::precoding::{build_precoder, Precoder, DEFAULT_COND_LIMIT};
use crate::wfrft::{weights_multi, WfrftWeights};

fn limits(spec: &ExperimentSpec) -> Limits {
    Limits {
        min_symbols: spec.min_symbols,
        min_errors: spec.min_errors,
        max_symbols: spec.max_symbols,
    }
}

fn ber_rows(
    spec: &ExperimentSpec,
    scheme: Scheme,
    results: &[RxResult],
    param1_name: &str,
    param1: f64,
    param2_name: &str,
    param2: f64,
) -> Vec<ResultRow> {
    let mut rows = Vec::with_capacity(results.len() * 3);
    for r in results {
        let ber = if r.bits > 0 {
            r.errors as f64 / r.bits as f64
        } else {
            0.0
        };
        let base = ResultRow {
            experiment: spec.experiment.label().into(),
            scheme: scheme.label().into(),
            param1_name: param1_name.into(),
            param1,
            param2_name: param2_name.into(),
            param2,
            metric: String::new(),
            value: 0.0,
            n: r.bits,
            ci95: 0.0,
        };
        rows.push(ResultRow {
            metric: format!("ber_{}", r.label),
            value: ber,
            ci95: binomial_ci95(r.errors, r.bits),
            ..base.clone()
        });
        rows.push(ResultRow {
            metric: format!("bit_errors_{}", r.label),
            value: r.errors as f64,
            ..base.clone()
        });
        rows.push(ResultRow {
            metric: format!("converged_{}", r.label),
            value: if r.converged { 1.0 } else { 0.0 },
            ..base
        });
    }
    rows
}

/// Receiver set for the BER-vs-SNR experiment: every Bob, every configured
/// observer, and (independent scheme) the leaked-parameter observers.
fn ber_receivers(spec: &ExperimentSpec, scheme: Scheme) -> Vec<RxSpec> {
    let mut receivers: Vec<RxSpec> = (0..spec.scenario.bobs.len())
        .map(|k| RxSpec {
            label: format!("bob{}", k + 1),
            kind: RxKindSpec::Bob(k),
        })
        .collect();
    for (v, loc) in spec.scenario.eves.iter().enumerate() {
        receivers.push(RxSpec {
            label: format!("eve{}", v + 1),
            kind: RxKindSpec::EveRaw {
                loc: *loc,
                target: spec.eve_targets[v],
            },
        });
    }
    if spec.leaked_eves && scheme == Scheme::WfrftInde {
        for (v, loc) in spec.scenario.eves.iter().enumerate() {
            receivers.push(RxSpec {
                label: format!("eve{}_leaked", v + 1),
                kind: RxKindSpec::EveLeaked {
                    loc: *loc,
                    target: spec.eve_targets[v],
                },
            });
        }
    }
    receivers
}

pub fn run_ber_vs_snr(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let pre = spec.scenario.build_precoder()?;
    let mut rows = Vec::new();
    for &scheme in &spec.schemes {
        let receivers = ber_receivers(spec, scheme);
        for (si, &snr_db) in spec.snr_grid_db.iter().enumerate() {
            let noise_var = spec.scenario.ps / db_to_linear(snr_db);
            let res = simulate_point(&PointConfig {
                scenario: &spec.scenario,
                scheme,
                precoder: &pre,
                noise_var,
                receivers: &receivers,
                point_seed: spec.point_seed(scheme, si as u64, 0),
                limits: limits(spec),
                decode_dalpha: 0.0,
            });
            rows.extend(ber_rows(spec, scheme, &res, "snr_db", snr_db, "-", 0.0));
        }
    }
    Ok(rows)
}

/// Probe sweeps through angle (at the target Bob's range) or range (at the
/// target Bob's angle), honoring the probe mode.
pub fn run_ber_map(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let pre = spec.scenario.build_precoder()?;
    let target = spec.probe_target;
    let anchor = spec.scenario.bobs[target].location;
    let snr_db = 10.0 * (spec.scenario.ps / spec.scenario.noise_var).log10();
    let sweep_angle = spec.experiment == ExperimentKind::BerVsAngle;
    let axis: Vec<f64> = if sweep_angle {
        spec.sweep.angle_grid_deg.clone()
    } else {
        spec.sweep.range_grid_km.clone()
    };
    let mut rows = Vec::new();
    for &scheme in &spec.schemes {
        for (ai, &coord) in axis.iter().enumerate() {
            let loc = if sweep_angle {
                Location::from_degrees(anchor.range, coord)?
            } else {
                Location::new(coord * 1e3, anchor.angle)?
            };
            let receivers = vec![RxSpec {
                label: "probe".into(),
                kind: RxKindSpec::Probe {
                    loc,
                    target,
                    mode: spec.probe_mode,
                },
            }];
            let res = simulate_point(&PointConfig {
                scenario: &spec.scenario,
                scheme,
                precoder: &pre,
                noise_var: spec.scenario.noise_var,
                receivers: &receivers,
                point_seed: spec.point_seed(scheme, ai as u64, 1),
                limits: limits(spec),
                decode_dalpha: 0.0,
            });
            let (p1_name, p2_name) = if sweep_angle {
                ("angle_deg", "snr_db")
            } else {
                ("range_km", "snr_db")
            };
            let mut out = ber_rows(spec, scheme, &res, p1_name, coord, p2_name, snr_db);
            for r in out.iter_mut() {
                r.metric = format!("{}_{}", r.metric, spec.probe_mode.label());
            }
            rows.extend(out);
        }
    }
    Ok(rows)
}

/// Closed-form achievable and secrecy rates over the SNR grid, plus the
/// transmit power needed per target rate.
pub fn run_secrecy_vs_snr(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let sc = &spec.scenario;
    let pre = sc.build_precoder()?;
    let many = config::many_eves_preset();
    let mut rows = Vec::new();
    for &scheme in &spec.schemes {
        for &snr_db in &spec.snr_grid_db {
            let noise_var = sc.ps / db_to_linear(snr_db);
            let report = rate_report(sc, &pre, scheme, noise_var, &sc.eves)?;
            let mk = |metric: String, value: f64| ResultRow {
                experiment: spec.experiment.label().into(),
                scheme: scheme.label().into(),
                param1_name: "snr_db".into(),
                param1: snr_db,
                param2_name: "-".into(),
                param2: 0.0,
                metric,
                value,
                n: 0,
                ci95: 0.0,
            };
            rows.push(mk("bob_rate".into(), report.bob_rate));
            for (v, r) in report.eve_rates.iter().enumerate() {
                rows.push(mk(format!("eve_rate_eve{}", v + 1), *r));
            }
            rows.push(mk("secrecy_rate".into(), report.secrecy));
            let report9 = rate_report(sc, &pre, scheme, noise_var, &many)?;
            rows.push(mk("secrecy_rate_many_eves".into(), report9.secrecy));
        }
        // Transmit power required to hand the legitimate link a target rate.
        for &rate in &spec.sweep.rate_grid {
            let gamma_needed = (2.0_f64.powf(rate) - 1.0) * sc.noise_var;
            let power = match scheme {
                Scheme::AnDm => gamma_needed / (sc.an_baseline.beta1 * sc.an_baseline.beta1),
                _ => gamma_needed,
            };
            rows.push(ResultRow {
                experiment: spec.experiment.label().into(),
                scheme: scheme.label().into(),
                param1_name: "rate_bits".into(),
                param1: rate,
                param2_name: "-".into(),
                param2: 0.0,
                metric: "power_for_rate".into(),
                value: power,
                n: 0,
                ci95: 0.0,
            });
        }
    }
    Ok(rows)
}

struct SchemeRates {
    bob_rate: f64,
    eve_rates: Vec<f64>,
    secrecy: f64,
}

/// Closed-form rates for one scheme against one observer set.
fn rate_report(
    sc: &crate::chains::Scenario,
    pre: &Precoder,
    scheme: Scheme,
    noise_var: f64,
    eves: &[Location],
) -> Result<SchemeRates> {
    let k = sc.bobs.len();
    let (bob_lambda, eve_rates): (f64, Vec<f64>) = match scheme {
        Scheme::WfrftCoop => {
            let w = weights_multi(&sc.coop_wfrft);
            let rates = eves
                .iter()
                .map(|e| achievable_rate(coop_eve_sinr(pre, e, &sc.fda, &w, sc.ps, noise_var)))
                .collect();
            (bob_sinr(sc.ps, noise_var)?, rates)
        }
        Scheme::WfrftInde => {
            let weights: Vec<WfrftWeights> =
                sc.bobs.iter().map(|b| weights_multi(&b.wfrft)).collect();
            let rates = eves
                .iter()
                .map(|e| {
                    let h = crate::fda::steering_vector(&sc.fda, e);
                    let rho = crate::precoding::leakage_coefficients(pre, &h);
                    (0..k)
                        .map(|t| {
                            achievable_rate(inde_eve_sinr(&rho, &weights, t, sc.ps, noise_var))
                        })
                        .fold(f64::MIN, f64::max)
                })
                .collect();
            (bob_sinr(sc.ps, noise_var)?, rates)
        }
        Scheme::AnDm => {
            let rates = eves
                .iter()
                .map(|e| {
                    achievable_rate(an_eve_sinr(
                        pre,
                        e,
                        &sc.fda,
                        sc.an_baseline.beta1,
                        sc.ps,
                        noise_var,
                    ))
                })
                .collect();
            (an_bob_sinr(sc.an_baseline.beta1, sc.ps, noise_var)?, rates)
        }
    };
    let bob_rate = achievable_rate(bob_lambda);
    let bob_rates = vec![bob_rate; k];
    let secrecy = match scheme {
        // The per-target maximum is already folded into eve_rates, which
        // makes the two secrecy expressions coincide here.
        Scheme::WfrftInde => inde_secrecy_rate(
            &bob_rates,
            &eve_rates.iter().map(|&r| vec![r]).collect::<Vec<_>>(),
        )?,
        _ => coop_secrecy_rate(&bob_rates, &eve_rates)?,
    };
    Ok(SchemeRates {
        bob_rate,
        eve_rates,
        secrecy,
    })
}

/// Single roaming observer over an angle x range grid; closed-form secrecy
/// rate per cell.
pub fn run_secrecy_map(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let sc = &spec.scenario;
    let pre = sc.build_precoder()?;
    let mut rows = Vec::new();
    for &scheme in &spec.schemes {
        for &angle_deg in &spec.sweep.angle_grid_deg {
            for &range_km in &spec.sweep.range_grid_km {
                let eve = Location::from_degrees(range_km * 1e3, angle_deg)?;
                let report = rate_report(sc, &pre, scheme, sc.noise_var, &[eve])?;
                rows.push(ResultRow {
                    experiment: spec.experiment.label().into(),
                    scheme: scheme.label().into(),
                    param1_name: "angle_deg".into(),
                    param1: angle_deg,
                    param2_name: "range_km".into(),
                    param2: range_km,
                    metric: "secrecy_rate".into(),
                    value: report.secrecy,
                    n: 0,
                    ci95: 0.0,
                });
            }
        }
    }
    Ok(rows)
}

/// Robustness to location-estimation errors (precoder rebuilt from offset
/// estimates while the physical channels keep the true locations) and to
/// transform-order mismatch at the legitimate receivers.
pub fn run_robustness(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    match spec.experiment {
        ExperimentKind::RobustnessLocation => robustness_location(spec),
        ExperimentKind::RobustnessAlpha => robustness_alpha(spec),
        _ => unreachable!("dispatch"),
    }
}

fn robustness_location(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let sc = &spec.scenario;
    let receivers = vec![RxSpec {
        label: format!("bob{}", spec.robust_bob + 1),
        kind: RxKindSpec::Bob(spec.robust_bob),
    }];
    let mut cases = vec![(0.0, 0.0)];
    cases.extend(spec.sweep.location_cases.iter().copied());
    let mut rows = Vec::new();
    for &scheme in &spec.schemes {
        for (ci, &(dr_km, dth_deg)) in cases.iter().enumerate() {
            // The transmitter only has location estimates; every Bob's
            // estimate carries the same offset.
            let est: Vec<Location> = sc
                .bobs
                .iter()
                .map(|b| b.location.offset(dr_km * 1e3, dth_deg.to_radians()))
                .collect::<Result<_>>()?;
            let h_est = steering_matrix(&sc.fda, &est)?;
            let pre_est = build_precoder(&h_est, DEFAULT_COND_LIMIT)?;
            let meta = |metric: &str, value: f64| ResultRow {
                experiment: spec.experiment.label().into(),
                scheme: scheme.label().into(),
                param1_name: "case".into(),
                param1: ci as f64,
                param2_name: "-".into(),
                param2: 0.0,
                metric: metric.into(),
                value,
                n: 0,
                ci95: 0.0,
            };
            rows.push(meta("case_dr_km", dr_km));
            rows.push(meta("case_dtheta_deg", dth_deg));
            for (si, &snr_db) in spec.snr_grid_db.iter().enumerate() {
                let noise_var = sc.ps / db_to_linear(snr_db);
                let res = simulate_point(&PointConfig {
                    scenario: sc,
                    scheme,
                    precoder: &pre_est,
                    noise_var,
                    receivers: &receivers,
                    point_seed: spec.point_seed(scheme, si as u64, ci as u64),
                    limits: limits(spec),
                    decode_dalpha: 0.0,
                });
                rows.extend(ber_rows(
                    spec, scheme, &res, "snr_db", snr_db, "case", ci as f64,
                ));
            }
        }
    }
    Ok(rows)
}

fn robustness_alpha(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let mut dalphas = vec![0.0];
    dalphas.extend(spec.sweep.dalpha_grid.iter().copied());
    let mut rows = Vec::new();
    // Variant 0: single-parameter transform (zero integer vectors).
    // Variant 1: the configured multi-parameter transform.
    for (vi, single) in [(0u64, true), (1u64, false)] {
        let mut sc = spec.scenario.clone();
        if single {
            sc.coop_wfrft.m_vec = [0; 4];
            sc.coop_wfrft.n_vec = [0; 4];
            for b in sc.bobs.iter_mut() {
                b.wfrft.m_vec = [0; 4];
                b.wfrft.n_vec = [0; 4];
            }
        }
        let pre = sc.build_precoder()?;
        let receivers = vec![RxSpec {
            label: format!("bob{}", spec.robust_bob + 1),
            kind: RxKindSpec::Bob(spec.robust_bob),
        }];
        let param2_name = if single {
            "dalpha_single"
        } else {
            "dalpha_multi"
        };
        for &scheme in &spec.schemes {
            if scheme == Scheme::AnDm {
                continue; // the baseline has no transform to mismatch
            }
            for (di, &dalpha) in dalphas.iter().enumerate() {
                for (si, &snr_db) in spec.snr_grid_db.iter().enumerate() {
                    let noise_var = sc.ps / db_to_linear(snr_db);
                    let res = simulate_point(&PointConfig {
                        scenario: &sc,
                        scheme,
                        precoder: &pre,
                        noise_var,
                        receivers: &receivers,
                        point_seed: spec.point_seed(scheme, si as u64, vi * 10_000 + di as u64),
                        limits: limits(spec),
                        decode_dalpha: dalpha,
                    });
                    rows.extend(ber_rows(
                        spec,
                        scheme,
                        &res,
                        "snr_db",
                        snr_db,
                        param2_name,
                        dalpha,
                    ));
                }
            }
        }
    }
    Ok(rows)
}

/// Interpolate the SNR (dB) where a BER curve crosses a target, assuming
/// log-linear behavior between grid points. Curves must be sampled on the
/// same grid; returns None if the curve never crosses.
pub fn snr_at_ber(snr_db: &[f64], ber: &[f64], target: f64) -> Option<f64> {
    assert_eq!(snr_db.len(), ber.len());
    for i in 0..snr_db.len().saturating_sub(1) {
        let (b0, b1) = (ber[i], ber[i + 1]);
        if b0 >= target && b1 <= target && b1 > 0.0 && b0 > 0.0 {
            let (l0, l1, lt) = (b0.log10(), b1.log10(), target.log10());
            if (l1 - l0).abs() < 1e-15 {
                return Some(snr_db[i]);
            }
            return Some(snr_db[i] + (lt - l0) / (l1 - l0) * (snr_db[i + 1] - snr_db[i]));
        }
    }
    None
}
