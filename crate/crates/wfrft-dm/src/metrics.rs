//! Closed-form performance figures: SNR relations, theoretical M-PSK BER,
//! eavesdropper SINRs, achievable rates, and secrecy rates.
//!
//! The eavesdropper SINR expressions model the transform residue as white
//! noise of variance `1 - |w0|^2`. That idealization is tight for long
//! transform blocks and drifts O(1/J) at very short ones; the simulation
//! layer measures the exact statistics, and the acceptance suite reports the
//! comparison. See the README's accuracy note.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fda::{steering_vector, FdaConfig, Location};
use crate::precoding::{leakage_coefficients, Precoder};
use crate::wfrft::WfrftWeights;

/// Tail distribution of the standard normal, via the complementary error
/// function: `Q(t) = erfc(t / sqrt(2)) / 2`.
pub fn q_function(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

/// Linear SNR from signal power and noise variance.
pub fn snr(ps: f64, noise_var: f64) -> Result<f64> {
    if !(ps > 0.0) || !(noise_var > 0.0) {
        return Err(Error::InvalidInput(format!(
            "snr needs positive power and noise variance, got ps={ps}, noise_var={noise_var}"
        )));
    }
    Ok(ps / noise_var)
}

pub fn db_to_linear(db: f64) -> f64 {
    10.0_f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Approximate Gray M-PSK bit error rate,
/// `(2 / log2 M) Q(sqrt(2 gamma) sin(pi / M))`.
///
/// Kept in this loose textbook form deliberately, factor-2 overshoot at
/// M = 2 included; Monte Carlo comparisons in the tests use a simulation
/// oracle instead of this formula where exactness matters.
pub fn theoretical_ber_mpsk(gamma: f64, m: usize) -> Result<f64> {
    if !matches!(m, 2 | 4 | 8) {
        return Err(Error::InvalidInput(format!("unsupported PSK order {m}")));
    }
    if gamma < 0.0 {
        return Err(Error::InvalidInput(format!("negative SNR {gamma}")));
    }
    let bits = (m as f64).log2();
    Ok((2.0 / bits) * q_function((2.0 * gamma).sqrt() * (std::f64::consts::PI / m as f64).sin()))
}

/// A legitimate receiver's SINR in either scheme: interference-free, so it
/// equals the SNR.
pub fn bob_sinr(ps: f64, noise_var: f64) -> Result<f64> {
    snr(ps, noise_var)
}

/// Shannon rate of a link at a given SINR, bits/s/Hz.
pub fn achievable_rate(sinr: f64) -> f64 {
    (1.0 + sinr).log2()
}

/// Eavesdropper SINR under the cooperative scheme:
/// `ps |w0|^2 g / (ps g (1-|w0|^2) + noise)` with `g = ||P^H h||^2`.
pub fn coop_eve_sinr(
    pre: &Precoder,
    eve: &Location,
    cfg: &FdaConfig,
    weights: &WfrftWeights,
    ps: f64,
    noise_var: f64,
) -> f64 {
    let h = steering_vector(cfg, eve);
    let g: f64 = leakage_coefficients(pre, &h)
        .iter()
        .map(|r| r.norm_sqr())
        .sum();
    let w0_sq = weights.signal_power();
    let eta_var = weights.equivalent_an_variance();
    ps * w0_sq * g / (ps * g * eta_var + noise_var)
}

/// Eavesdropper SINR under the independent scheme when aiming at path
/// `target_k`, from the leakage coefficients and each path's weights.
pub fn inde_eve_sinr(
    rho: &[Complex64],
    weights_per_bob: &[WfrftWeights],
    target_k: usize,
    ps: f64,
    noise_var: f64,
) -> f64 {
    assert_eq!(rho.len(), weights_per_bob.len());
    assert!(target_k < rho.len());
    let num = ps * rho[target_k].norm_sqr() * weights_per_bob[target_k].signal_power();
    let mut mixed = 0.0;
    let mut residue = 0.0;
    for (k, (r, w)) in rho.iter().zip(weights_per_bob).enumerate() {
        let r_sq = r.norm_sqr();
        if k != target_k {
            mixed += r_sq * w.signal_power();
        }
        residue += r_sq * w.equivalent_an_variance();
    }
    num / (ps * mixed + ps * residue + noise_var)
}

/// Legitimate SNR of the artificial-noise baseline: `beta1^2 gamma`.
pub fn an_bob_sinr(beta1: f64, ps: f64, noise_var: f64) -> Result<f64> {
    Ok(beta1 * beta1 * snr(ps, noise_var)?)
}

/// Eavesdropper SINR of the artificial-noise baseline. The unit-norm AN is
/// isotropic in the null space of the Bobs' steering matrix, so its expected
/// power along an observer's channel is `h^H Pi h / nu` with `nu` the null
/// dimension; at a Bob's own location the AN vanishes exactly and the SINR
/// collapses to `beta1^2 gamma`.
pub fn an_eve_sinr(
    pre: &Precoder,
    eve: &Location,
    cfg: &FdaConfig,
    beta1: f64,
    ps: f64,
    noise_var: f64,
) -> f64 {
    let h = steering_vector(cfg, eve);
    let g: f64 = leakage_coefficients(pre, &h)
        .iter()
        .map(|r| r.norm_sqr())
        .sum();
    let proj = pre.null_project(&h);
    let leak: f64 = proj.iter().zip(&h).map(|(p, hv)| (hv.conj() * p).re).sum();
    let nu = (pre.dim() - pre.n_users()) as f64;
    let an_power = (1.0 - beta1 * beta1) * ps * leak.max(0.0) / nu;
    beta1 * beta1 * ps * g / (an_power + noise_var)
}

/// Rates of every legitimate and eavesdropping link plus the resulting
/// secrecy rate.
#[derive(Debug, Clone)]
pub struct RateReport {
    pub bob_rates: Vec<f64>,
    /// Cooperative / baseline schemes: one rate per eavesdropper.
    /// Independent scheme: flattened V x K, row per eavesdropper.
    pub eve_rates: Vec<Vec<f64>>,
    pub secrecy_rate: f64,
}

/// Secrecy rate of the cooperative scheme:
/// `max_k [ min_v (bob_k - eve_v) ]^+`.
pub fn coop_secrecy_rate(bob_rates: &[f64], eve_rates: &[f64]) -> Result<f64> {
    if bob_rates.is_empty() {
        return Err(Error::InvalidInput(
            "secrecy rate needs at least one Bob".into(),
        ));
    }
    if eve_rates.is_empty() {
        return Err(Error::InvalidInput(
            "secrecy rate is undefined without an adversary".into(),
        ));
    }
    let worst_eve = eve_rates.iter().cloned().fold(f64::MIN, f64::max);
    let best_bob = bob_rates.iter().cloned().fold(f64::MIN, f64::max);
    Ok((best_bob - worst_eve).max(0.0))
}

/// Secrecy rate of the independent scheme:
/// `max_k [ min_v (bob_k - max_k' eve_{v,k'}) ]^+`.
pub fn inde_secrecy_rate(bob_rates: &[f64], eve_rate_matrix: &[Vec<f64>]) -> Result<f64> {
    if bob_rates.is_empty() {
        return Err(Error::InvalidInput(
            "secrecy rate needs at least one Bob".into(),
        ));
    }
    if eve_rate_matrix.is_empty() || eve_rate_matrix.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput(
            "secrecy rate is undefined without an adversary".into(),
        ));
    }
    let worst_eve = eve_rate_matrix
        .iter()
        .map(|row| row.iter().cloned().fold(f64::MIN, f64::max))
        .fold(f64::MIN, f64::max);
    let best_bob = bob_rates.iter().cloned().fold(f64::MIN, f64::max);
    Ok((best_bob - worst_eve).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fda::steering_matrix;
    use crate::precoding::{build_precoder, DEFAULT_COND_LIMIT};
    use crate::wfrft::{weights_multi, WfrftParams};

    const MV: [i64; 4] = [1, 2, 3, 4];
    const NV: [i64; 4] = [5, 6, 7, 8];

    fn table_precoder() -> (FdaConfig, Precoder) {
        let cfg = FdaConfig::new(8, 7, 10.0e9, 2.0e3, 1.0).unwrap();
        let locs = [
            Location::from_degrees(150.0e3, 50.0).unwrap(),
            Location::from_degrees(180.0e3, -40.0).unwrap(),
            Location::from_degrees(260.0e3, 0.0).unwrap(),
        ];
        let h = steering_matrix(&cfg, &locs).unwrap();
        (cfg, build_precoder(&h, DEFAULT_COND_LIMIT).unwrap())
    }

    #[test]
    fn snr_basics() {
        assert_eq!(snr(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(snr(1.0, 0.1).unwrap(), 10.0);
        assert!(snr(0.0, 1.0).is_err());
        assert!(snr(1.0, 0.0).is_err());
        // Baseline split beta1 = 0.9 costs 0.915 dB.
        let gamma = snr(1.0, 0.1).unwrap();
        let gan = an_bob_sinr(0.9, 1.0, 0.1).unwrap();
        assert!((gan - 0.81 * gamma).abs() < 1e-12);
        assert!((linear_to_db(gamma / gan) - 0.9151498112135021).abs() < 1e-10);
    }

    #[test]
    fn ber_formula_values() {
        // gamma = 0 collapses to Q(0) scaled: 1/log2 M.
        for m in [2usize, 4, 8] {
            let b = theoretical_ber_mpsk(0.0, m).unwrap();
            assert!((b - 1.0 / (m as f64).log2()).abs() < 1e-12);
        }
        let b4 = theoretical_ber_mpsk(10.0, 4).unwrap();
        assert!((b4 - 7.827011290012744e-4).abs() < 1e-15);
        let b8 = theoretical_ber_mpsk(10.0, 8).unwrap();
        assert!((b8 - 2.9001673764670475e-2).abs() < 1e-14);
        assert!(theoretical_ber_mpsk(1.0, 16).is_err());
        // Monotone decreasing over a 0..20 dB grid.
        for m in [2usize, 4, 8] {
            let mut prev = f64::MAX;
            for snr_db in 0..=20 {
                let b = theoretical_ber_mpsk(db_to_linear(snr_db as f64), m).unwrap();
                assert!(b < prev);
                prev = b;
            }
        }
    }

    #[test]
    fn bob_rate_examples() {
        let gamma = bob_sinr(1.0, 0.1).unwrap();
        assert_eq!(gamma, 10.0);
        assert!((achievable_rate(gamma) - 3.4594316186372973).abs() < 1e-12);
    }

    #[test]
    fn coop_eve_sinr_limits() {
        let (cfg, pre) = table_precoder();
        let eve = Location::from_degrees(220.0e3, -20.0).unwrap();
        // Order zero leaves no transform residue: plain beamforming leak.
        let w_id = weights_multi(&WfrftParams::multi(0.0, MV, NV));
        let lam = coop_eve_sinr(&pre, &eve, &cfg, &w_id, 1.0, 0.1);
        let h = steering_vector(&cfg, &eve);
        let g: f64 = leakage_coefficients(&pre, &h)
            .iter()
            .map(|r| r.norm_sqr())
            .sum();
        assert!((lam - g / 0.1).abs() < 1e-12);
        // Vanishing noise: ceiling |w0|^2 / (1 - |w0|^2), location-free.
        let w = weights_multi(&WfrftParams::multi(0.5, MV, NV));
        let ceiling = w.signal_power() / w.equivalent_an_variance();
        let near = coop_eve_sinr(&pre, &eve, &cfg, &w, 1.0, 1e-15);
        let far = coop_eve_sinr(
            &pre,
            &Location::from_degrees(150.0e3, 50.0).unwrap(),
            &cfg,
            &w,
            1.0,
            1e-15,
        );
        assert!((near - ceiling).abs() / ceiling < 1e-9);
        assert!((far - ceiling).abs() / ceiling < 1e-9);
        // The ceiling also bounds the SINR at finite noise.
        for snr_db in [0.0, 10.0, 20.0, 40.0] {
            let lam = coop_eve_sinr(&pre, &eve, &cfg, &w, 1.0, db_to_linear(-snr_db));
            assert!(lam <= ceiling + 1e-12);
        }
    }

    #[test]
    fn inde_eve_sinr_cases() {
        let w: Vec<WfrftWeights> = [0.5, 1.0, 1.5]
            .iter()
            .map(|&a| weights_multi(&WfrftParams::multi(a, MV, NV)))
            .collect();
        let gamma = 10.0;
        // Exactly at Bob 0: rho is the unit vector, protection survives.
        let rho = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let lam = inde_eve_sinr(&rho, &w, 0, 1.0, 1.0 / gamma);
        let w0 = w[0].signal_power();
        let want = gamma * w0 / (gamma * (1.0 - w0) + 1.0);
        assert!((lam - want).abs() < 1e-12);
        // Zero orders everywhere and co-location: fully exposed.
        let w_id: Vec<WfrftWeights> = (0..3)
            .map(|_| weights_multi(&WfrftParams::multi(0.0, MV, NV)))
            .collect();
        let lam = inde_eve_sinr(&rho, &w_id, 0, 1.0, 1.0 / gamma);
        assert!((lam - gamma).abs() < 1e-9);
    }

    #[test]
    fn secrecy_rate_clamps_and_reduces() {
        assert_eq!(coop_secrecy_rate(&[2.0], &[2.0]).unwrap(), 0.0);
        assert_eq!(coop_secrecy_rate(&[3.0], &[1.0]).unwrap(), 2.0);
        assert_eq!(coop_secrecy_rate(&[3.0, 2.5], &[1.0, 2.0]).unwrap(), 1.0);
        assert!(coop_secrecy_rate(&[1.0], &[]).is_err());
        assert!(coop_secrecy_rate(&[], &[1.0]).is_err());
        // Independent form with K = 1 matches the cooperative one.
        let coop = coop_secrecy_rate(&[3.0], &[1.0, 2.2]).unwrap();
        let inde = inde_secrecy_rate(&[3.0], &[vec![1.0], vec![2.2]]).unwrap();
        assert_eq!(coop, inde);
        assert!(inde_secrecy_rate(&[3.0], &[]).is_err());
        assert!(inde_secrecy_rate(&[3.0], &[vec![]]).is_err());
    }

    #[test]
    fn default_deployment_secrecy_positive_and_recomputable() {
        // Independent recomputation of the max-min expression from raw
        // SINRs at 10 dB.
        let (cfg, pre) = table_precoder();
        let eves = [
            Location::from_degrees(150.0e3, 50.0).unwrap(),
            Location::from_degrees(220.0e3, -20.0).unwrap(),
        ];
        let w = weights_multi(&WfrftParams::multi(0.5, MV, NV));
        let (ps, noise) = (1.0, 0.1);
        let bob_rates = vec![achievable_rate(bob_sinr(ps, noise).unwrap()); 3];
        let eve_rates: Vec<f64> = eves
            .iter()
            .map(|e| achievable_rate(coop_eve_sinr(&pre, e, &cfg, &w, ps, noise)))
            .collect();
        let got = coop_secrecy_rate(&bob_rates, &eve_rates).unwrap();
        // Direct max-min evaluation, written out longhand.
        let mut best = f64::MIN;
        for b in &bob_rates {
            let mut worst = f64::MAX;
            for e in &eve_rates {
                worst = worst.min(b - e);
            }
            best = best.max(worst);
        }
        assert_eq!(got, best.max(0.0));
        assert!(got > 0.0);
    }

    #[test]
    fn an_eve_sinr_collapses_at_bob() {
        let (cfg, pre) = table_precoder();
        let bob1 = Location::from_degrees(150.0e3, 50.0).unwrap();
        let lam = an_eve_sinr(&pre, &bob1, &cfg, 0.9, 1.0, 0.1);
        assert!((lam - 0.81 * 10.0).abs() < 1e-6);
        // Elsewhere the beamforming leak keeps it strictly below the Bob SNR.
        let off = Location::from_degrees(220.0e3, -20.0).unwrap();
        let lam_off = an_eve_sinr(&pre, &off, &cfg, 0.9, 1.0, 0.1);
        assert!(lam_off < lam);
    }
}
