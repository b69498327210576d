//! 4-order weighted fractional Fourier transform (WFRFT).
//!
//! The transform is a weighted sum of the 0th..3rd powers of the normalized
//! DFT of a sequence,
//!
//! ```text
//! F^a(s) = w0*s + w1*D(s) + w2*D^2(s) + w3*D^3(s)
//! ```
//!
//! with weights determined by nine parameters: the real order `alpha` and two
//! integer 4-vectors `m_vec`, `n_vec`. With both vectors zero the weights
//! collapse to the classic single-parameter form. The transform is unitary,
//! 4-periodic in `alpha`, and additive in `alpha` for matching integer
//! vectors, so the inverse is simply the transform at `-alpha`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// The nine-parameter transform descriptor: order `alpha` plus the two
/// integer 4-vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WfrftParams {
    /// Transform order (dimensionless, 4-periodic).
    pub alpha: f64,
    pub m_vec: [i64; 4],
    pub n_vec: [i64; 4],
}

impl WfrftParams {
    /// Single-parameter transform: both integer vectors zero.
    pub fn single(alpha: f64) -> Self {
        Self {
            alpha,
            m_vec: [0; 4],
            n_vec: [0; 4],
        }
    }

    /// Full multi-parameter transform.
    pub fn multi(alpha: f64, m_vec: [i64; 4], n_vec: [i64; 4]) -> Self {
        Self {
            alpha,
            m_vec,
            n_vec,
        }
    }

    /// Parameters of the inverse transform: `alpha` negated, vectors kept.
    pub fn inverse(&self) -> Self {
        Self {
            alpha: -self.alpha,
            ..*self
        }
    }

    /// Same vectors, different order.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }
}

/// The four complex weight coefficients w0..w3.
#[derive(Debug, Clone, Copy)]
pub struct WfrftWeights {
    pub w: [Complex64; 4],
}

impl WfrftWeights {
    /// Power of the undistorted component, |w0|^2.
    pub fn signal_power(&self) -> f64 {
        self.w[0].norm_sqr()
    }

    /// Nominal equivalent-AN variance, 1 - |w0|^2.
    pub fn equivalent_an_variance(&self) -> f64 {
        1.0 - self.w[0].norm_sqr()
    }
}

/// Normalized DFT of a sequence: `out_k = (1/sqrt(J)) sum_n s_n e^{-j2pi kn/J}`.
///
/// Energy preserving; four applications return the input.
pub fn normalized_dft(s: &[Complex64]) -> Result<Vec<Complex64>> {
    if s.is_empty() {
        return Err(Error::InvalidInput("normalized_dft: empty sequence".into()));
    }
    let j = s.len();
    let scale = 1.0 / (j as f64).sqrt();
    let mut out = Vec::with_capacity(j);
    for k in 0..j {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, &sn) in s.iter().enumerate() {
            // k*n can overflow the phase wheel for long inputs; reduce mod J.
            let kn = (k * n) % j;
            let phase = -2.0 * PI * (kn as f64) / (j as f64);
            acc += sn * Complex64::from_polar(1.0, phase);
        }
        out.push(acc * scale);
    }
    Ok(out)
}

/// Normalized inverse DFT, the conjugate-kernel partner of [`normalized_dft`].
pub fn normalized_idft(s: &[Complex64]) -> Result<Vec<Complex64>> {
    if s.is_empty() {
        return Err(Error::InvalidInput(
            "normalized_idft: empty sequence".into(),
        ));
    }
    let j = s.len();
    let scale = 1.0 / (j as f64).sqrt();
    let mut out = Vec::with_capacity(j);
    for n in 0..j {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &sk) in s.iter().enumerate() {
            let kn = (k * n) % j;
            let phase = 2.0 * PI * (kn as f64) / (j as f64);
            acc += sk * Complex64::from_polar(1.0, phase);
        }
        out.push(acc * scale);
    }
    Ok(out)
}

/// Multi-parameter weight coefficients,
/// `w_i = (1/4) sum_k exp{-j(pi/2)[(4m_k+1)(4n_k+k)alpha - k i]}`.
///
/// Depends on `alpha` only through `alpha mod 4`; the reduction is applied
/// before evaluating the trigonometric arguments.
pub fn weights_multi(p: &WfrftParams) -> WfrftWeights {
    let alpha = p.alpha.rem_euclid(4.0);
    let mut w = [Complex64::new(0.0, 0.0); 4];
    for (i, wi) in w.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..4usize {
            let c = (4 * p.m_vec[k] + 1) * (4 * p.n_vec[k] + k as i64);
            // e^{-j(pi/2) c alpha} stays accurate because alpha is reduced;
            // the integer part of the product is reduced mod 4 as well.
            let turns = (c as f64) * alpha / 4.0;
            let frac = turns - turns.floor();
            let phase = -2.0 * PI * frac + (PI / 2.0) * (k * i % 4) as f64;
            acc += Complex64::from_polar(1.0, phase);
        }
        *wi = acc * 0.25;
    }
    WfrftWeights { w }
}

/// Single-parameter weight coefficients,
/// `w_i = cos[(a-i)pi/4] cos[(a-i)pi/2] exp(-j3(a-i)pi/4)`,
/// the closed form of [`weights_multi`] with zero integer vectors.
pub fn weights_single(alpha: f64) -> WfrftWeights {
    let alpha = alpha.rem_euclid(4.0);
    let mut w = [Complex64::new(0.0, 0.0); 4];
    for (i, wi) in w.iter_mut().enumerate() {
        let a = (alpha - i as f64) * PI / 4.0;
        let modulus = a.cos() * (2.0 * a).cos();
        *wi = Complex64::from_polar(1.0, -3.0 * a) * modulus;
    }
    WfrftWeights { w }
}

/// Weights for a parameter set: multi-parameter formula, which reduces to the
/// single-parameter one for zero vectors.
pub fn weights(p: &WfrftParams) -> WfrftWeights {
    weights_multi(p)
}

/// Forward 4-order WFRFT of a sequence.
pub fn wfrft(s: &[Complex64], p: &WfrftParams) -> Result<Vec<Complex64>> {
    if s.is_empty() {
        return Err(Error::InvalidInput("wfrft: empty sequence".into()));
    }
    let w = weights_multi(p);
    apply_weights(s, &w)
}

/// Inverse WFRFT: the forward transform with `alpha` negated.
pub fn inverse_wfrft(s: &[Complex64], p: &WfrftParams) -> Result<Vec<Complex64>> {
    wfrft(s, &p.inverse())
}

/// Apply precomputed weights: `w0*s + w1*D(s) + w2*D^2(s) + w3*D^3(s)`.
pub fn apply_weights(s: &[Complex64], w: &WfrftWeights) -> Result<Vec<Complex64>> {
    let d1 = normalized_dft(s)?;
    let d2 = normalized_dft(&d1)?;
    let d3 = normalized_dft(&d2)?;
    Ok((0..s.len())
        .map(|n| w.w[0] * s[n] + w.w[1] * d1[n] + w.w[2] * d2[n] + w.w[3] * d3[n])
        .collect())
}

/// The equivalent-AN component `w1*D(s) + w2*D^2(s) + w3*D^3(s)` of a
/// transformed block: everything an uninformed receiver cannot strip.
pub fn equivalent_an(s: &[Complex64], w: &WfrftWeights) -> Result<Vec<Complex64>> {
    let d1 = normalized_dft(s)?;
    let d2 = normalized_dft(&d1)?;
    let d3 = normalized_dft(&d2)?;
    Ok((0..s.len())
        .map(|n| w.w[1] * d1[n] + w.w[2] * d2[n] + w.w[3] * d3[n])
        .collect())
}
