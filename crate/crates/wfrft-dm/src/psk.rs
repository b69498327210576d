//! M-PSK mapping with binary-reflected Gray labels, maximum-likelihood
//! demapping, and bit-error accounting.
//!
//! Constellation point k sits at `exp(j(2 pi k / M + phi_M))` with
//! `phi_2 = 0`, `phi_4 = pi/4`, `phi_8 = pi/8`, so BPSK is antipodal on the
//! real axis and QPSK/8PSK straddle the axes. All points are unit modulus,
//! giving unit average symbol energy.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A PSK constellation with its Gray bit labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PskAlphabet {
    /// Constellation order, one of 2, 4, 8.
    pub m: usize,
    /// Unit-modulus constellation points, index order.
    pub points: Vec<Complex64>,
    /// Gray label of each point, `gray_labels[k] = k ^ (k >> 1)`.
    pub gray_labels: Vec<u32>,
    /// Inverse map: label value -> point index.
    label_to_point: Vec<usize>,
}

impl PskAlphabet {
    pub fn new(m: usize) -> Result<Self> {
        if !matches!(m, 2 | 4 | 8) {
            return Err(Error::InvalidInput(format!(
                "unsupported PSK order {m}; expected 2, 4, or 8"
            )));
        }
        let phase0 = match m {
            2 => 0.0,
            4 => PI / 4.0,
            _ => PI / 8.0,
        };
        let mut points = Vec::with_capacity(m);
        let mut gray_labels = Vec::with_capacity(m);
        let mut label_to_point = vec![0usize; m];
        for k in 0..m {
            points.push(Complex64::from_polar(
                1.0,
                2.0 * PI * (k as f64) / (m as f64) + phase0,
            ));
            let label = (k ^ (k >> 1)) as u32;
            gray_labels.push(label);
            label_to_point[label as usize] = k;
        }
        Ok(Self {
            m,
            points,
            gray_labels,
            label_to_point,
        })
    }

    pub fn bpsk() -> Self {
        Self::new(2).expect("2 is a valid order")
    }

    pub fn qpsk() -> Self {
        Self::new(4).expect("4 is a valid order")
    }

    pub fn psk8() -> Self {
        Self::new(8).expect("8 is a valid order")
    }

    /// Bits per symbol, log2 M.
    pub fn bits_per_symbol(&self) -> usize {
        self.m.trailing_zeros() as usize
    }
}

/// Map a bit stream (MSB first within each symbol) onto constellation points.
pub fn map_bits(bits: &[u8], alphabet: &PskAlphabet) -> Result<Vec<Complex64>> {
    let bps = alphabet.bits_per_symbol();
    if bits.len() % bps != 0 {
        return Err(Error::Framing(format!(
            "bit count {} not divisible by {} bits/symbol",
            bits.len(),
            bps
        )));
    }
    Ok(bits
        .chunks_exact(bps)
        .map(|chunk| {
            let mut label = 0u32;
            for &b in chunk {
                label = (label << 1) | (b & 1) as u32;
            }
            alphabet.points[alphabet.label_to_point[label as usize]]
        })
        .collect())
}

/// Nearest-point decision per sample, returning the Gray bit labels.
/// PSK decisions depend only on phase, so any positive scaling of the input
/// leaves them unchanged.
pub fn demap_ml(samples: &[Complex64], alphabet: &PskAlphabet) -> Vec<u8> {
    let bps = alphabet.bits_per_symbol();
    let mut bits = Vec::with_capacity(samples.len() * bps);
    for &y in samples {
        let mut best = 0usize;
        let mut best_metric = f64::NEG_INFINITY;
        for (k, p) in alphabet.points.iter().enumerate() {
            // Correlation metric: equals nearest-Euclidean for equal-modulus
            // points.
            let metric = (y * p.conj()).re;
            if metric > best_metric {
                best_metric = metric;
                best = k;
            }
        }
        let label = alphabet.gray_labels[best];
        for i in (0..bps).rev() {
            bits.push(((label >> i) & 1) as u8);
        }
    }
    bits
}

/// Hamming distance and length of two equal-length bit vectors.
pub fn count_bit_errors(tx: &[u8], rx: &[u8]) -> Result<(u64, u64)> {
    if tx.len() != rx.len() {
        return Err(Error::InvalidInput(format!(
            "bit vector lengths differ: {} vs {}",
            tx.len(),
            rx.len()
        )));
    }
    let errors = tx.iter().zip(rx).filter(|(a, b)| a != b).count() as u64;
    Ok((errors, tx.len() as u64))
}
