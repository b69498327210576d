//! Zero-forcing precoder and the artificial-noise baseline transmitter.
//!
//! The precoder is the Moore-Penrose pseudoinverse of the Bob steering
//! matrix's Hermitian transpose, `P = H (H^H H)^{-1}`, computed through a
//! Cholesky solve of the K x K Gram system. `H^H P = I` makes each Bob see
//! only its own stream. The AN baseline reuses the same precoder and pushes
//! its noise into the null space of H, so the noise is invisible to every
//! Bob while eating a share of the transmit budget.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_solve, CMat};

/// Default Gram condition ceiling; past this the zero-forcing residual is no
/// longer trustworthy at test tolerances.
pub const DEFAULT_COND_LIMIT: f64 = 1e8;

/// Zero-forcing precoder built from a Bob steering matrix.
#[derive(Debug, Clone)]
pub struct Precoder {
    /// P = H (H^H H)^{-1}, size (2N+1)L x K.
    pub p_matrix: CMat,
    /// Power normalization factor, 1 / tr(P P^H).
    pub epsilon: f64,
    /// Condition estimate of the Gram matrix H^H H.
    pub gram_condition: f64,
    h_matrix: CMat,
    gram_chol: CMat,
}

/// Amplitude split of the AN baseline: the useful signal is scaled by
/// `beta1`, so the received SNR is `beta1^2` times the no-AN SNR; the AN
/// carries the complementary power fraction `1 - beta1^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnDmConfig {
    pub beta1: f64,
}

impl AnDmConfig {
    pub fn new(beta1: f64) -> Result<Self> {
        if !(beta1 > 0.0 && beta1 < 1.0) {
            return Err(Error::Config(format!(
                "beta1 must lie strictly between 0 and 1, got {beta1}"
            )));
        }
        Ok(Self { beta1 })
    }
}

/// Most coherent column pair of a matrix with unit-norm columns; used to
/// name the offending Bobs when the Gram system is near-singular.
fn most_coherent_pair(h: &CMat) -> (usize, usize) {
    let mut best = (0, 1);
    let mut best_val = -1.0;
    for a in 0..h.cols() {
        for b in a + 1..h.cols() {
            let dot: Complex64 = h
                .col(a)
                .iter()
                .zip(h.col(b))
                .map(|(x, y)| x.conj() * y)
                .sum();
            if dot.norm() > best_val {
                best_val = dot.norm();
                best = (a, b);
            }
        }
    }
    best
}

/// Build the zero-forcing precoder from a steering matrix.
///
/// Fails with an ill-conditioned-geometry error naming the most coherent
/// column pair when the Gram condition estimate exceeds `cond_limit` (or the
/// Gram matrix is outright singular, as with duplicated Bob locations).
pub fn build_precoder(h_matrix: &CMat, cond_limit: f64) -> Result<Precoder> {
    let k = h_matrix.cols();
    if k == 0 || h_matrix.rows() < k {
        return Err(Error::InvalidInput(format!(
            "steering matrix must be tall: {} x {}",
            h_matrix.rows(),
            k
        )));
    }
    let gram = h_matrix.herm_mul(h_matrix);
    let (chol, condition) = match cholesky(&gram) {
        Ok(v) => v,
        Err(_) => {
            let (a, b) = most_coherent_pair(h_matrix);
            return Err(Error::IllConditionedGeometry {
                condition: f64::INFINITY,
                limit: cond_limit,
                col_a: a,
                col_b: b,
            });
        }
    };
    if condition > cond_limit {
        let (a, b) = most_coherent_pair(h_matrix);
        return Err(Error::IllConditionedGeometry {
            condition,
            limit: cond_limit,
            col_a: a,
            col_b: b,
        });
    }
    // P = H G^{-1}: solve G y_k = e_k per column, then multiply by H.
    let mut ginv_cols = Vec::with_capacity(k);
    for j in 0..k {
        let mut e = vec![Complex64::new(0.0, 0.0); k];
        e[j] = Complex64::new(1.0, 0.0);
        ginv_cols.push(cholesky_solve(&chol, &e));
    }
    let ginv = CMat::from_cols(&ginv_cols)?;
    let p_matrix = h_matrix.mul(&ginv);
    let epsilon = 1.0 / p_matrix.frob_sq();
    Ok(Precoder {
        p_matrix,
        epsilon,
        gram_condition: condition,
        h_matrix: h_matrix.clone(),
        gram_chol: chol,
    })
}

impl Precoder {
    /// Number of served receivers, K.
    pub fn n_users(&self) -> usize {
        self.p_matrix.cols()
    }

    /// Array dimension, (2N+1)L.
    pub fn dim(&self) -> usize {
        self.p_matrix.rows()
    }

    /// The Bob steering matrix this precoder was built from.
    pub fn h_matrix(&self) -> &CMat {
        &self.h_matrix
    }

    /// Project a vector onto the null space of H^H:
    /// `Pi v = v - H (H^H H)^{-1} H^H v`.
    pub fn null_project(&self, v: &[Complex64]) -> Vec<Complex64> {
        let hv = self.h_matrix.herm_mul_vec(v);
        let y = cholesky_solve(&self.gram_chol, &hv);
        let back = self.h_matrix.mul_vec(&y);
        v.iter().zip(&back).map(|(a, b)| a - b).collect()
    }
}

/// Plain precoded transmission: `x = sqrt(ps) P u`.
pub fn transmit_cooperative(pre: &Precoder, u: &[Complex64], ps: f64) -> Result<Vec<Complex64>> {
    if u.len() != pre.n_users() {
        return Err(Error::InvalidInput(format!(
            "symbol vector length {} does not match K = {}",
            u.len(),
            pre.n_users()
        )));
    }
    let amp = ps.sqrt();
    Ok(pre
        .p_matrix
        .mul_vec(u)
        .into_iter()
        .map(|v| v * amp)
        .collect())
}

/// AN baseline transmission:
/// `x = sqrt(beta1^2 ps) P s + sqrt((1 - beta1^2) ps) w` with `w` a
/// unit-norm vector drawn isotropically in the null space of H^H. Every Bob
/// k therefore receives exactly `beta1 sqrt(ps) s_k`.
pub fn transmit_an_baseline(
    pre: &Precoder,
    s: &[Complex64],
    ps: f64,
    cfg: &AnDmConfig,
    rng: &mut impl Rng,
) -> Result<Vec<Complex64>> {
    if s.len() != pre.n_users() {
        return Err(Error::InvalidInput(format!(
            "symbol vector length {} does not match K = {}",
            s.len(),
            pre.n_users()
        )));
    }
    if pre.n_users() >= pre.dim() {
        return Err(Error::DegenerateBaseline);
    }
    let w = draw_null_noise(pre, rng);
    let sig_amp = cfg.beta1 * ps.sqrt();
    let an_amp = ((1.0 - cfg.beta1 * cfg.beta1) * ps).sqrt();
    let sig = pre.p_matrix.mul_vec(s);
    Ok(sig
        .iter()
        .zip(&w)
        .map(|(a, b)| a * sig_amp + b * an_amp)
        .collect())
}

/// Unit-norm artificial-noise direction, isotropic in the null space of H^H.
pub fn draw_null_noise(pre: &Precoder, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let g: Vec<Complex64> = (0..pre.dim())
            .map(|_| crate::chains::complex_gaussian(rng, 1.0))
            .collect();
        let proj = pre.null_project(&g);
        let norm: f64 = proj.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        // A zero projection has probability zero; guard anyway.
        if norm > 1e-12 {
            return proj.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Leakage coefficients of an eavesdropper channel through the precoder:
/// `rho_k = sum_m conj(h_m) P_{m,k}`, i.e. the k-th entry of `P^T conj(h)`.
/// At a Bob's exact location this is the corresponding unit vector.
pub fn leakage_coefficients(pre: &Precoder, h_eve: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(h_eve.len(), pre.dim());
    (0..pre.n_users())
        .map(|k| {
            pre.p_matrix
                .col(k)
                .iter()
                .zip(h_eve)
                .map(|(p, h)| h.conj() * p)
                .sum()
        })
        .collect()
}
