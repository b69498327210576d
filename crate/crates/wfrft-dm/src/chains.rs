//! End-to-end transmit/receive chains for both schemes.
//!
//! Cooperative: one transform runs across the K-user symbol vector, so one
//! channel use carries one symbol per Bob and the Bobs pool their scalar
//! observations to undo the transform together.
//!
//! Independent: each Bob's data path gets its own transform over blocks of
//! that Bob's length; per channel use every path contributes one transformed
//! sample, and each Bob inverts its own blocks alone.
//!
//! Eavesdroppers see the same radiated vectors through their own steering
//! vectors; without the transform parameters the transform residue acts on
//! them as noise that costs the transmitter no extra power.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fda::{steering_vector, FdaConfig, Location};
use crate::precoding::{transmit_cooperative, AnDmConfig, Precoder};
use crate::psk::PskAlphabet;
use crate::wfrft::{inverse_wfrft, wfrft, WfrftParams};

/// One receiver's profile: where it is, how it modulates, and its transform
/// parameters. `block_len` is the per-path transform length used by the
/// independent scheme.
#[derive(Debug, Clone)]
pub struct BobProfile {
    pub location: Location,
    pub alphabet: PskAlphabet,
    pub wfrft: WfrftParams,
    pub block_len: usize,
}

/// A full experiment deployment.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub fda: FdaConfig,
    pub bobs: Vec<BobProfile>,
    pub eves: Vec<Location>,
    /// Post-precoding signal power.
    pub ps: f64,
    /// Noise variance shared by every receiver, legitimate or not.
    pub noise_var: f64,
    pub an_baseline: AnDmConfig,
    /// Shared transform parameters of the cooperative scheme.
    pub coop_wfrft: WfrftParams,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.fda.validate()?;
        if self.bobs.is_empty() {
            return Err(Error::Config("scenario needs at least one Bob".into()));
        }
        if !(self.ps > 0.0) {
            return Err(Error::Config(format!(
                "ps must be positive, got {}",
                self.ps
            )));
        }
        if !(self.noise_var > 0.0) {
            return Err(Error::Config(format!(
                "noise_var must be positive, got {}",
                self.noise_var
            )));
        }
        for (i, b) in self.bobs.iter().enumerate() {
            if b.block_len < 1 {
                return Err(Error::Config(format!(
                    "bob{}: block length must be >= 1",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn bob_locations(&self) -> Vec<Location> {
        self.bobs.iter().map(|b| b.location).collect()
    }

    /// Zero-forcing precoder for the configured Bobs. Pairwise-distinct Bob
    /// locations are enforced here through the Gram conditioning check.
    pub fn build_precoder(&self) -> Result<Precoder> {
        let h = crate::fda::steering_matrix(&self.fda, &self.bob_locations())?;
        crate::precoding::build_precoder(&h, crate::precoding::DEFAULT_COND_LIMIT)
    }
}

/// Channel-use columns radiated by the array, each of length (2N+1)L.
#[derive(Debug, Clone)]
pub struct TransmitFrame {
    pub columns: Vec<Vec<Complex64>>,
    pub q_total: usize,
}

/// Circular complex Gaussian sample with total variance `variance`
/// (split equally between real and imaginary parts). Box-Muller on two
/// uniforms keeps the draw count per sample fixed, which matters for
/// reproducible streams.
pub fn complex_gaussian(rng: &mut impl Rng, variance: f64) -> Complex64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    Complex64::from_polar((-variance * u1.ln()).sqrt(), 2.0 * PI * u2)
}

/// Add i.i.d. circular complex Gaussian noise of the given variance.
pub fn awgn(signal: &[Complex64], noise_var: f64, rng: &mut impl Rng) -> Result<Vec<Complex64>> {
    if noise_var < 0.0 {
        return Err(Error::InvalidInput(format!(
            "noise variance must be nonnegative, got {noise_var}"
        )));
    }
    Ok(signal
        .iter()
        .map(|s| s + complex_gaussian(rng, noise_var))
        .collect())
}

/// Scalar observation of a radiated vector through a steering vector:
/// `y = h^H x + xi`.
pub fn observe(
    x: &[Complex64],
    steering: &[Complex64],
    noise_var: f64,
    rng: &mut impl Rng,
) -> Complex64 {
    let clean: Complex64 = steering.iter().zip(x).map(|(h, v)| h.conj() * v).sum();
    clean + complex_gaussian(rng, noise_var)
}

// ---------------------------------------------------------------------------
// Cooperative scheme
// ---------------------------------------------------------------------------

/// Transmitter side of the cooperative scheme: transform the K-user symbol
/// vector as one block, then precode: `x = sqrt(ps) P F^a(s)`.
pub fn coop_alice_encode(
    symbols: &[Complex64],
    shared: &WfrftParams,
    pre: &Precoder,
    ps: f64,
) -> Result<Vec<Complex64>> {
    if symbols.len() != pre.n_users() {
        return Err(Error::InvalidInput(format!(
            "expected one symbol per Bob ({}), got {}",
            pre.n_users(),
            symbols.len()
        )));
    }
    let u = wfrft(symbols, shared)?;
    transmit_cooperative(pre, &u, ps)
}

/// Receiver side of the cooperative scheme: the K pooled scalar observations
/// are inverse-transformed with the shared parameters, recovering
/// `sqrt(ps) s + noise`.
pub fn coop_bobs_decode(received: &[Complex64], shared: &WfrftParams) -> Result<Vec<Complex64>> {
    inverse_wfrft(received, shared)
}

/// A passive observer of one cooperative channel use.
pub fn coop_eve_observe(
    x: &[Complex64],
    eve: &Location,
    cfg: &FdaConfig,
    noise_var: f64,
    rng: &mut impl Rng,
) -> Complex64 {
    let h = steering_vector(cfg, eve);
    observe(x, &h, noise_var, rng)
}

// ---------------------------------------------------------------------------
// Independent scheme
// ---------------------------------------------------------------------------

/// Transmitter side of the independent scheme.
///
/// Stream k must contain a whole number of that path's blocks; each block is
/// transformed with the path's own parameters and the transformed samples
/// queue up per path. One sample per path is drained per channel use. The
/// frame covers `q_total = min_k available(k)` channel uses and it is a
/// framing error if that falls short of `max_k Q_k` (a path ran out before
/// the longest block finished). Surplus samples beyond `q_total` are
/// dropped, so feed equal-length streams sized to a common block multiple
/// when continuity matters.
pub fn inde_alice_encode(
    per_bob_streams: &[Vec<Complex64>],
    bobs: &[BobProfile],
    pre: &Precoder,
    ps: f64,
) -> Result<TransmitFrame> {
    if per_bob_streams.len() != bobs.len() || bobs.len() != pre.n_users() {
        return Err(Error::InvalidInput(format!(
            "need one stream per Bob: {} streams, {} bobs, K = {}",
            per_bob_streams.len(),
            bobs.len(),
            pre.n_users()
        )));
    }
    let mut paths: Vec<Vec<Complex64>> = Vec::with_capacity(bobs.len());
    for (k, (stream, bob)) in per_bob_streams.iter().zip(bobs).enumerate() {
        let q_k = bob.block_len;
        if stream.is_empty() || stream.len() % q_k != 0 {
            return Err(Error::Framing(format!(
                "path {k}: stream length {} is not a whole number of {q_k}-symbol blocks",
                stream.len()
            )));
        }
        let mut transformed = Vec::with_capacity(stream.len());
        for block in stream.chunks_exact(q_k) {
            transformed.extend(wfrft(block, &bob.wfrft)?);
        }
        paths.push(transformed);
    }
    let q_total = paths.iter().map(Vec::len).min().unwrap_or(0);
    let q_max = bobs.iter().map(|b| b.block_len).max().unwrap_or(0);
    if q_total < q_max {
        return Err(Error::Framing(format!(
            "insufficient follow-on data: shortest path supplies {q_total} samples \
             but the frame needs {q_max} channel uses"
        )));
    }
    let amp = ps.sqrt();
    let columns = (0..q_total)
        .map(|q| {
            let z: Vec<Complex64> = paths.iter().map(|p| p[q]).collect();
            pre.p_matrix
                .mul_vec(&z)
                .into_iter()
                .map(|v| v * amp)
                .collect()
        })
        .collect();
    Ok(TransmitFrame { columns, q_total })
}

/// Receiver side of the independent scheme: invert the path transform over
/// whole blocks of this Bob's observations.
pub fn inde_bob_decode(observations: &[Complex64], profile: &BobProfile) -> Result<Vec<Complex64>> {
    let q_k = profile.block_len;
    if observations.is_empty() || observations.len() % q_k != 0 {
        return Err(Error::Framing(format!(
            "partial block: {} observations do not divide into {q_k}-sample blocks",
            observations.len()
        )));
    }
    let mut out = Vec::with_capacity(observations.len());
    for block in observations.chunks_exact(q_k) {
        out.extend(inverse_wfrft(block, &profile.wfrft)?);
    }
    Ok(out)
}

/// A passive observer of an independent-scheme frame: one scalar per channel
/// use.
pub fn inde_eve_observe(
    frame: &TransmitFrame,
    eve: &Location,
    cfg: &FdaConfig,
    noise_var: f64,
    rng: &mut impl Rng,
) -> Vec<Complex64> {
    let h = steering_vector(cfg, eve);
    frame
        .columns
        .iter()
        .map(|x| observe(x, &h, noise_var, rng))
        .collect()
}

/// Worst-case eavesdropper processing: every path's transform parameters and
/// block lengths have leaked, and the observer inverts the target path's
/// transform over its observation stream. Off the target's exact location
/// the output stays distorted by the leakage coefficient and by the other
/// paths' cross-transformed streams.
pub fn eve_decode_with_leaked_params(
    observations: &[Complex64],
    bobs: &[BobProfile],
    target_k: usize,
) -> Result<Vec<Complex64>> {
    let profile = bobs.get(target_k).ok_or_else(|| {
        Error::InvalidInput(format!(
            "target index {target_k} out of range for {} bobs",
            bobs.len()
        ))
    })?;
    inde_bob_decode(observations, profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fda::steering_matrix;
    use crate::precoding::{build_precoder, leakage_coefficients, DEFAULT_COND_LIMIT};
    use crate::wfrft::{equivalent_an, weights_multi};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const MV: [i64; 4] = [1, 2, 3, 4];
    const NV: [i64; 4] = [5, 6, 7, 8];

    fn test_scenario() -> Scenario {
        let fda = FdaConfig::new(8, 7, 10.0e9, 2.0e3, 1.0).unwrap();
        let locations = [
            Location::from_degrees(150.0e3, 50.0).unwrap(),
            Location::from_degrees(180.0e3, -40.0).unwrap(),
            Location::from_degrees(260.0e3, 0.0).unwrap(),
        ];
        let alphas = [0.5, 1.0, 1.5];
        let blocks = [3usize, 4, 5];
        let alphabets = [
            PskAlphabet::bpsk(),
            PskAlphabet::qpsk(),
            PskAlphabet::psk8(),
        ];
        let bobs = (0..3)
            .map(|k| BobProfile {
                location: locations[k],
                alphabet: alphabets[k].clone(),
                wfrft: WfrftParams::multi(alphas[k], MV, NV),
                block_len: blocks[k],
            })
            .collect();
        Scenario {
            fda,
            bobs,
            eves: vec![
                Location::from_degrees(150.0e3, 50.0).unwrap(),
                Location::from_degrees(220.0e3, -20.0).unwrap(),
            ],
            ps: 1.0,
            noise_var: 0.1,
            an_baseline: AnDmConfig::new(0.9).unwrap(),
            coop_wfrft: WfrftParams::multi(0.5, MV, NV),
        }
    }

    fn rand_symbols(rng: &mut impl Rng, alphabet: &PskAlphabet, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|_| alphabet.points[rng.gen_range(0..alphabet.m)])
            .collect()
    }

    fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn coop_zero_order_reduces_to_plain_zf() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let s = rand_symbols(&mut rng, &PskAlphabet::qpsk(), 3);
        let ident = WfrftParams::multi(0.0, MV, NV);
        let x = coop_alice_encode(&s, &ident, &pre, sc.ps).unwrap();
        let plain = transmit_cooperative(&pre, &s, sc.ps).unwrap();
        assert!(max_dev(&x, &plain) < 1e-12);
    }

    #[test]
    fn coop_noiseless_chain_recovers_symbols() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let s: Vec<Complex64> = sc
                .bobs
                .iter()
                .map(|b| rand_symbols(&mut rng, &b.alphabet, 1)[0])
                .collect();
            let x = coop_alice_encode(&s, &sc.coop_wfrft, &pre, sc.ps).unwrap();
            // Pooled noiseless observations equal sqrt(ps) F^a(s).
            let pooled = pre.h_matrix().herm_mul_vec(&x);
            let u = wfrft(&s, &sc.coop_wfrft).unwrap();
            for (got, want) in pooled.iter().zip(&u) {
                assert!((got - want * sc.ps.sqrt()).norm() < 1e-8);
            }
            let decoded = coop_bobs_decode(&pooled, &sc.coop_wfrft).unwrap();
            for (got, want) in decoded.iter().zip(&s) {
                assert!((got - want * sc.ps.sqrt()).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn coop_decode_preserves_noise_variance() {
        // Pure-noise input: the inverse transform must keep the empirical
        // variance (2% over 1e5 three-sample draws).
        let sc = test_scenario();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let var_in = 0.37;
        let draws = 100_000;
        let mut acc = 0.0;
        for _ in 0..draws {
            let noise: Vec<Complex64> =
                (0..3).map(|_| complex_gaussian(&mut rng, var_in)).collect();
            let out = coop_bobs_decode(&noise, &sc.coop_wfrft).unwrap();
            acc += out.iter().map(|v| v.norm_sqr()).sum::<f64>();
        }
        let var_out = acc / (draws * 3) as f64;
        assert!(
            (var_out - var_in).abs() / var_in < 0.02,
            "variance {var_out} vs {var_in}"
        );
    }

    #[test]
    fn coop_wrong_shared_parameter_leaves_residual() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let mut residual_at = |dalpha: f64| {
            let mut worst: f64 = 0.0;
            for _ in 0..40 {
                let s = rand_symbols(&mut rng, &PskAlphabet::qpsk(), 3);
                let x = coop_alice_encode(&s, &sc.coop_wfrft, &pre, sc.ps).unwrap();
                let pooled = pre.h_matrix().herm_mul_vec(&x);
                let wrong = sc.coop_wfrft.with_alpha(sc.coop_wfrft.alpha + dalpha);
                let decoded = coop_bobs_decode(&pooled, &wrong).unwrap();
                let dev: f64 = decoded
                    .iter()
                    .zip(&s)
                    .map(|(g, w)| (g - w).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(dev);
            }
            worst
        };
        let r0 = residual_at(0.0);
        let r1 = residual_at(0.05);
        let r2 = residual_at(0.3);
        assert!(r0 < 1e-8);
        assert!(r1 > 1e-3 && r2 > r1, "residuals {r0:.2e} {r1:.2e} {r2:.2e}");
    }

    #[test]
    fn coop_eve_observation_decomposes() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let w = weights_multi(&sc.coop_wfrft);
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let eve = sc.eves[1];
        let h = steering_vector(&sc.fda, &eve);
        for _ in 0..20 {
            let s = rand_symbols(&mut rng, &PskAlphabet::psk8(), 3);
            let x = coop_alice_encode(&s, &sc.coop_wfrft, &pre, sc.ps).unwrap();
            let full = coop_eve_observe(&x, &eve, &sc.fda, 0.0, &mut rng);
            // Split into the distorted-signal and transform-residue parts:
            // a = h^H P, y = sqrt(ps) (w0 a s + a eta).
            let a: Vec<Complex64> = (0..3)
                .map(|k| {
                    pre.p_matrix
                        .col(k)
                        .iter()
                        .zip(&h)
                        .map(|(p, hv)| hv.conj() * p)
                        .sum()
                })
                .collect();
            let eta = equivalent_an(&s, &w).unwrap();
            let dot =
                |v: &[Complex64]| -> Complex64 { a.iter().zip(v).map(|(ai, vi)| ai * vi).sum() };
            let parts = (w.w[0] * dot(&s) + dot(&eta)) * sc.ps.sqrt();
            assert!((full - parts).norm() < 1e-9);
        }
        // Zero input gives a zero noiseless observation.
        let zero = vec![Complex64::new(0.0, 0.0); pre.dim()];
        let y = coop_eve_observe(&zero, &eve, &sc.fda, 0.0, &mut rng);
        assert_eq!(y, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn coop_eve_at_bob_sees_bobs_observation() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let s = rand_symbols(&mut rng, &PskAlphabet::qpsk(), 3);
        let x = coop_alice_encode(&s, &sc.coop_wfrft, &pre, sc.ps).unwrap();
        let bob0 = observe(
            &x,
            &steering_vector(&sc.fda, &sc.bobs[0].location),
            0.0,
            &mut rng,
        );
        let eve0 = coop_eve_observe(&x, &sc.eves[0], &sc.fda, 0.0, &mut rng);
        assert!((bob0 - eve0).norm() < 1e-12);
    }

    #[test]
    fn inde_equal_blocks_zero_order_is_plain_zf() {
        let mut sc = test_scenario();
        for b in sc.bobs.iter_mut() {
            b.block_len = 4;
            b.wfrft = WfrftParams::multi(0.0, MV, NV);
        }
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let streams: Vec<Vec<Complex64>> = sc
            .bobs
            .iter()
            .map(|b| rand_symbols(&mut rng, &b.alphabet, 4))
            .collect();
        let frame = inde_alice_encode(&streams, &sc.bobs, &pre, sc.ps).unwrap();
        assert_eq!(frame.q_total, 4);
        for q in 0..4 {
            let z: Vec<Complex64> = streams.iter().map(|s| s[q]).collect();
            let plain = transmit_cooperative(&pre, &z, sc.ps).unwrap();
            assert!(max_dev(&frame.columns[q], &plain) < 1e-12);
        }
    }

    #[test]
    fn inde_frame_drains_paths_across_blocks() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        // Blocks 3,4,5: paths must supply at least 5 samples each, so path 1
        // needs two blocks (6 symbols) and path 2 needs two (8 symbols).
        let streams: Vec<Vec<Complex64>> = sc
            .bobs
            .iter()
            .map(|b| {
                let blocks_needed = 5usize.div_ceil(b.block_len);
                rand_symbols(&mut rng, &b.alphabet, blocks_needed * b.block_len)
            })
            .collect();
        let frame = inde_alice_encode(&streams, &sc.bobs, &pre, sc.ps).unwrap();
        assert_eq!(frame.q_total, 5);
        // Path 0's transformed stream: two consecutive blocks of 3.
        let mut path0 = wfrft(&streams[0][..3], &sc.bobs[0].wfrft).unwrap();
        path0.extend(wfrft(&streams[0][3..6], &sc.bobs[0].wfrft).unwrap());
        for q in 0..5 {
            // Noiseless Bob 0 observation equals the path sample.
            let rx = pre.h_matrix().herm_mul_vec(&frame.columns[q]);
            assert!((rx[0] - path0[q] * sc.ps.sqrt()).norm() < 1e-8);
        }
        // One block each cannot fill max(Q) = 5 channel uses.
        let short: Vec<Vec<Complex64>> = sc
            .bobs
            .iter()
            .map(|b| rand_symbols(&mut rng, &b.alphabet, b.block_len))
            .collect();
        assert!(matches!(
            inde_alice_encode(&short, &sc.bobs, &pre, sc.ps),
            Err(Error::Framing(_))
        ));
    }

    #[test]
    fn inde_noiseless_round_trip_per_bob() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        // 60 channel uses end on block boundaries for lengths 3, 4, 5.
        let t = 60;
        let streams: Vec<Vec<Complex64>> = sc
            .bobs
            .iter()
            .map(|b| rand_symbols(&mut rng, &b.alphabet, t))
            .collect();
        let frame = inde_alice_encode(&streams, &sc.bobs, &pre, sc.ps).unwrap();
        assert_eq!(frame.q_total, t);
        for (k, bob) in sc.bobs.iter().enumerate() {
            let h = steering_vector(&sc.fda, &bob.location);
            let obs: Vec<Complex64> = frame
                .columns
                .iter()
                .map(|x| observe(x, &h, 0.0, &mut rng))
                .collect();
            let decoded = inde_bob_decode(&obs, bob).unwrap();
            for (got, want) in decoded.iter().zip(&streams[k]) {
                assert!((got - want * sc.ps.sqrt()).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn inde_misaligned_block_fails_to_decode() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let t = 60;
        let streams: Vec<Vec<Complex64>> = sc
            .bobs
            .iter()
            .map(|b| rand_symbols(&mut rng, &b.alphabet, t))
            .collect();
        let frame = inde_alice_encode(&streams, &sc.bobs, &pre, sc.ps).unwrap();
        let bob = &sc.bobs[1];
        let h = steering_vector(&sc.fda, &bob.location);
        let obs: Vec<Complex64> = frame
            .columns
            .iter()
            .map(|x| observe(x, &h, 0.0, &mut rng))
            .collect();
        // Shift by one sample: still whole blocks, but misaligned.
        let shifted = &obs[1..1 + 56];
        let decoded = inde_bob_decode(shifted, bob).unwrap();
        let dev: f64 = decoded
            .iter()
            .zip(&streams[1][1..57])
            .map(|(g, w)| (g - w * sc.ps.sqrt()).norm())
            .fold(0.0, f64::max);
        assert!(dev > 0.1, "misalignment went unnoticed: {dev:.3e}");
        // Partial blocks are rejected outright.
        assert!(inde_bob_decode(&obs[..5], bob).is_err());
    }

    #[test]
    fn inde_eve_observation_decomposes_into_four_parts() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let t = 60;
        let streams: Vec<Vec<Complex64>> = sc
            .bobs
            .iter()
            .map(|b| rand_symbols(&mut rng, &b.alphabet, t))
            .collect();
        let frame = inde_alice_encode(&streams, &sc.bobs, &pre, sc.ps).unwrap();
        let eve = sc.eves[1];
        let h = steering_vector(&sc.fda, &eve);
        let rho = leakage_coefficients(&pre, &h);
        let obs = inde_eve_observe(&frame, &eve, &sc.fda, 0.0, &mut rng);
        // Per-path raw and transform-residue streams, blockwise.
        let mut etas: Vec<Vec<Complex64>> = Vec::new();
        for (k, bob) in sc.bobs.iter().enumerate() {
            let w = weights_multi(&bob.wfrft);
            let mut eta = Vec::with_capacity(t);
            for block in streams[k].chunks_exact(bob.block_len) {
                eta.extend(equivalent_an(block, &w).unwrap());
            }
            etas.push(eta);
        }
        let amp = sc.ps.sqrt();
        for q in 0..t {
            let mut want = Complex64::new(0.0, 0.0);
            for k in 0..3 {
                let w0 = weights_multi(&sc.bobs[k].wfrft).w[0];
                want += rho[k] * (w0 * streams[k][q] + etas[k][q]);
            }
            want *= amp;
            assert!(
                (obs[q] - want).norm() < 1e-9,
                "use {q}: {} vs {want}",
                obs[q]
            );
        }
    }

    #[test]
    fn leaked_params_recover_only_at_bob_location() {
        let sc = test_scenario();
        let pre = sc.build_precoder().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let t = 60;
        let streams: Vec<Vec<Complex64>> = sc
            .bobs
            .iter()
            .map(|b| rand_symbols(&mut rng, &b.alphabet, t))
            .collect();
        let frame = inde_alice_encode(&streams, &sc.bobs, &pre, sc.ps).unwrap();
        // Co-located with Bob 1: perfect recovery of that stream.
        let co = inde_eve_observe(&frame, &sc.eves[0], &sc.fda, 0.0, &mut rng);
        let rec = eve_decode_with_leaked_params(&co, &sc.bobs, 0).unwrap();
        for (got, want) in rec.iter().zip(&streams[0]) {
            assert!((got - want * sc.ps.sqrt()).norm() < 1e-8);
        }
        // Displaced: symbol-domain error stays bounded away from zero.
        let away = inde_eve_observe(&frame, &sc.eves[1], &sc.fda, 0.0, &mut rng);
        let rec = eve_decode_with_leaked_params(&away, &sc.bobs, 0).unwrap();
        let mse: f64 = rec
            .iter()
            .zip(&streams[0])
            .map(|(g, w)| (g - w * sc.ps.sqrt()).norm_sqr())
            .sum::<f64>()
            / t as f64;
        assert!(
            mse > 1e-2,
            "leaked-parameter observer too close: mse = {mse:.3e}"
        );
        assert!(eve_decode_with_leaked_params(&co, &sc.bobs, 7).is_err());
    }

    #[test]
    fn single_user_leaked_output_matches_closed_form() {
        // With K = 1 the leaked-parameter observer sees exactly
        // sqrt(ps) rho_1 s_1 in the noiseless case.
        let fda = FdaConfig::new(8, 7, 10.0e9, 2.0e3, 1.0).unwrap();
        let bob = BobProfile {
            location: Location::from_degrees(150.0e3, 50.0).unwrap(),
            alphabet: PskAlphabet::qpsk(),
            wfrft: WfrftParams::multi(0.5, MV, NV),
            block_len: 4,
        };
        let h = steering_matrix(&fda, &[bob.location]).unwrap();
        let pre = build_precoder(&h, DEFAULT_COND_LIMIT).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let stream = rand_symbols(&mut rng, &bob.alphabet, 8);
        let frame = inde_alice_encode(std::slice::from_ref(&stream), std::slice::from_ref(&bob), &pre, 1.0).unwrap();
        let eve = Location::from_degrees(175.0e3, 32.0).unwrap();
        let h_eve = steering_vector(&fda, &eve);
        let rho = leakage_coefficients(&pre, &h_eve)[0];
        let obs = inde_eve_observe(&frame, &eve, &fda, 0.0, &mut rng);
        let rec = eve_decode_with_leaked_params(&obs, &[bob], 0).unwrap();
        for (got, want) in rec.iter().zip(&stream) {
            assert!((got - rho * want).norm() < 1e-9);
        }
    }

    #[test]
    fn schemes_coincide_for_single_bob_unit_blocks() {
        // K = 1 with unit block length: both schemes radiate identical
        // columns for the same symbols.
        let fda = FdaConfig::new(8, 7, 10.0e9, 2.0e3, 1.0).unwrap();
        let bob = BobProfile {
            location: Location::from_degrees(150.0e3, 50.0).unwrap(),
            alphabet: PskAlphabet::qpsk(),
            wfrft: WfrftParams::multi(0.5, MV, NV),
            block_len: 1,
        };
        let h = steering_matrix(&fda, &[bob.location]).unwrap();
        let pre = build_precoder(&h, DEFAULT_COND_LIMIT).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let stream = rand_symbols(&mut rng, &bob.alphabet, 16);
        let frame = inde_alice_encode(std::slice::from_ref(&stream), std::slice::from_ref(&bob), &pre, 1.0).unwrap();
        for (q, s) in stream.iter().enumerate() {
            let x = coop_alice_encode(&[*s], &bob.wfrft, &pre, 1.0).unwrap();
            assert!(max_dev(&x, &frame.columns[q]) < 1e-12);
        }
    }

    #[test]
    fn awgn_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let zeros = vec![Complex64::new(0.0, 0.0); 1_000_000];
        let var = 0.25;
        let noisy = awgn(&zeros, var, &mut rng).unwrap();
        let measured: f64 = noisy.iter().map(|v| v.norm_sqr()).sum::<f64>() / zeros.len() as f64;
        assert!((measured - var).abs() / var < 0.01, "variance {measured}");
        // Real/imaginary parts uncorrelated.
        let mean_re: f64 = noisy.iter().map(|v| v.re).sum::<f64>() / zeros.len() as f64;
        let mean_im: f64 = noisy.iter().map(|v| v.im).sum::<f64>() / zeros.len() as f64;
        let mut cov = 0.0;
        let mut var_re = 0.0;
        let mut var_im = 0.0;
        for v in &noisy {
            cov += (v.re - mean_re) * (v.im - mean_im);
            var_re += (v.re - mean_re) * (v.re - mean_re);
            var_im += (v.im - mean_im) * (v.im - mean_im);
        }
        let corr = cov / (var_re * var_im).sqrt();
        assert!(corr.abs() < 0.01, "re/im correlation {corr}");
        // Zero variance is the identity; negative variance is rejected.
        let sig = vec![Complex64::new(1.0, -2.0); 4];
        assert_eq!(awgn(&sig, 0.0, &mut rng).unwrap(), sig);
        assert!(awgn(&sig, -1.0, &mut rng).is_err());
    }

    #[test]
    fn scenario_validation() {
        let mut sc = test_scenario();
        assert!(sc.validate().is_ok());
        sc.noise_var = 0.0;
        assert!(sc.validate().is_err());
        let mut sc = test_scenario();
        sc.bobs.clear();
        assert!(sc.validate().is_err());
        let mut sc = test_scenario();
        sc.bobs[0].block_len = 0;
        assert!(sc.validate().is_err());
        // Duplicate Bob locations surface through the precoder build.
        let mut sc = test_scenario();
        sc.bobs[1].location = sc.bobs[0].location;
        assert!(sc.build_precoder().is_err());
    }
}
