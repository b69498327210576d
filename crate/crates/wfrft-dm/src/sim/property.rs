//! Aggregated invariant checks with measured residuals.
//!
//! Every check runs from fixed internal seeds, so the residual table is
//! identical no matter which experiment seed the caller picked: the table
//! describes the build, not the run.

use num_complex::Complex64;
use rand::Rng;

use super::seed::rng_from;
use super::{ExperimentSpec, ResultRow};
use crate::chains::{
    complex_gaussian, coop_alice_encode, coop_bobs_decode, inde_alice_encode, inde_bob_decode,
    observe, Scenario,
};
use crate::error::Result;
use crate::fda::{steering_vector, Location};
use crate::precoding::{draw_null_noise, Precoder};
use crate::wfrft::{equivalent_an, weights_multi, wfrft, WfrftParams};

const SUITE_SEED: u64 = 0x5eed_ab1e_0000_0001;

fn rand_seq(rng: &mut impl Rng, j: usize) -> Vec<Complex64> {
    (0..j).map(|_| complex_gaussian(rng, 1.0)).collect()
}

fn rand_params(rng: &mut impl Rng) -> WfrftParams {
    WfrftParams::multi(
        rng.gen::<f64>() * 8.0 - 4.0,
        core::array::from_fn(|_| rng.gen_range(-9i64..=9)),
        core::array::from_fn(|_| rng.gen_range(-9i64..=9)),
    )
}

fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest zero-forcing residual, `max |(H^H P - I)_{ij}|`.
pub fn zf_identity_residual(pre: &Precoder) -> f64 {
    pre.h_matrix()
        .herm_mul(&pre.p_matrix)
        .max_dev_from_identity()
}

/// Peak-normalized transform-operator unitarity residual for a given block
/// length.
pub fn unitarity_residual(p: &WfrftParams, j: usize) -> f64 {
    let mut cols = Vec::with_capacity(j);
    for k in 0..j {
        let mut e = vec![Complex64::new(0.0, 0.0); j];
        e[k] = Complex64::new(1.0, 0.0);
        cols.push(wfrft(&e, p).expect("nonempty"));
    }
    let mut worst: f64 = 0.0;
    for a in 0..j {
        for b in 0..j {
            let dot: Complex64 = (0..j).map(|r| cols[a][r].conj() * cols[b][r]).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((dot - Complex64::new(want, 0.0)).norm());
        }
    }
    worst
}

/// Empirical per-sample variance of the transform residue against its
/// nominal value `1 - |w0|^2`; returns the relative deviation.
pub fn equivalent_an_variance_rel_dev(
    params: &WfrftParams,
    block_len: usize,
    blocks: usize,
    rng: &mut impl Rng,
) -> f64 {
    let w = weights_multi(params);
    let nominal = w.equivalent_an_variance();
    if nominal <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for _ in 0..blocks {
        let s: Vec<Complex64> = (0..block_len)
            .map(|_| Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU))
            .collect();
        let eta = equivalent_an(&s, &w).expect("nonempty");
        acc += eta.iter().map(|x| x.norm_sqr()).sum::<f64>();
    }
    let measured = acc / (blocks * block_len) as f64;
    (measured - nominal) / nominal
}

pub fn run_property_suite(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let sc = &spec.scenario;
    let mut rows = Vec::new();
    let mut push = |metric: &str, value: f64, n: u64| {
        rows.push(ResultRow {
            experiment: "property_suite".into(),
            scheme: "-".into(),
            param1_name: "-".into(),
            param1: 0.0,
            param2_name: "-".into(),
            param2: 0.0,
            metric: metric.into(),
            value,
            n,
            ci95: 0.0,
        });
    };

    // Transform algebra over randomized parameters and lengths.
    let mut rng = rng_from(SUITE_SEED, &[1]);
    let cases = 200;
    let (mut bound, mut period, mut addit, mut linear, mut inverse) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cases {
        let j = rng.gen_range(2..=6);
        let s = rand_seq(&mut rng, j);
        let p = rand_params(&mut rng);
        let d1 = crate::wfrft::normalized_dft(&s).expect("nonempty");
        bound = bound
            .max(max_dev(&wfrft(&s, &p.with_alpha(0.0)).unwrap(), &s))
            .max(max_dev(&wfrft(&s, &p.with_alpha(1.0)).unwrap(), &d1));
        period = period.max(max_dev(
            &wfrft(&s, &p).unwrap(),
            &wfrft(&s, &p.with_alpha(p.alpha + 4.0)).unwrap(),
        ));
        let beta = rng.gen::<f64>() * 8.0 - 4.0;
        addit = addit.max(max_dev(
            &wfrft(&wfrft(&s, &p.with_alpha(beta)).unwrap(), &p).unwrap(),
            &wfrft(&s, &p.with_alpha(p.alpha + beta)).unwrap(),
        ));
        let u = rand_seq(&mut rng, j);
        let c = complex_gaussian(&mut rng, 1.0);
        let mixed: Vec<Complex64> = s.iter().zip(&u).map(|(a, b)| c * a + b).collect();
        let fs = wfrft(&s, &p).unwrap();
        let fu = wfrft(&u, &p).unwrap();
        let rhs: Vec<Complex64> = fs.iter().zip(&fu).map(|(a, b)| c * a + b).collect();
        linear = linear.max(max_dev(&wfrft(&mixed, &p).unwrap(), &rhs));
        inverse = inverse.max(max_dev(
            &wfrft(&wfrft(&s, &p).unwrap(), &p.inverse()).unwrap(),
            &s,
        ));
    }
    push("wfrft_boundary_residual", bound, cases as u64);
    push("wfrft_periodicity_residual", period, cases as u64);
    push("wfrft_additivity_residual", addit, cases as u64);
    push("wfrft_linearity_residual", linear, cases as u64);
    push("wfrft_inverse_residual", inverse, cases as u64);

    let mut rng = rng_from(SUITE_SEED, &[2]);
    let mut unit: f64 = 0.0;
    for _ in 0..40 {
        let j = rng.gen_range(2..=6);
        unit = unit.max(unitarity_residual(&rand_params(&mut rng), j));
    }
    unit = unit.max(unitarity_residual(&sc.coop_wfrft, sc.bobs.len()));
    for b in &sc.bobs {
        unit = unit.max(unitarity_residual(&b.wfrft, b.block_len));
    }
    push("wfrft_unitarity_residual", unit, 44);

    let mut rng = rng_from(SUITE_SEED, &[3]);
    let mut wnorm: f64 = 0.0;
    for _ in 0..1000 {
        let w = weights_multi(&rand_params(&mut rng));
        wnorm = wnorm.max((w.w.iter().map(|x| x.norm_sqr()).sum::<f64>() - 1.0).abs());
    }
    push("wfrft_weight_norm_dev", wnorm, 1000);

    // Steering-vector structure over random locations.
    let mut rng = rng_from(SUITE_SEED, &[4]);
    let want_mod = 1.0 / (sc.fda.dim() as f64).sqrt();
    let (mut mod_dev, mut norm_dev) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let loc = Location::new(
            50e3 + rng.gen::<f64>() * 400e3,
            (rng.gen::<f64>() - 0.5) * std::f64::consts::PI,
        )?;
        let h = steering_vector(&sc.fda, &loc);
        for e in &h {
            mod_dev = mod_dev.max((e.norm() - want_mod).abs());
        }
        let n: f64 = h.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        norm_dev = norm_dev.max((n - 1.0).abs());
    }
    push("steering_modulus_dev", mod_dev, 200);
    push("steering_norm_dev", norm_dev, 200);

    // Precoder identities.
    let pre = sc.build_precoder()?;
    push("zf_identity_residual", zf_identity_residual(&pre), 1);
    push(
        "power_norm_residual",
        (pre.epsilon * pre.p_matrix.frob_sq() - 1.0).abs(),
        1,
    );
    push("gram_condition", pre.gram_condition, 1);

    let mut rng = rng_from(SUITE_SEED, &[5]);
    let (mut idem, mut annih, mut leak) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let v = rand_seq(&mut rng, pre.dim());
        let p1 = pre.null_project(&v);
        let p2 = pre.null_project(&p1);
        idem = idem.max(max_dev(&p1, &p2));
        let w = draw_null_noise(&pre, &mut rng);
        for r in pre.h_matrix().herm_mul_vec(&w) {
            leak = leak.max(r.norm());
        }
    }
    for kcol in 0..pre.n_users() {
        let hk = pre.h_matrix().col(kcol).to_vec();
        let p = pre.null_project(&hk);
        annih = annih.max(p.iter().map(|x| x.norm()).fold(0.0, f64::max));
    }
    push("projector_idempotence_residual", idem, 100);
    push(
        "projector_annihilation_residual",
        annih,
        pre.n_users() as u64,
    );
    push("an_bob_leak_max", leak, 100);

    // Noiseless loopback through both schemes.
    push(
        "coop_loopback_max_err",
        coop_loopback(sc, &pre, 1024)?,
        1024,
    );
    push(
        "inde_loopback_max_err",
        inde_loopback(sc, &pre, 1020)?,
        1020,
    );

    // Transform-residue variance against its nominal value: asserted at a
    // block length long enough for the white-residue model (the deviation
    // scales as 1/J), and reported untested at the configured chain block
    // lengths where the O(1/J) gap is visible.
    let mut rng = rng_from(SUITE_SEED, &[6]);
    let mut alphas: Vec<(String, WfrftParams)> = vec![("coop".into(), sc.coop_wfrft)];
    for (i, b) in sc.bobs.iter().enumerate() {
        alphas.push((format!("bob{}", i + 1), b.wfrft));
    }
    for (label, params) in &alphas {
        let dev = equivalent_an_variance_rel_dev(params, 128, 3000, &mut rng);
        push(&format!("equiv_an_var_rel_dev_j128_{label}"), dev, 3000);
    }
    let mut rng = rng_from(SUITE_SEED, &[7]);
    for (i, b) in sc.bobs.iter().enumerate() {
        let dev = equivalent_an_variance_rel_dev(&b.wfrft, b.block_len, 20_000, &mut rng);
        push(
            &format!("equiv_an_var_rel_dev_chain_bob{}", i + 1),
            dev,
            20_000,
        );
    }

    // Gaussian statistics through the transform.
    let mut rng = rng_from(SUITE_SEED, &[8]);
    let j = 8;
    let blocks = 50_000;
    let mut acc = 0.0;
    for _ in 0..blocks {
        let s = rand_seq(&mut rng, j);
        let out = wfrft(&s, &sc.coop_wfrft).expect("nonempty");
        acc += out.iter().map(|x| x.norm_sqr()).sum::<f64>();
    }
    push(
        "gaussian_preservation_rel_dev",
        (acc / (blocks * j) as f64 - 1.0).abs(),
        blocks as u64,
    );

    Ok(rows)
}

fn coop_loopback(sc: &Scenario, pre: &Precoder, symbols: usize) -> Result<f64> {
    let mut rng = rng_from(SUITE_SEED, &[9]);
    let steerings: Vec<Vec<Complex64>> = sc
        .bobs
        .iter()
        .map(|b| steering_vector(&sc.fda, &b.location))
        .collect();
    let mut worst: f64 = 0.0;
    for _ in 0..symbols {
        let s: Vec<Complex64> = sc
            .bobs
            .iter()
            .map(|b| b.alphabet.points[rng.gen_range(0..b.alphabet.m)])
            .collect();
        let x = coop_alice_encode(&s, &sc.coop_wfrft, pre, sc.ps)?;
        let pooled: Vec<Complex64> = steerings
            .iter()
            .map(|h| observe(&x, h, 0.0, &mut rng))
            .collect();
        let decoded = coop_bobs_decode(&pooled, &sc.coop_wfrft)?;
        for (got, want) in decoded.iter().zip(&s) {
            worst = worst.max((got - want * sc.ps.sqrt()).norm());
        }
    }
    Ok(worst)
}

fn inde_loopback(sc: &Scenario, pre: &Precoder, uses: usize) -> Result<f64> {
    let mut rng = rng_from(SUITE_SEED, &[10]);
    let lcm_len = sc.bobs.iter().map(|b| b.block_len).fold(1, |a, b| {
        let gcd = {
            let (mut x, mut y) = (a, b);
            while y != 0 {
                let t = y;
                y = x % y;
                x = t;
            }
            x
        };
        a / gcd * b
    });
    let t = uses / lcm_len * lcm_len;
    let streams: Vec<Vec<Complex64>> = sc
        .bobs
        .iter()
        .map(|b| {
            (0..t)
                .map(|_| b.alphabet.points[rng.gen_range(0..b.alphabet.m)])
                .collect()
        })
        .collect();
    let frame = inde_alice_encode(&streams, &sc.bobs, pre, sc.ps)?;
    let mut worst: f64 = 0.0;
    for (k, bob) in sc.bobs.iter().enumerate() {
        let h = steering_vector(&sc.fda, &bob.location);
        let obs: Vec<Complex64> = frame
            .columns
            .iter()
            .map(|x| observe(x, &h, 0.0, &mut rng))
            .collect();
        let decoded = inde_bob_decode(&obs, bob)?;
        for (got, want) in decoded.iter().zip(&streams[k]) {
            worst = worst.max((got - want * sc.ps.sqrt()).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMat;
    use crate::sim::config;
    use crate::sim::ExperimentKind;

    fn quick_spec() -> ExperimentSpec {
        config::experiment_from_str("", ExperimentKind::PropertySuite, 1, None, None).unwrap()
    }

    #[test]
    fn suite_passes_and_ignores_master_seed() {
        let mut spec_a = quick_spec();
        spec_a.seed = 1;
        let mut spec_b = quick_spec();
        spec_b.seed = 99;
        let a = run_property_suite(&spec_a).unwrap();
        let b = run_property_suite(&spec_b).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.metric, y.metric);
            assert_eq!(x.value, y.value, "{} drifted with the seed", x.metric);
        }
        for row in &a {
            let tight = match row.metric.as_str() {
                "wfrft_boundary_residual"
                | "wfrft_periodicity_residual"
                | "wfrft_additivity_residual"
                | "wfrft_linearity_residual"
                | "wfrft_inverse_residual"
                | "wfrft_unitarity_residual" => Some(1e-9),
                "wfrft_weight_norm_dev" => Some(1e-10),
                "steering_modulus_dev" => Some(1e-12),
                "steering_norm_dev" => Some(1e-10),
                "zf_identity_residual" => Some(1e-8),
                "power_norm_residual" => Some(1e-10),
                "projector_idempotence_residual" | "projector_annihilation_residual" => Some(1e-9),
                "an_bob_leak_max" => Some(1e-8),
                "coop_loopback_max_err" | "inde_loopback_max_err" => Some(1e-8),
                "gaussian_preservation_rel_dev" => Some(0.01),
                _ => None,
            };
            if let Some(tol) = tight {
                assert!(
                    row.value < tol,
                    "{} = {:.3e} exceeds {tol:.0e}",
                    row.metric,
                    row.value
                );
            }
            if row.metric.starts_with("equiv_an_var_rel_dev_j128") {
                assert!(
                    row.value.abs() < 0.02,
                    "{} = {:.4} beyond 2%",
                    row.metric,
                    row.value
                );
            }
        }
    }

    #[test]
    fn corrupted_precoder_raises_zf_residual() {
        let sc = config::default_scenario();
        let mut pre = sc.build_precoder().unwrap();
        assert!(zf_identity_residual(&pre) < 1e-8);
        let mut bad: CMat = pre.p_matrix.clone();
        let v = bad.get(0, 0);
        bad.set(0, 0, v + Complex64::new(0.05, 0.0));
        pre.p_matrix = bad;
        assert!(zf_identity_residual(&pre) > 1e-4);
    }
}
