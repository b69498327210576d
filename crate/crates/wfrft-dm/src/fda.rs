//! Symmetrical multi-carrier frequency diverse array geometry.
//!
//! A (2N+1)-element linear array whose element n radiates L carriers offset
//! from the centre frequency by `df * ln[(|n|+1)^p (l+1)]`. The logarithmic
//! offsets make the far-field steering vector depend on range as well as
//! angle, which is what lets the precoder point at a location instead of a
//! direction.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::CMat;

/// Propagation speed used throughout, pinned for reproducibility.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Array geometry and frequency plan.
#[derive(Debug, Clone, PartialEq)]
pub struct FdaConfig {
    /// Half the element count: the array has 2N+1 elements, n = -N..N.
    pub n_half: usize,
    /// Carriers per element, l = 0..L-1.
    pub n_carriers: usize,
    /// Centre frequency in Hz.
    pub f0: f64,
    /// Base frequency increment in Hz.
    pub delta_f: f64,
    /// Increment control exponent.
    pub p: f64,
    /// Element spacing in metres.
    pub d: f64,
    /// Propagation speed in m/s.
    pub c: f64,
    /// Steering-vector evaluation time in seconds. The default 0 keeps the
    /// range-dependent phase `-2pi df_{n,l} R/c` as a static snapshot.
    pub t_obs: f64,
}

impl FdaConfig {
    /// Create a config with half-wavelength spacing and a static snapshot.
    pub fn new(n_half: usize, n_carriers: usize, f0: f64, delta_f: f64, p: f64) -> Result<Self> {
        let cfg = Self {
            n_half,
            n_carriers,
            f0,
            delta_f,
            p,
            d: SPEED_OF_LIGHT / (2.0 * f0),
            c: SPEED_OF_LIGHT,
            t_obs: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Override the element spacing.
    pub fn with_spacing(mut self, d: f64) -> Result<Self> {
        self.d = d;
        self.validate()?;
        Ok(self)
    }

    /// Override the evaluation time.
    pub fn with_t_obs(mut self, t_obs: f64) -> Self {
        self.t_obs = t_obs;
        self
    }

    /// Total number of array elements, 2N+1.
    pub fn n_elements(&self) -> usize {
        2 * self.n_half + 1
    }

    /// Dimension of the steering vector, (2N+1) L.
    pub fn dim(&self) -> usize {
        self.n_elements() * self.n_carriers
    }

    /// Check all configuration invariants, including the narrowband
    /// constraint max |df_{n,l}| < f0 / 100.
    pub fn validate(&self) -> Result<()> {
        if self.f0 <= 0.0 {
            return Err(Error::Config("f0 must be positive".into()));
        }
        if self.d <= 0.0 {
            return Err(Error::Config("element spacing d must be positive".into()));
        }
        if self.n_carriers < 1 {
            return Err(Error::Config("carrier count L must be at least 1".into()));
        }
        if self.c <= 0.0 {
            return Err(Error::Config("propagation speed must be positive".into()));
        }
        let max_inc = self.delta_f.abs()
            * ((self.n_half as f64 + 1.0).powf(self.p) * self.n_carriers as f64)
                .ln()
                .abs();
        if max_inc >= self.f0 / 100.0 {
            return Err(Error::Config(format!(
                "frequency increments too large: max |df| = {max_inc:.3e} Hz \
                 violates max|df| < f0/100 = {:.3e} Hz",
                self.f0 / 100.0
            )));
        }
        Ok(())
    }
}

/// Polar position of a receiver relative to the array centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    /// Range in metres, strictly positive.
    pub range: f64,
    /// Azimuth in radians, normalized to (-pi, pi].
    pub angle: f64,
}

impl Location {
    pub fn new(range_m: f64, angle_rad: f64) -> Result<Self> {
        if !(range_m > 0.0) || !range_m.is_finite() {
            return Err(Error::Config(format!(
                "range must be positive and finite, got {range_m}"
            )));
        }
        // Normalize to (-pi, pi].
        let mut a = angle_rad.rem_euclid(2.0 * PI);
        if a > PI {
            a -= 2.0 * PI;
        }
        Ok(Self {
            range: range_m,
            angle: a,
        })
    }

    /// Degrees at the config boundary, radians inside.
    pub fn from_degrees(range_m: f64, angle_deg: f64) -> Result<Self> {
        Self::new(range_m, angle_deg.to_radians())
    }

    /// Displaced location (estimation-error model).
    pub fn offset(&self, delta_range_m: f64, delta_angle_rad: f64) -> Result<Self> {
        Self::new(self.range + delta_range_m, self.angle + delta_angle_rad)
    }
}

/// Frequency increment of carrier l on element n: `df * ln[(|n|+1)^p (l+1)]`.
///
/// Symmetric in n by construction.
pub fn frequency_increment(cfg: &FdaConfig, n: i64, l: usize) -> Result<f64> {
    let n_half = cfg.n_half as i64;
    if n < -n_half || n > n_half {
        return Err(Error::IndexOutOfRange(format!(
            "element index {n} outside [-{n_half}, {n_half}]"
        )));
    }
    if l >= cfg.n_carriers {
        return Err(Error::IndexOutOfRange(format!(
            "carrier index {l} outside [0, {})",
            cfg.n_carriers
        )));
    }
    let base = (n.unsigned_abs() as f64 + 1.0).powf(cfg.p) * (l as f64 + 1.0);
    Ok(cfg.delta_f * base.ln())
}

/// Normalized steering vector toward a location, ordered element-major
/// (n = -N..N outer, l = 0..L-1 inner). Every entry has modulus
/// `1/sqrt((2N+1)L)`; the common carrier factor `exp{j2pi f0 (t - r/c)}` is
/// dropped as a global phase.
pub fn steering_vector(cfg: &FdaConfig, loc: &Location) -> Vec<Complex64> {
    let dim = cfg.dim();
    let scale = 1.0 / (dim as f64).sqrt();
    let sin_theta = loc.angle.sin();
    let time_term = cfg.t_obs - loc.range / cfg.c;
    let angle_coeff = 2.0 * PI * cfg.f0 * cfg.d * sin_theta / cfg.c;
    let mut out = Vec::with_capacity(dim);
    let n_half = cfg.n_half as i64;
    for n in -n_half..=n_half {
        let elem_phase = angle_coeff * n as f64;
        for l in 0..cfg.n_carriers {
            let df = frequency_increment(cfg, n, l).expect("indices in range by construction");
            let phase = 2.0 * PI * df * time_term + elem_phase;
            out.push(Complex64::from_polar(scale, phase));
        }
    }
    out
}

/// Steering matrix whose column k is the steering vector of `locs[k]`.
pub fn steering_matrix(cfg: &FdaConfig, locs: &[Location]) -> Result<CMat> {
    if locs.is_empty() {
        return Err(Error::InvalidInput(
            "steering_matrix: need at least one location".into(),
        ));
    }
    let cols: Vec<Vec<Complex64>> = locs.iter().map(|loc| steering_vector(cfg, loc)).collect();
    CMat::from_cols(&cols)
}
