//! Scenario configuration, deterministic Monte Carlo engine, experiment
//! sweeps, and CSV emission.
//!
//! Determinism contract: all randomness flows from the experiment seed
//! through per-(experiment, scheme, point, trial) derived streams, trials
//! run in fixed-size batches, and accumulation sums integer counts, so a
//! given (spec, seed) produces byte-identical CSV at any thread count.

pub mod config;
pub mod csv;
pub mod engine;
pub mod experiments;
pub mod property;
pub mod seed;

use crate::chains::Scenario;
use crate::error::{Error, Result};

/// Which transmitter scheme a run simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    WfrftCoop,
    WfrftInde,
    AnDm,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::WfrftCoop => "wfrft_coop",
            Scheme::WfrftInde => "wfrft_inde",
            Scheme::AnDm => "an_dm",
        }
    }

    pub fn all() -> Vec<Scheme> {
        vec![Scheme::WfrftCoop, Scheme::WfrftInde, Scheme::AnDm]
    }

    fn id(&self) -> u64 {
        match self {
            Scheme::WfrftCoop => 1,
            Scheme::WfrftInde => 2,
            Scheme::AnDm => 3,
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wfrft_coop" => Ok(Scheme::WfrftCoop),
            "wfrft_inde" => Ok(Scheme::WfrftInde),
            "an_dm" => Ok(Scheme::AnDm),
            other => Err(Error::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Whether a swept probe receiver applies the legitimate inverse transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeMode {
    WithKey,
    WithoutKey,
}

impl ProbeMode {
    pub fn label(&self) -> &'static str {
        match self {
            ProbeMode::WithKey => "with_key",
            ProbeMode::WithoutKey => "without_key",
        }
    }
}

impl std::str::FromStr for ProbeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "with_key" => Ok(ProbeMode::WithKey),
            "without_key" => Ok(ProbeMode::WithoutKey),
            other => Err(Error::Config(format!("unknown probe mode '{other}'"))),
        }
    }
}

/// The experiment families the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    BerVsSnr,
    BerVsAngle,
    BerVsRange,
    SecrecyVsSnr,
    SecrecyMap,
    RobustnessLocation,
    RobustnessAlpha,
    PropertySuite,
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::BerVsSnr => "ber_vs_snr",
            ExperimentKind::BerVsAngle => "ber_vs_angle",
            ExperimentKind::BerVsRange => "ber_vs_range",
            ExperimentKind::SecrecyVsSnr => "secrecy_vs_snr",
            ExperimentKind::SecrecyMap => "secrecy_map",
            ExperimentKind::RobustnessLocation => "robustness_location",
            ExperimentKind::RobustnessAlpha => "robustness_alpha",
            ExperimentKind::PropertySuite => "property_suite",
        }
    }

    fn id(&self) -> u64 {
        match self {
            ExperimentKind::BerVsSnr => 1,
            ExperimentKind::BerVsAngle => 2,
            ExperimentKind::BerVsRange => 3,
            ExperimentKind::SecrecyVsSnr => 4,
            ExperimentKind::SecrecyMap => 5,
            ExperimentKind::RobustnessLocation => 6,
            ExperimentKind::RobustnessAlpha => 7,
            ExperimentKind::PropertySuite => 8,
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ber_vs_snr" => Ok(ExperimentKind::BerVsSnr),
            "ber_vs_angle" => Ok(ExperimentKind::BerVsAngle),
            "ber_vs_range" => Ok(ExperimentKind::BerVsRange),
            "secrecy_vs_snr" => Ok(ExperimentKind::SecrecyVsSnr),
            "secrecy_map" => Ok(ExperimentKind::SecrecyMap),
            "robustness_location" => Ok(ExperimentKind::RobustnessLocation),
            "robustness_alpha" => Ok(ExperimentKind::RobustnessAlpha),
            "property_suite" => Ok(ExperimentKind::PropertySuite),
            other => Err(Error::Config(format!("unknown experiment '{other}'"))),
        }
    }
}

/// Experiment-specific sweep axes.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    /// Probe angles (degrees) for the angle map.
    pub angle_grid_deg: Vec<f64>,
    /// Probe ranges (km) for the range map.
    pub range_grid_km: Vec<f64>,
    /// (delta range km, delta angle deg) estimation-error cases; the ideal
    /// (0, 0) case is always prepended.
    pub location_cases: Vec<(f64, f64)>,
    /// Transform-order mismatch values; 0 is always prepended.
    pub dalpha_grid: Vec<f64>,
    /// Target rates (bits/s/Hz) for the power-for-rate rows.
    pub rate_grid: Vec<f64>,
}

/// Full description of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub scenario: Scenario,
    pub experiment: ExperimentKind,
    pub snr_grid_db: Vec<f64>,
    pub sweep: SweepGrid,
    /// Minimum symbols per receiver per point.
    pub min_symbols: u64,
    /// Minimum bit errors for a point to count as converged.
    pub min_errors: u64,
    /// Hard cap on symbols per receiver per point.
    pub max_symbols: u64,
    pub seed: u64,
    pub probe_mode: ProbeMode,
    pub schemes: Vec<Scheme>,
    /// Emit leaked-parameter eavesdropper rows (independent scheme).
    pub leaked_eves: bool,
    /// Which Bob (0-based) the swept probe measures against.
    pub probe_target: usize,
    /// Which Bob (0-based) the robustness experiments measure.
    pub robust_bob: usize,
    /// Which Bob (0-based) each configured observer is graded against.
    pub eve_targets: Vec<usize>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.min_symbols < 10_000 {
            return Err(Error::Config(format!(
                "min_symbols must be at least 10000, got {}",
                self.min_symbols
            )));
        }
        if self.min_errors < 50 {
            return Err(Error::Config(format!(
                "min_errors must be at least 50, got {}",
                self.min_errors
            )));
        }
        if self.max_symbols < self.min_symbols {
            return Err(Error::Config("max_symbols below min_symbols".into()));
        }
        if self.probe_target >= self.scenario.bobs.len()
            || self.robust_bob >= self.scenario.bobs.len()
        {
            return Err(Error::Config(
                "probe/robustness target Bob out of range".into(),
            ));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("no schemes selected".into()));
        }
        if self.eve_targets.len() != self.scenario.eves.len()
            || self
                .eve_targets
                .iter()
                .any(|&t| t >= self.scenario.bobs.len())
        {
            return Err(Error::Config("observer target list inconsistent".into()));
        }
        Ok(())
    }

    /// Seed for one simulated point, stable across scheme subsets and thread
    /// counts.
    pub fn point_seed(&self, scheme: Scheme, axis_idx: u64, case_idx: u64) -> u64 {
        seed::mix(
            self.seed,
            &[self.experiment.id(), scheme.id(), axis_idx, case_idx],
        )
    }
}

/// One output record; serialized as one CSV line.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub scheme: String,
    pub param1_name: String,
    pub param1: f64,
    pub param2_name: String,
    pub param2: f64,
    pub metric: String,
    pub value: f64,
    pub n: u64,
    pub ci95: f64,
}

/// Dispatch an experiment to its runner.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    match spec.experiment {
        ExperimentKind::BerVsSnr => experiments::run_ber_vs_snr(spec),
        ExperimentKind::BerVsAngle | ExperimentKind::BerVsRange => experiments::run_ber_map(spec),
        ExperimentKind::SecrecyVsSnr => experiments::run_secrecy_vs_snr(spec),
        ExperimentKind::SecrecyMap => experiments::run_secrecy_map(spec),
        ExperimentKind::RobustnessLocation | ExperimentKind::RobustnessAlpha => {
            experiments::run_robustness(spec)
        }
        ExperimentKind::PropertySuite => property::run_property_suite(spec),
    }
}

/// True when any BER point in the output failed to reach its error floor.
pub fn any_unconverged(rows: &[ResultRow]) -> bool {
    rows.iter()
        .any(|r| r.metric.starts_with("converged") && r.value == 0.0)
}
