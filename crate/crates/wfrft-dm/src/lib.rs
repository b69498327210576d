//! Link-level simulator for power-efficient multi-beam directional
//! modulation over a symmetrical multi-carrier frequency diverse array.
//!
//! The transmitter zero-forces toward K legitimate receivers whose locations
//! fix the precoder, and scrambles the baseband with a 4-order weighted
//! fractional Fourier transform instead of burning transmit power on
//! artificial noise. Two schemes are implemented end to end, a cooperative
//! one (one transform across the K-user symbol vector) and an independent
//! one (a per-user transform over per-user blocks), next to a conventional
//! null-space artificial-noise baseline for comparison.
//!
//! Modules:
//! - [`wfrft`]: normalized DFT, weight coefficients, forward/inverse
//!   transform.
//! - [`fda`]: array frequency plan and range/angle-dependent steering
//!   vectors.
//! - [`precoding`]: zero-forcing precoder, null-space noise injection,
//!   leakage coefficients.
//! - [`psk`]: Gray-labeled M-PSK mapping and demapping.
//! - [`chains`]: transmit/receive chains for both schemes plus observers.
//! - [`metrics`]: closed-form SNR/BER/SINR/secrecy-rate expressions.
//! - [`sim`]: scenario config, deterministic Monte Carlo engine, experiment
//!   sweeps, CSV emission.
//!
//! Everything is deterministic under an explicit seed: random streams are
//! derived per (seed, experiment, sweep point, trial) and results reduce
//! order-independently, so output is byte-identical at any thread count.

pub mod chains;
pub mod error;
pub mod fda;
pub mod linalg;
pub mod metrics;
pub mod precoding;
pub mod psk;
pub mod sim;
pub mod wfrft;

pub use error::{Error, Result};
