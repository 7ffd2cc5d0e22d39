//! Spontaneous-emission recoil of a harmonically trapped three-level atom
//! during optical pumping.
//!
//! The crate has two halves that check each other:
//!
//! * a stochastic half ([`trajectory`], [`density`]) that samples completed
//!   pump trajectories (waiting times, emission directions, the final decay
//!   into the pumped level) and bins the accumulated phase-space shifts, and
//! * an analytic half ([`waiting_time`], [`photon_stats`], [`moments`],
//!   [`mapping`]) with closed forms for the recoil-density moments, the
//!   anisotropy and the transport of vibrational moments through the pump
//!   process.
//!
//! Everything is `no_std` + `alloc`. IO, file formats, worker pools and the
//! command-line front end live in the `pumprecoil` crate.
//!
//! Units: times in `1/γ`, frequencies in `γ`, phase-space shifts in units of
//! the trap ground-state width (so `|α|² = 1` is one vibrational quantum).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod config;
pub mod density;
pub mod dipole;
pub mod mapping;
pub mod moments;
pub mod photon_stats;
pub mod rng;
pub mod stats;
pub mod trajectory;
pub mod waiting_time;

mod linalg;

pub use config::{ConfigError, PumpConfig, Violation};
pub use dipole::DipoleCharacteristic;
pub use moments::RecoilMomentSet;
pub use photon_stats::PhotonStatistics;
pub use trajectory::{RecoilAccumulator, RecoilShiftSample, SamplerPlan, TrajectoryError, TrajectorySampler};
pub use waiting_time::WaitingTimeModel;

pub use num_complex::Complex64;

/// Argument outside the domain of a density or distribution function.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("{what} = {value} outside {domain}")]
pub struct DomainError {
    pub what: &'static str,
    pub value: f64,
    pub domain: &'static str,
}
