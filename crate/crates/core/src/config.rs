//! Physical and numerical parameters of a pump run.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;

use crate::dipole::DipoleCharacteristic;

/// Raw parameter map as read from a config file or assembled from flags.
pub type ParamMap = BTreeMap<String, f64>;

pub const LAMBDA2: &str = "lambda2";
pub const ETA1: &str = "eta1";
pub const ETA2: &str = "eta2";
pub const NU_TILDE: &str = "nu_tilde";
pub const SATURATION: &str = "saturation";
pub const DETUNING_SCALED: &str = "detuning_scaled";
pub const DIPOLE_THETA1: &str = "dipole_theta1";
pub const DIPOLE_THETA2: &str = "dipole_theta2";
pub const GAMMA: &str = "gamma";

/// Every key the config format knows, in canonical output order.
pub const KEYS: [&str; 9] =
    [LAMBDA2, ETA1, ETA2, NU_TILDE, SATURATION, DETUNING_SCALED, DIPOLE_THETA1, DIPOLE_THETA2, GAMMA];

/// Keys that may be omitted, with their defaults.
const OPTIONAL: [(&str, f64); 1] = [(GAMMA, 1.0)];

/// One violated constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    MissingKey(String),
    UnknownKey(String),
    NotFinite { field: String, value: f64 },
    OutOfRange { field: String, value: f64, interval: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingKey(k) => write!(f, "missing key `{k}`"),
            Violation::UnknownKey(k) => write!(f, "unknown key `{k}`"),
            Violation::NotFinite { field, value } => {
                write!(f, "`{field}` = {value} is not finite")
            }
            Violation::OutOfRange { field, value, interval } => {
                write!(f, "`{field}` = {value} outside {interval}")
            }
        }
    }
}

/// Validation failure listing every violated constraint.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid pump configuration: {}", join(.violations))]
pub struct ConfigError {
    pub violations: Vec<Violation>,
}

fn join(v: &[Violation]) -> String {
    let mut s = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        s.push_str(&x.to_string());
    }
    s
}

/// Validated pump configuration. Immutable once built.
///
/// `lambda1` is never stored; it is always `1 - lambda2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpConfig {
    lambda2: f64,
    eta1: f64,
    eta2: f64,
    nu_tilde: f64,
    saturation: f64,
    detuning_scaled: f64,
    dipole_theta1: f64,
    dipole_theta2: f64,
    gamma: f64,
}

impl PumpConfig {
    /// Validate a raw parameter map, collecting every violation.
    pub fn validate(raw: &ParamMap) -> Result<Self, ConfigError> {
        let mut violations = Vec::new();

        for key in raw.keys() {
            if !KEYS.contains(&key.as_str()) {
                violations.push(Violation::UnknownKey(key.clone()));
            }
        }

        let mut get = |key: &str| -> f64 {
            match raw.get(key) {
                Some(v) if v.is_finite() => *v,
                Some(v) => {
                    violations.push(Violation::NotFinite { field: key.into(), value: *v });
                    f64::NAN
                }
                None => match OPTIONAL.iter().find(|(k, _)| *k == key) {
                    Some((_, d)) => *d,
                    None => {
                        violations.push(Violation::MissingKey(key.into()));
                        f64::NAN
                    }
                },
            }
        };

        let cfg = PumpConfig {
            lambda2: get(LAMBDA2),
            eta1: get(ETA1),
            eta2: get(ETA2),
            nu_tilde: get(NU_TILDE),
            saturation: get(SATURATION),
            detuning_scaled: get(DETUNING_SCALED),
            dipole_theta1: get(DIPOLE_THETA1),
            dipole_theta2: get(DIPOLE_THETA2),
            gamma: get(GAMMA),
        };

        let mut check = |field: &str, value: f64, ok: bool, interval: &'static str| {
            // NaN here means the key was already reported as missing/non-finite.
            if !value.is_nan() && !ok {
                violations.push(Violation::OutOfRange { field: field.into(), value, interval });
            }
        };
        check(LAMBDA2, cfg.lambda2, cfg.lambda2 > 0.0 && cfg.lambda2 <= 1.0, "(0, 1]");
        check(ETA1, cfg.eta1, cfg.eta1 >= 0.0, "[0, inf)");
        check(ETA2, cfg.eta2, cfg.eta2 >= 0.0, "[0, inf)");
        check(NU_TILDE, cfg.nu_tilde, cfg.nu_tilde > 0.0, "(0, inf)");
        check(SATURATION, cfg.saturation, cfg.saturation >= 0.0, "[0, inf)");
        check(DIPOLE_THETA1, cfg.dipole_theta1, (0.0..=PI).contains(&cfg.dipole_theta1), "[0, pi]");
        check(DIPOLE_THETA2, cfg.dipole_theta2, (0.0..=PI).contains(&cfg.dipole_theta2), "[0, pi]");
        check(GAMMA, cfg.gamma, cfg.gamma > 0.0, "(0, inf)");

        if violations.is_empty() {
            Ok(cfg)
        } else {
            Err(ConfigError { violations })
        }
    }

    /// Start a builder with perpendicular dipoles, resonant pumping and `γ = 1`.
    pub fn builder() -> PumpConfigBuilder {
        PumpConfigBuilder::default()
    }

    /// All parameters as a map; `validate(&cfg.to_params()) == Ok(cfg)`.
    pub fn to_params(&self) -> ParamMap {
        let mut m = ParamMap::new();
        for (k, v) in [
            (LAMBDA2, self.lambda2),
            (ETA1, self.eta1),
            (ETA2, self.eta2),
            (NU_TILDE, self.nu_tilde),
            (SATURATION, self.saturation),
            (DETUNING_SCALED, self.detuning_scaled),
            (DIPOLE_THETA1, self.dipole_theta1),
            (DIPOLE_THETA2, self.dipole_theta2),
            (GAMMA, self.gamma),
        ] {
            m.insert(k.into(), v);
        }
        m
    }

    /// Copy with some fields replaced, re-validated.
    pub fn with_overrides(&self, overrides: &ParamMap) -> Result<Self, ConfigError> {
        let mut m = self.to_params();
        for (k, v) in overrides {
            m.insert(k.clone(), *v);
        }
        Self::validate(&m)
    }

    /// Copy with a different saturation, re-validated.
    pub fn with_saturation(&self, saturation: f64) -> Result<Self, ConfigError> {
        let mut m = ParamMap::new();
        m.insert(SATURATION.into(), saturation);
        self.with_overrides(&m)
    }

    pub fn lambda1(&self) -> f64 {
        1.0 - self.lambda2
    }
    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }
    pub fn eta1(&self) -> f64 {
        self.eta1
    }
    pub fn eta2(&self) -> f64 {
        self.eta2
    }
    pub fn nu_tilde(&self) -> f64 {
        self.nu_tilde
    }
    pub fn saturation(&self) -> f64 {
        self.saturation
    }
    pub fn detuning_scaled(&self) -> f64 {
        self.detuning_scaled
    }
    pub fn dipole_theta1(&self) -> f64 {
        self.dipole_theta1
    }
    pub fn dipole_theta2(&self) -> f64 {
        self.dipole_theta2
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Trap angular frequency `ν = ν̃ γ / 2`.
    pub fn nu(&self) -> f64 {
        0.5 * self.nu_tilde * self.gamma
    }

    /// Laser detuning `Δ` in absolute units.
    pub fn detuning(&self) -> f64 {
        self.detuning_scaled * self.gamma
    }

    pub fn is_resonant(&self) -> bool {
        self.detuning_scaled == 0.0
    }

    /// Radiation characteristic of the recycling transition |3⟩→|1⟩.
    pub fn dipole1(&self) -> DipoleCharacteristic {
        DipoleCharacteristic::from_angle(self.dipole_theta1)
    }

    /// Radiation characteristic of the pumping transition |3⟩→|2⟩.
    pub fn dipole2(&self) -> DipoleCharacteristic {
        DipoleCharacteristic::from_angle(self.dipole_theta2)
    }
}

/// Builder over the same validation path as [`PumpConfig::validate`].
#[derive(Debug, Clone)]
pub struct PumpConfigBuilder {
    params: ParamMap,
}

impl Default for PumpConfigBuilder {
    fn default() -> Self {
        let mut params = ParamMap::new();
        params.insert(DETUNING_SCALED.into(), 0.0);
        params.insert(DIPOLE_THETA1.into(), FRAC_PI_2);
        params.insert(DIPOLE_THETA2.into(), FRAC_PI_2);
        params.insert(GAMMA.into(), 1.0);
        PumpConfigBuilder { params }
    }
}

impl PumpConfigBuilder {
    fn set(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.into(), v);
        self
    }
    pub fn lambda2(self, v: f64) -> Self {
        self.set(LAMBDA2, v)
    }
    pub fn eta(self, eta1: f64, eta2: f64) -> Self {
        self.set(ETA1, eta1).set(ETA2, eta2)
    }
    pub fn nu_tilde(self, v: f64) -> Self {
        self.set(NU_TILDE, v)
    }
    pub fn saturation(self, v: f64) -> Self {
        self.set(SATURATION, v)
    }
    pub fn detuning_scaled(self, v: f64) -> Self {
        self.set(DETUNING_SCALED, v)
    }
    pub fn dipole_angles(self, theta1: f64, theta2: f64) -> Self {
        self.set(DIPOLE_THETA1, theta1).set(DIPOLE_THETA2, theta2)
    }
    pub fn gamma(self, v: f64) -> Self {
        self.set(GAMMA, v)
    }
    pub fn build(self) -> Result<PumpConfig, ConfigError> {
        PumpConfig::validate(&self.params)
    }
}
