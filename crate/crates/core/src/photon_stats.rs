//! Counting statistics of the photons emitted by one completed pump process.
//!
//! Every emission independently ends the process with probability `λ₂`, so the
//! count is geometric: `P_n = λ₂ λ₁^{n−1}` for `n ≥ 1` and `P₀ = 0`.

#[allow(unused_imports)] // float math under no_std
use num_traits::Float;

use crate::config::PumpConfig;

/// Above this count the pmf is evaluated in log space.
const LOG_SPACE_FROM: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStatistics {
    lambda2: f64,
}

impl PhotonStatistics {
    pub fn new(lambda2: f64) -> Self {
        assert!(lambda2 > 0.0 && lambda2 <= 1.0, "lambda2 must lie in (0, 1]");
        PhotonStatistics { lambda2 }
    }

    pub fn from_config(cfg: &PumpConfig) -> Self {
        Self::new(cfg.lambda2())
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn lambda1(&self) -> f64 {
        1.0 - self.lambda2
    }

    /// `P(n photons)`.
    pub fn pmf(&self, n: u64) -> f64 {
        let l1 = self.lambda1();
        match n {
            0 => 0.0,
            1 => self.lambda2,
            _ if l1 == 0.0 => 0.0,
            _ if n <= LOG_SPACE_FROM => self.lambda2 * l1.powi((n - 1) as i32),
            _ => (self.lambda2.ln() + (n - 1) as f64 * (-self.lambda2).ln_1p()).exp(),
        }
    }

    /// `P(count > n) = λ₁ⁿ`.
    pub fn tail(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let l1 = self.lambda1();
        if l1 == 0.0 {
            0.0
        } else {
            (n as f64 * (-self.lambda2).ln_1p()).exp()
        }
    }

    /// `⟨n⟩ = 1/λ₂`.
    pub fn mean(&self) -> f64 {
        1.0 / self.lambda2
    }

    /// `⟨Δn²⟩ = λ₁/λ₂²`.
    pub fn variance(&self) -> f64 {
        self.lambda1() / (self.lambda2 * self.lambda2)
    }

    /// Variance over mean; above 1 is super-Poissonian.
    pub fn fano(&self) -> f64 {
        self.lambda1() / self.lambda2
    }
}
