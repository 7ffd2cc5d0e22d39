//! Closed-form moments of the recoil density.
//!
//! With `n` emissions, `α = Σ_m iη_m s_m e^{iνt_m}` where the last emission uses
//! `(η₂, μ₂)` and all earlier ones `(η₁, μ₁)`. Averaging over the geometric
//! photon number and the i.i.d. waiting times brings in the spectral
//! waiting-time distribution only through the pump factor
//!
//! ```text
//! K(ω) = λ₂ w̄(ω) / (1 − λ₁ w̄(ω)),     A e^{iφ_A} = K(2ν)
//! ```
//!
//! Notation used below: `c_a = ⟨s²⟩_a`, `q_a = ⟨s⁴⟩_a`,
//! `n̄ = η₂²c₂ + (λ₁/λ₂)η₁²c₁` and `N₁ = (λ₁/λ₂)η₁²c₁`, the part of `n̄` from
//! the recycled transition.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // float math under no_std
use num_traits::Float;

use crate::config::PumpConfig;
use crate::waiting_time;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MomentError {
    #[error("closed form needs resonant pumping, got detuning {0}")]
    NotResonant(f64),
    #[error("saturation grid is empty")]
    EmptyGrid,
    #[error("saturation grid value {0} is not a finite non-negative number")]
    BadGridValue(f64),
    #[error("⟨α^(2l)⟩ is available for l = 1, 2 only (got l = {0})")]
    UnsupportedOrder(u32),
}

/// Analytic moments of the recoil density for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoilMomentSet {
    /// `n̄_p = ⟨|α|²⟩`.
    pub n_bar: f64,
    /// `⟨α²⟩ = −n̄ A e^{iφ_A}`.
    pub alpha2: Complex64,
    /// `A ∈ [0, 1]`.
    pub anisotropy: f64,
    /// `φ_A ∈ (−π, π]`.
    pub phi_a: f64,
    /// `⟨|α|⁴⟩ = ⟨α*²α²⟩`.
    pub alpha4: f64,
    /// `⟨α⁴⟩`.
    pub alpha4_complex: Complex64,
    /// `δn_p² = ⟨|α|⁴⟩ − n̄²`.
    pub dn_sq: f64,
    /// `η₂²⟨s²⟩₂`, the single final-emission share of `n̄`.
    pub final_share: f64,
}

/// Even-order inputs shared by all formulas.
#[derive(Debug, Clone, Copy)]
struct Parts {
    a2: f64,
    n1: f64,
    q: f64,
}

impl Parts {
    fn new(cfg: &PumpConfig) -> Self {
        let ratio = cfg.lambda1() / cfg.lambda2();
        let (d1, d2) = (cfg.dipole1(), cfg.dipole2());
        let (e1, e2) = (cfg.eta1() * cfg.eta1(), cfg.eta2() * cfg.eta2());
        Parts {
            a2: e2 * d2.moment(2),
            n1: ratio * e1 * d1.moment(2),
            q: e2 * e2 * d2.moment(4) + ratio * e1 * e1 * d1.moment(4),
        }
    }

    fn n_bar(&self) -> f64 {
        self.a2 + self.n1
    }
}

/// `w̄(2lν)` for the configured laser.
pub fn spectral_at(cfg: &PumpConfig, l: u32) -> Complex64 {
    let omega = 2.0 * l as f64 * cfg.nu();
    waiting_time::spectral(cfg.saturation(), cfg.detuning_scaled(), cfg.gamma(), omega)
}

/// `K(2lν) = λ₂ w̄ / (1 − λ₁ w̄)`.
pub fn pump_factor(cfg: &PumpConfig, l: u32) -> Complex64 {
    pump_factor_of(cfg.lambda2(), spectral_at(cfg, l))
}

fn pump_factor_of(lambda2: f64, w: Complex64) -> Complex64 {
    w * lambda2 / (Complex64::new(1.0, 0.0) - w * (1.0 - lambda2))
}

/// `n̄_p`. Depends on neither saturation nor detuning.
pub fn mean_excitation(cfg: &PumpConfig) -> f64 {
    Parts::new(cfg).n_bar()
}

/// `⟨α²⟩ = −n̄ K(2ν)`.
pub fn alpha2_moment(cfg: &PumpConfig) -> Complex64 {
    -pump_factor(cfg, 1) * mean_excitation(cfg)
}

/// `⟨α^{2l}⟩` for `l ∈ {1, 2}`.
///
/// For `l = 2` two emissions can share the four factors of `α⁴`, which adds
/// a pair term to the single-emission part:
///
/// ```text
/// ⟨α⁴⟩ = K(4ν) [Q + 6 N₁ n̄ K(2ν)],   Q = η₂⁴q₂ + (λ₁/λ₂)η₁⁴q₁
/// ```
pub fn even_moment(cfg: &PumpConfig, l: u32) -> Result<Complex64, MomentError> {
    let p = Parts::new(cfg);
    match l {
        1 => Ok(-pump_factor(cfg, 1) * p.n_bar()),
        2 => {
            let k2 = pump_factor(cfg, 1);
            let k4 = pump_factor(cfg, 2);
            Ok(k4 * (k2 * (6.0 * p.n1 * p.n_bar()) + p.q))
        }
        _ => Err(MomentError::UnsupportedOrder(l)),
    }
}

/// `(A, φ_A)` from the complex pump factor.
pub fn anisotropy(cfg: &PumpConfig) -> (f64, f64) {
    let k = pump_factor(cfg, 1);
    (k.norm(), k.arg())
}

/// `δq²_φ = n̄[1 − A cos(2φ + φ_A)]` for `q = √2 Re(α e^{iφ})`.
pub fn quadrature_variance(cfg: &PumpConfig, phi: f64) -> f64 {
    let (a, phi_a) = anisotropy(cfg);
    mean_excitation(cfg) * (1.0 - a * (2.0 * phi + phi_a).cos())
}

/// Directions of least and largest quadrature spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalQuadratures {
    pub phi_minus: f64,
    pub phi_plus: f64,
    pub var_minus: f64,
    pub var_plus: f64,
}

pub fn extremal_quadratures(cfg: &PumpConfig) -> ExtremalQuadratures {
    RecoilMomentSet::from_config(cfg).extremal()
}

/// `⟨|α|⁴⟩ = Q + 2 N₁ n̄ (2 + A cos φ_A)`.
///
/// The `2` counts the two orderings in which a pair of distinct emissions
/// contributes `|a_m|²|a_m'|²`; the `A cos φ_A` part is the correlated
/// `a_m² a*_m'²` term.
pub fn fourth_moment(cfg: &PumpConfig) -> f64 {
    let p = Parts::new(cfg);
    let k = pump_factor(cfg, 1);
    p.q + 2.0 * p.n1 * p.n_bar() * (2.0 + k.re)
}

/// `δn_p² = ⟨|α|⁴⟩ − n̄²`.
pub fn n_variance(cfg: &PumpConfig) -> f64 {
    let n = mean_excitation(cfg);
    fourth_moment(cfg) - n * n
}

/// `a = |w̄/(1 − w̄)|` at `2ν`: the slope of `A` in `λ₂` as `λ₂ → 0`.
pub fn fluorescence_coefficient(cfg: &PumpConfig) -> f64 {
    let w = spectral_at(cfg, 1);
    (w / (Complex64::new(1.0, 0.0) - w)).norm()
}

impl RecoilMomentSet {
    pub fn from_config(cfg: &PumpConfig) -> Self {
        let p = Parts::new(cfg);
        let k2 = pump_factor(cfg, 1);
        let k4 = pump_factor(cfg, 2);
        let n_bar = p.n_bar();
        let alpha4 = p.q + 2.0 * p.n1 * n_bar * (2.0 + k2.re);
        RecoilMomentSet {
            n_bar,
            alpha2: -k2 * n_bar,
            anisotropy: k2.norm(),
            phi_a: k2.arg(),
            alpha4,
            alpha4_complex: k4 * (k2 * (6.0 * p.n1 * n_bar) + p.q),
            dn_sq: alpha4 - n_bar * n_bar,
            final_share: p.a2,
        }
    }

    /// Moment set of a process that leaves no recoil.
    pub fn zero() -> Self {
        RecoilMomentSet {
            n_bar: 0.0,
            alpha2: Complex64::new(0.0, 0.0),
            anisotropy: 0.0,
            phi_a: 0.0,
            alpha4: 0.0,
            alpha4_complex: Complex64::new(0.0, 0.0),
            dn_sq: 0.0,
            final_share: 0.0,
        }
    }

    pub fn quadrature_variance(&self, phi: f64) -> f64 {
        self.n_bar * (1.0 - self.anisotropy * (2.0 * phi + self.phi_a).cos())
    }

    pub fn extremal(&self) -> ExtremalQuadratures {
        let phi_minus = -0.5 * self.phi_a;
        ExtremalQuadratures {
            phi_minus,
            phi_plus: phi_minus + core::f64::consts::FRAC_PI_2,
            var_minus: self.n_bar * (1.0 - self.anisotropy),
            var_plus: self.n_bar * (1.0 + self.anisotropy),
        }
    }
}

/// `A e^{iφ_A}` for resonant pumping as an explicit function of `S`:
///
/// ```text
/// A e^{iφ_A} = λ₂S / [(λ₂S − 3ν̃²) − iν̃(S + 2 − ν̃²)]
/// ```
pub fn resonant_pump_factor(lambda2: f64, nu_tilde: f64, saturation: f64) -> Complex64 {
    let v2 = nu_tilde * nu_tilde;
    let s = saturation;
    let den = Complex64::new(lambda2 * s - 3.0 * v2, -nu_tilde * (s + 2.0 - v2));
    Complex64::new(lambda2 * s, 0.0) / den
}

/// `(A, φ_A)` of the resonant closed form.
pub fn resonant_anisotropy(lambda2: f64, nu_tilde: f64, saturation: f64) -> (f64, f64) {
    let v2 = nu_tilde * nu_tilde;
    let s = saturation;
    let re = lambda2 * s - 3.0 * v2;
    let im = nu_tilde * (s + 2.0 - v2);
    let a = lambda2 * s / (re * re + im * im).sqrt();
    let phi = if s == 0.0 { 0.0 } else { im.atan2(re) };
    (a, phi)
}

/// `A(S → ∞) = λ₂ / √(λ₂² + ν̃²)`.
pub fn saturated_anisotropy(lambda2: f64, nu_tilde: f64) -> f64 {
    lambda2 / (lambda2 * lambda2 + nu_tilde * nu_tilde).sqrt()
}

/// `A(S)` has an interior maximum only for `λ₂ > (2 − ν̃²)/3`.
pub fn lambda2_threshold(nu_tilde: f64) -> f64 {
    (2.0 - nu_tilde * nu_tilde) / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SaturationOptimum {
    /// `A(S)` peaks at this finite saturation.
    Interior(f64),
    /// `A(S)` grows all the way to full saturation.
    SaturationLimited,
}

/// Location of the maximum of `A(S)`:
/// `S_max = (ν̃⁴ + 5ν̃² + 4)/(ν̃² + 3λ₂ − 2)`.
pub fn s_max(cfg: &PumpConfig) -> Result<SaturationOptimum, MomentError> {
    require_resonant(cfg)?;
    let v2 = cfg.nu_tilde() * cfg.nu_tilde();
    if cfg.lambda2() > lambda2_threshold(cfg.nu_tilde()) {
        let s = (v2 * v2 + 5.0 * v2 + 4.0) / (v2 + 3.0 * cfg.lambda2() - 2.0);
        Ok(SaturationOptimum::Interior(s))
    } else {
        Ok(SaturationOptimum::SaturationLimited)
    }
}

fn require_resonant(cfg: &PumpConfig) -> Result<(), MomentError> {
    if cfg.is_resonant() {
        Ok(())
    } else {
        Err(MomentError::NotResonant(cfg.detuning_scaled()))
    }
}

fn check_grid(grid: &[f64]) -> Result<(), MomentError> {
    if grid.is_empty() {
        return Err(MomentError::EmptyGrid);
    }
    match grid.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
        Some(s) => Err(MomentError::BadGridValue(*s)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropyPoint {
    pub saturation: f64,
    pub anisotropy: f64,
    pub phi_a: f64,
}

/// Resonant `A(S)`, `φ_A(S)` over a saturation grid.
pub fn anisotropy_vs_saturation(cfg: &PumpConfig, grid: &[f64]) -> Result<Vec<AnisotropyPoint>, MomentError> {
    require_resonant(cfg)?;
    check_grid(grid)?;
    Ok(grid
        .iter()
        .map(|&s| {
            let (a, phi) = resonant_anisotropy(cfg.lambda2(), cfg.nu_tilde(), s);
            AnisotropyPoint { saturation: s, anisotropy: a, phi_a: phi }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadScan {
    /// Grid saturation with the smallest objective.
    pub s_star: f64,
    /// `(S, ⟨Δn²(∞)⟩)` for every grid point.
    pub objective: Vec<(f64, f64)>,
}

/// Final vibrational number variance after pumping an atom that starts in
/// the electronic and vibrational ground state, `n̄_p + δn_p²`, scanned over
/// saturation. Only `A cos φ_A` depends on `S`.
pub fn optimize_n_spread(cfg: &PumpConfig, grid: &[f64]) -> Result<SpreadScan, MomentError> {
    check_grid(grid)?;
    let mut objective = Vec::with_capacity(grid.len());
    let mut best = (f64::INFINITY, grid[0]);
    for &s in grid {
        let c = cfg.with_saturation(s).map_err(|_| MomentError::BadGridValue(s))?;
        let v = mean_excitation(&c) + n_variance(&c);
        if v < best.0 {
            best = (v, s);
        }
        objective.push((s, v));
    }
    Ok(SpreadScan { s_star: best.1, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(l2: f64, s: f64) -> PumpConfig {
        PumpConfig::builder().lambda2(l2).eta(0.1, 0.075).nu_tilde(0.16).saturation(s).build().unwrap()
    }

    #[test]
    fn mean_excitation_values() {
        assert!((mean_excitation(&cfg(0.5, 25.0)) - 0.00625).abs() < 1e-15);
        let single = cfg(1.0, 25.0);
        assert!((mean_excitation(&single) - 0.4 * 0.075f64.powi(2)).abs() < 1e-16);
        let n = mean_excitation(&cfg(1e-5, 25.0));
        assert!((n / (0.4 * 0.01 / 1e-5) - 1.0).abs() < 1e-4);
        let base = mean_excitation(&cfg(0.3, 0.1));
        for s in [0.1, 1.0, 25.0] {
            for d in [0.0, 1.0] {
                let c = PumpConfig::builder()
                    .lambda2(0.3)
                    .eta(0.1, 0.075)
                    .nu_tilde(0.16)
                    .saturation(s)
                    .detuning_scaled(d)
                    .build()
                    .unwrap();
                assert_eq!(mean_excitation(&c).to_bits(), base.to_bits());
            }
        }
    }

    #[test]
    fn single_emission_limits() {
        let c = cfg(1.0, 25.0);
        let w = spectral_at(&c, 1);
        let (a, phi) = anisotropy(&c);
        assert!((a - w.norm()).abs() < 1e-14);
        assert!((phi - w.arg()).abs() < 1e-14);
        let q = 0.075f64.powi(4) * 9.0 / 35.0;
        assert!((fourth_moment(&c) - q).abs() < 1e-18);
        let c2 = 0.4 * 0.075f64.powi(2);
        assert!((n_variance(&c) - (q - c2 * c2)).abs() < 1e-18);
    }

    #[test]
    fn alpha2_identity() {
        for l2 in [1e-3, 0.1, 0.5, 1.0] {
            for s in [0.3, 1.0, 25.0] {
                let c = cfg(l2, s);
                let (a, phi) = anisotropy(&c);
                let expect = -Complex64::from_polar(a, phi) * mean_excitation(&c);
                assert!((alpha2_moment(&c) - expect).norm() < 1e-12 * mean_excitation(&c));
                assert_eq!(even_moment(&c, 1).unwrap(), alpha2_moment(&c));
            }
        }
        assert_eq!(even_moment(&cfg(0.5, 1.0), 3), Err(MomentError::UnsupportedOrder(3)));
    }

    #[test]
    fn saturated_and_resonant_routes() {
        let (a, _) = anisotropy(&cfg(0.25, 1e6));
        assert!((a - saturated_anisotropy(0.25, 0.16)).abs() < 1e-5);
        assert!((saturated_anisotropy(0.25, 0.16) - 0.8423).abs() < 1e-4);
        for l2 in [0.05, 0.25, 0.8, 1.0] {
            for s in [0.0, 0.01, 0.5, 1.0, 7.0, 25.0, 300.0] {
                let general = pump_factor(&cfg(l2, s), 1);
                let closed = resonant_pump_factor(l2, 0.16, s);
                assert!((general - closed).norm() < 1e-12, "{l2} {s}");
            }
        }
    }

    #[test]
    fn s_max_values() {
        assert!((lambda2_threshold(0.16) - 0.6581).abs() < 1e-4);
        match s_max(&cfg(0.8, 1.0)).unwrap() {
            SaturationOptimum::Interior(s) => assert!((s - 9.70).abs() < 0.01),
            other => panic!("{other:?}"),
        }
        assert_eq!(s_max(&cfg(0.25, 1.0)).unwrap(), SaturationOptimum::SaturationLimited);
        let detuned = PumpConfig::builder()
            .lambda2(0.5)
            .eta(0.1, 0.1)
            .nu_tilde(0.16)
            .saturation(1.0)
            .detuning_scaled(0.5)
            .build()
            .unwrap();
        assert!(matches!(s_max(&detuned), Err(MomentError::NotResonant(_))));
    }

    #[test]
    fn extremal_quadratures_consistent() {
        let c = cfg(0.5, 25.0);
        let e = extremal_quadratures(&c);
        let (a, _) = anisotropy(&c);
        assert!((quadrature_variance(&c, e.phi_minus) - e.var_minus).abs() < 1e-16);
        assert!((quadrature_variance(&c, e.phi_plus) - e.var_plus).abs() < 1e-16);
        assert!(((e.var_plus - e.var_minus) / (e.var_plus + e.var_minus) - a).abs() < 1e-12);
        let n = mean_excitation(&c);
        assert!(((e.var_plus * e.var_minus).sqrt() - n * (1.0 - a * a).sqrt()).abs() < 1e-15);
        for i in 0..100 {
            let phi = i as f64 * 0.0314;
            let v = quadrature_variance(&c, phi);
            assert!(v >= e.var_minus - 1e-16 && v <= e.var_plus + 1e-16);
        }
    }

    #[test]
    fn fluorescence_variance_ratio() {
        // Geometric compound of isotropic kicks: |α|² is exponential given the
        // count, the count is exponential, so ⟨|α|⁴⟩ → 4 n̄².
        let c = cfg(1e-5, 25.0);
        let r = n_variance(&c).sqrt() / mean_excitation(&c);
        assert!((r - 3f64.sqrt()).abs() < 1e-2, "{r}");
    }

    #[test]
    fn spread_scan() {
        let grid: Vec<f64> = (0..=200).map(|i| 0.01 * i as f64).collect();
        let scan = optimize_n_spread(&cfg(0.25, 1.0), &grid).unwrap();
        let min = scan.objective.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        assert_eq!(scan.objective.iter().find(|p| p.1 == min).unwrap().0, scan.s_star);
        assert_eq!(optimize_n_spread(&cfg(0.25, 1.0), &[]), Err(MomentError::EmptyGrid));
    }
}
