//! Waiting-time distribution between successive spontaneous emissions.
//!
//! Right after an emission the atom sits in the recycled level `|1⟩`. Until the
//! next emission the driven pair `|1⟩, |3⟩` evolves under the non-Hermitian
//! effective Hamiltonian
//!
//! ```text
//! ψ̇₁ = −iΔ ψ₁ − i(κ*/2) ψ₃
//! ψ̇₃ = −i(κ/2) ψ₁ − γ ψ₃
//! ```
//!
//! with `|κ|² = S γ²`. The norm `|ψ₁|² + |ψ₃|²` is the probability that no
//! emission has happened yet and the density of the next emission is
//! `w(t) = 2γ|ψ₃(t)|²`.
//!
//! The matrix exponential is written as `e^{mt}[cosh(dt) + sinh(dt)/d (M − m)]`
//! with `m` the mean eigenvalue and `d² = ((γ − iΔ)/2)² − κ²/4`. Only `d²`
//! enters, so the degenerate point `d = 0` (resonant `S = 1`) needs nothing
//! more than a short series for `sinh(z)/z`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // float math under no_std
use num_traits::Float;
use rand_core::RngCore;

use crate::config::PumpConfig;
use crate::linalg;
use crate::rng;
use crate::DomainError;

/// Qualitative shape of the resonant waiting-time distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `S < 1`: real eigenvalues, no Rabi oscillation.
    Overdamped,
    /// `S = 1`: `w(t) = (γ³t²/2) e^{−γt}`.
    Critical,
    /// `S > 1`: damped Rabi cycles.
    Underdamped,
    Detuned,
}

/// Survival fraction below which the table stops; smaller than any `(0, 1]`
/// draw with 53 bits.
const TAIL: f64 = 1e-17;
const SERIES_CUTOFF: f64 = 1e-3;
const MIN_CELLS: usize = 4096;
const MAX_CELLS: usize = 1 << 20;
const CELLS_PER_PERIOD: f64 = 64.0;

#[derive(Debug, Clone)]
pub struct WaitingTimeModel {
    saturation: f64,
    detuning_scaled: f64,
    gamma: f64,
    kappa: f64,
    m: Complex64,
    d: Complex64,
    d2: Complex64,
    inv_d: Complex64,
    c1: Complex64,
    /// `γ + 2|Im d|`, fastest time scale of `w`.
    rate: f64,
    regime: Regime,
    table: Option<Table>,
}

/// Survival function and density on a uniform grid, with a guide index over
/// the survival value for O(1) cell lookup.
#[derive(Debug, Clone)]
struct Table {
    h: f64,
    surv: Vec<f64>,
    dens: Vec<f64>,
    guide: Vec<u32>,
}

impl WaitingTimeModel {
    /// `saturation` is `S`, `detuning_scaled` is `Δ/γ`.
    pub fn new(saturation: f64, detuning_scaled: f64, gamma: f64) -> Self {
        assert!(saturation >= 0.0 && saturation.is_finite(), "saturation must be finite and >= 0");
        assert!(detuning_scaled.is_finite(), "detuning must be finite");
        assert!(gamma > 0.0 && gamma.is_finite(), "gamma must be finite and > 0");
        let kappa = saturation.sqrt() * gamma;
        let delta = detuning_scaled * gamma;
        let half = Complex64::new(gamma, -delta) * 0.5;
        let d2 = half * half - kappa * kappa * 0.25;
        let d = d2.sqrt();
        let regime = if detuning_scaled != 0.0 {
            Regime::Detuned
        } else if saturation < 1.0 {
            Regime::Overdamped
        } else if saturation == 1.0 {
            Regime::Critical
        } else {
            Regime::Underdamped
        };
        let mut model = WaitingTimeModel {
            saturation,
            detuning_scaled,
            gamma,
            kappa,
            m: Complex64::new(-gamma, -delta) * 0.5,
            d,
            d2,
            inv_d: if d2 == Complex64::new(0.0, 0.0) { Complex64::new(0.0, 0.0) } else { d.inv() },
            c1: half,
            rate: gamma + 2.0 * d.im.abs(),
            regime,
            table: None,
        };
        if saturation > 0.0 {
            model.table = Some(model.build_table());
        }
        model
    }

    pub fn from_config(cfg: &PumpConfig) -> Self {
        Self::new(cfg.saturation(), cfg.detuning_scaled(), cfg.gamma())
    }

    pub fn saturation(&self) -> f64 {
        self.saturation
    }

    pub fn detuning_scaled(&self) -> f64 {
        self.detuning_scaled
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Eigenvalues `λ± = m ± d` of the effective evolution; `Re λ₊ ≥ Re λ₋`.
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        (self.m + self.d, self.m - self.d)
    }

    /// `(ψ₁(t), ψ₃(t))` starting from `ψ₁(0) = 1`.
    pub fn amplitudes(&self, t: f64) -> (Complex64, Complex64) {
        let (p1, p3) = self.amplitudes_rotated(t);
        let ph = Complex64::from_polar(1.0, self.m.im * t);
        (p1 * ph, p3 * ph)
    }

    /// Amplitudes without the common phase `e^{i Im(m) t}`, which drops out of
    /// every quantity built from `|ψ₁|²` and `|ψ₃|²`.
    #[inline]
    fn amplitudes_rotated(&self, t: f64) -> (Complex64, Complex64) {
        let z = self.d * t;
        let (ch, sh) = if z.norm_sqr() < SERIES_CUTOFF * SERIES_CUTOFF {
            let z2 = self.d2 * (t * t);
            let em = (self.m.re * t).exp();
            let one = Complex64::new(1.0, 0.0);
            let ch = one + z2 * (0.5 + z2 * (1.0 / 24.0 + z2 * (1.0 / 720.0)));
            let sh = one + z2 * (1.0 / 6.0 + z2 * (1.0 / 120.0 + z2 * (1.0 / 5040.0)));
            (ch * em, sh * (em * t))
        } else {
            // e^{Re(m)t} folded into e^{±dt} so nothing overflows
            let a = ((self.m.re + self.d.re) * t).exp();
            let b = if self.d.re == 0.0 { a } else { ((self.m.re - self.d.re) * t).exp() };
            let (sn, cs) = if self.d.im == 0.0 { (0.0, 1.0) } else { z.im.sin_cos() };
            let ch = Complex64::new(0.5 * (a + b) * cs, 0.5 * (a - b) * sn);
            let sh = Complex64::new(0.5 * (a - b) * cs, 0.5 * (a + b) * sn) * self.inv_d;
            (ch, sh)
        };
        let psi1 = ch + self.c1 * sh;
        let psi3 = Complex64::new(0.0, -0.5 * self.kappa) * sh;
        (psi1, psi3)
    }

    /// `(survival, density)` without domain checks.
    #[inline]
    fn eval(&self, t: f64) -> (f64, f64) {
        let (p1, p3) = self.amplitudes_rotated(t);
        let n3 = p3.norm_sqr();
        (p1.norm_sqr() + n3, 2.0 * self.gamma * n3)
    }

    /// `(survival, density, d density/dt)`.
    #[inline]
    fn eval2(&self, t: f64) -> (f64, f64, f64) {
        let (p1, p3) = self.amplitudes_rotated(t);
        let n3 = p3.norm_sqr();
        let dp3 = Complex64::new(0.0, -0.5 * self.kappa) * p1 - p3 * self.gamma;
        let dw = 4.0 * self.gamma * (p3.conj() * dp3).re;
        (p1.norm_sqr() + n3, 2.0 * self.gamma * n3, dw)
    }

    fn check_t(t: f64) -> Result<(), DomainError> {
        if t >= 0.0 {
            Ok(())
        } else {
            Err(DomainError { what: "t", value: t, domain: "[0, inf)" })
        }
    }

    /// `w(t)`.
    pub fn density(&self, t: f64) -> Result<f64, DomainError> {
        Self::check_t(t)?;
        if t.is_infinite() {
            return Ok(0.0);
        }
        Ok(self.eval(t).1)
    }

    /// Probability that no emission occurred within `t`.
    pub fn survival(&self, t: f64) -> Result<f64, DomainError> {
        Self::check_t(t)?;
        if t.is_infinite() {
            return Ok(if self.saturation > 0.0 { 0.0 } else { 1.0 });
        }
        Ok(self.eval(t).0.min(1.0))
    }

    pub fn cdf(&self, t: f64) -> Result<f64, DomainError> {
        Ok(1.0 - self.survival(t)?)
    }

    /// `w̄(ω) = ∫₀^∞ w(t) e^{iωt} dt`.
    pub fn spectral(&self, omega: f64) -> Complex64 {
        spectral(self.saturation, self.detuning_scaled, self.gamma, omega)
    }

    /// Draw a waiting time by inverting the survival function.
    ///
    /// The tabulated survival gives the bracketing cell and a cubic Hermite
    /// starting point; safeguarded Newton steps on the exact survival finish
    /// to ~1e-10 relative. Returns `+∞` when `S = 0`.
    #[inline]
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.table {
            Some(tab) => self.invert(tab, rng::uniform_pos(rng)),
            None => f64::INFINITY,
        }
    }

    /// Time `t` with `survival(t) = u`, for `u ∈ (0, 1]`.
    pub fn quantile_survival(&self, u: f64) -> f64 {
        assert!(u > 0.0 && u <= 1.0, "survival level must lie in (0, 1]");
        match &self.table {
            Some(tab) => self.invert(tab, u),
            None => f64::INFINITY,
        }
    }

    fn invert(&self, tab: &Table, u: f64) -> f64 {
        let n = tab.surv.len() - 1;
        let g = tab.guide.len() - 1;
        let j = ((u * g as f64) as usize).min(g - 1);
        // max k with surv[k] >= u lies in [guide[j+1], guide[j]]
        let (mut lo, mut hi) = (tab.guide[j + 1] as usize, tab.guide[j] as usize);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if tab.surv[mid] >= u {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let k = lo;
        if k >= n {
            return self.invert_tail(tab.h * n as f64, u);
        }
        let (s0, s1) = (tab.surv[k], tab.surv[k + 1]);
        let (w0, w1) = (tab.dens[k], tab.dens[k + 1]);
        let drop = s0 - s1;
        let y = if drop > 0.0 { (s0 - u) / drop } else { 0.5 };
        // Cubic Hermite for the inverse t(s) over the cell; slopes −1/w blow up
        // where w vanishes, so fall back to linear there.
        let slope = drop / tab.h;
        let x = if w0 > 0.1 * slope && w1 > 0.1 * slope {
            let (m0, m1) = (slope / w0, slope / w1);
            let y2 = y * y;
            let y3 = y2 * y;
            ((y3 - 2.0 * y2 + y) * m0 + (-2.0 * y3 + 3.0 * y2) + (y3 - y2) * m1).clamp(0.0, 1.0)
        } else {
            y
        };
        let a = tab.h * k as f64;
        self.newton(a, a + tab.h, a + x * tab.h, u)
    }

    /// Safeguarded Halley iteration on `survival(t) − u` inside `[a, b]`.
    fn newton(&self, mut a: f64, mut b: f64, mut t: f64, u: f64) -> f64 {
        for _ in 0..60 {
            let (s, w, dw) = self.eval2(t);
            let f = s - u;
            if f == 0.0 {
                break;
            }
            if f > 0.0 {
                a = t;
            } else {
                b = t;
            }
            // f' = −w, f'' = −w'
            let den = 2.0 * w * w + f * dw;
            let next = if w > 0.0 && den > 0.0 { t + 2.0 * f * w / den } else { f64::NAN };
            if next >= a && next <= b {
                let step = next - t;
                t = next;
                // Halley error after the step is ~ c·step³ with c set by the
                // fastest local rate of change.
                let rate = dw.abs() / w + self.rate;
                let rest = rate * rate * step.abs().powi(3);
                if rest <= 1e-12 * t || step.abs() <= 1e-14 * t {
                    break;
                }
            } else {
                t = 0.5 * (a + b);
                if b - a <= 1e-15 * b {
                    break;
                }
            }
        }
        t
    }

    /// Beyond the table: exponential-tail steps from `t0`, then Newton.
    fn invert_tail(&self, t0: f64, u: f64) -> f64 {
        let (mut a, mut b) = (t0, t0);
        let mut step = t0.max(1.0 / self.gamma);
        loop {
            b += step;
            if self.eval(b).0 < u || !b.is_finite() {
                break;
            }
            a = b;
            step *= 2.0;
        }
        self.newton(a, b, 0.5 * (a + b), u)
    }

    fn build_table(&self) -> Table {
        let (lp, _) = self.eigenvalues();
        let rate = -2.0 * lp.re;
        let mut t_max = ((1.0 / TAIL).ln() / rate).max(10.0 / self.gamma);
        while self.eval(t_max).0 > TAIL {
            t_max *= 1.5;
        }
        let omega_osc = 2.0 * self.d.im.abs();
        let fast = self.gamma.max(omega_osc);
        let want = (t_max * fast * CELLS_PER_PERIOD / (2.0 * core::f64::consts::PI)).ceil();
        let n = (want as usize).clamp(MIN_CELLS, MAX_CELLS);
        let h = t_max / n as f64;
        let mut surv = Vec::with_capacity(n + 1);
        let mut dens = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let (s, w) = self.eval(h * k as f64);
            surv.push(s.min(1.0));
            dens.push(w);
        }
        surv[0] = 1.0;
        // Rounding can make the survival wiggle by an ulp; the search needs it
        // non-increasing.
        for k in 1..=n {
            if surv[k] > surv[k - 1] {
                surv[k] = surv[k - 1];
            }
        }
        let g = n;
        let mut guide = Vec::with_capacity(g + 1);
        let mut k = n;
        for j in 0..=g {
            let level = j as f64 / g as f64;
            while k > 0 && surv[k] < level {
                k -= 1;
            }
            guide.push(k as u32);
        }
        Table { h, surv, dens, guide }
    }
}

/// `w̄(ω) = ∫₀^∞ w(t) e^{iωt} dt` without building a sampler.
///
/// `∫ e^{iωt} ψψ† dt` solves `M X + X M† + iω X = −ψ(0)ψ(0)†`; the wanted
/// value is `2γ X₃₃`. Without drive (`S = 0`) no emission happens at all and
/// the limit `S → 0⁺` is returned: 1 at `ω = 0`, otherwise 0.
pub fn spectral(saturation: f64, detuning_scaled: f64, gamma: f64, omega: f64) -> Complex64 {
    if saturation == 0.0 {
        let v = if omega == 0.0 { 1.0 } else { 0.0 };
        return Complex64::new(v, 0.0);
    }
    let zero = Complex64::new(0.0, 0.0);
    let ik = Complex64::new(0.0, -0.5 * saturation.sqrt() * gamma);
    let mm = [[Complex64::new(0.0, -detuning_scaled * gamma), ik], [ik, Complex64::new(-gamma, 0.0)]];
    let iw = Complex64::new(0.0, omega);
    let mut a = [[zero; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let r = 2 * i + j;
            a[r][r] += iw;
            for k in 0..2 {
                a[r][2 * k + j] += mm[i][k];
                a[r][2 * i + k] += mm[j][k].conj();
            }
        }
    }
    let b = [Complex64::new(-1.0, 0.0), zero, zero, zero];
    let x = linalg::solve(a, b).expect("Sylvester system of a dissipative generator is regular");
    x[3] * (2.0 * gamma)
}

/// Resonant closed forms, used as cross-checks of the general path.
pub mod resonant {
    use num_complex::Complex64;
    #[allow(unused_imports)] // float math under no_std
    use num_traits::Float;

    /// `w(t) = (2γS/|1−S|) |sinh(γt√(1−S)/2)|² e^{−γt}`, with the `S = 1`
    /// limit `(γ³t²/2) e^{−γt}`.
    pub fn density(saturation: f64, gamma: f64, t: f64) -> f64 {
        let s = saturation;
        let x = 0.5 * gamma * t;
        let e = (-gamma * t).exp();
        if s == 1.0 {
            return 0.5 * gamma.powi(3) * t * t * e;
        }
        let q = 1.0 - s;
        let sh2e = if q > 0.0 {
            // sinh(y)² e^{−2x} without overflow for long times
            let y = x * q.sqrt();
            if y > 1.0 {
                (0.5 * ((y - x).exp() - (-y - x).exp())).powi(2)
            } else {
                y.sinh().powi(2) * e
            }
        } else {
            (x * (-q).sqrt()).sin().powi(2) * e
        };
        2.0 * gamma * s / q.abs() * sh2e
    }

    /// `w̄(ω) = γ³S / (z (z² + γ²(S − 1)))` with `z = γ − iω`.
    pub fn spectral(saturation: f64, gamma: f64, omega: f64) -> Complex64 {
        let z = Complex64::new(gamma, -omega);
        let g2 = gamma * gamma;
        Complex64::new(g2 * gamma * saturation, 0.0) / (z * (z * z + g2 * (saturation - 1.0)))
    }

    /// `|w̄(2ν)| = S / √((1+ν̃²)[(S−ν̃²)² + 4ν̃²])`.
    pub fn modulus(saturation: f64, nu_tilde: f64) -> f64 {
        let (s, v2) = (saturation, nu_tilde * nu_tilde);
        s / ((1.0 + v2) * ((s - v2).powi(2) + 4.0 * v2)).sqrt()
    }

    /// Same modulus, denominator expanded around `S = 1`.
    pub fn modulus_expanded(saturation: f64, nu_tilde: f64) -> f64 {
        let (s, v2) = (saturation, nu_tilde * nu_tilde);
        let q = s - 1.0;
        s / ((1.0 + v2) * (q * q + 2.0 * q * (1.0 - v2) + (1.0 + v2).powi(2))).sqrt()
    }

    /// `tan φ_w = ν̃(S + 2 − ν̃²)/(S − 3ν̃²)`; the quadrant is lost.
    pub fn phase_tan(saturation: f64, nu_tilde: f64) -> f64 {
        let (s, v) = (saturation, nu_tilde);
        v * (s + 2.0 - v * v) / (s - 3.0 * v * v)
    }

    /// `S → ∞` limit of `|w̄(2ν)|`.
    pub fn saturated_modulus(nu_tilde: f64) -> f64 {
        1.0 / (1.0 + nu_tilde * nu_tilde).sqrt()
    }
}
