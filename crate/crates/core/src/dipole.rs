//! Dipole radiation characteristic projected on the motional axis.
//!
//! For a transition dipole at angle `θ_a` to the axis, the direction cosine
//! `s` of a spontaneously emitted photon has density
//!
//! ```text
//! μ(s) = 3/8 [1 + cos²θ_a + s² (1 − 3 cos²θ_a)],   s ∈ [−1, 1]
//! ```
//!
//! The azimuth is already integrated out.

#[allow(unused_imports)] // float math under no_std
use num_traits::Float;
use rand_core::RngCore;

use crate::rng;
use crate::DomainError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleCharacteristic {
    cos_theta: f64,
}

impl DipoleCharacteristic {
    /// Dipole at angle `theta` (radians) to the motional axis.
    pub fn from_angle(theta: f64) -> Self {
        Self::from_cos(theta.cos())
    }

    pub fn from_cos(cos_theta: f64) -> Self {
        DipoleCharacteristic { cos_theta: cos_theta.clamp(-1.0, 1.0) }
    }

    /// Dipole orthogonal to the motional axis, `μ(s) = 3/8 (1 + s²)`.
    pub fn perpendicular() -> Self {
        DipoleCharacteristic { cos_theta: 0.0 }
    }

    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    #[inline]
    fn coeffs(&self) -> (f64, f64) {
        let c2 = self.cos_theta * self.cos_theta;
        (0.375 * (1.0 + c2), 0.375 * (1.0 - 3.0 * c2))
    }

    #[inline]
    fn eval(&self, s: f64) -> f64 {
        let (a, b) = self.coeffs();
        a + b * s * s
    }

    pub fn density(&self, s: f64) -> Result<f64, DomainError> {
        if !(-1.0..=1.0).contains(&s) {
            return Err(DomainError { what: "s", value: s, domain: "[-1, 1]" });
        }
        Ok(self.eval(s))
    }

    /// `max_s μ(s)`, attained at `s = 0` or `s = ±1`.
    pub fn max_density(&self) -> f64 {
        let (a, b) = self.coeffs();
        a + b.max(0.0)
    }

    /// Acceptance probability of the uniform-envelope rejection sampler.
    pub fn acceptance(&self) -> f64 {
        0.5 / self.max_density()
    }

    /// `⟨s^k⟩ = ∫ s^k μ(s) ds`, exact. Odd orders vanish by symmetry.
    pub fn moment(&self, k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        let (a, b) = self.coeffs();
        let k = k as f64;
        2.0 * a / (k + 1.0) + 2.0 * b / (k + 3.0)
    }

    /// Draw a direction cosine with density `μ`.
    ///
    /// Rejection against the uniform density on `[−1, 1]`. `μ(±1) = 0` for an
    /// axial dipole, so those end points are never returned in that case.
    #[inline]
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let (a, b) = self.coeffs();
        let max = a + b.max(0.0);
        loop {
            let s = rng::uniform_sym(rng);
            let y = rng::uniform(rng) * max;
            if y < a + b * s * s {
                return s;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    /// 5-point Gauss–Legendre on `[−1, 1]`, exact up to degree 9.
    fn quad(f: impl Fn(f64) -> f64) -> f64 {
        const X: [f64; 5] =
            [0.0, 0.538_469_310_105_683_1, -0.538_469_310_105_683_1, 0.906_179_845_938_664, -0.906_179_845_938_664];
        const W: [f64; 5] = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
            0.236_926_885_056_189_1,
        ];
        X.iter().zip(W).map(|(x, w)| w * f(*x)).sum()
    }

    #[test]
    fn perpendicular_values() {
        let d = DipoleCharacteristic::from_angle(FRAC_PI_2);
        assert!((d.density(0.0).unwrap() - 0.375).abs() < 1e-15);
        assert!((d.density(1.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((d.acceptance() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn axial_vanishes_at_ends() {
        let d = DipoleCharacteristic::from_angle(0.0);
        assert_eq!(d.density(1.0).unwrap(), 0.0);
        assert_eq!(d.density(-1.0).unwrap(), 0.0);
    }

    #[test]
    fn out_of_domain() {
        let d = DipoleCharacteristic::perpendicular();
        assert!(d.density(1.0 + 1e-12).is_err());
        assert!(d.density(f64::NAN).is_err());
    }

    #[test]
    fn moments_against_quadrature() {
        // Oracle values: ∫ s^k (3/8)(1+s²) ds for k = 0, 2, 4.
        let d = DipoleCharacteristic::perpendicular();
        assert!((d.moment(0) - 1.0).abs() < 1e-15);
        assert!((d.moment(2) - 0.4).abs() < 1e-15);
        assert!((d.moment(4) - 9.0 / 35.0).abs() < 1e-15);
        assert_eq!(d.moment(3), 0.0);
        for i in 0..20 {
            let theta = PI * i as f64 / 19.0;
            let d = DipoleCharacteristic::from_angle(theta);
            let c2 = d.cos_theta().powi(2);
            for k in [0u32, 2, 4, 6] {
                let q = quad(|s| s.powi(k as i32) * d.eval(s));
                assert!((d.moment(k) - q).abs() <= 1e-12 * q.abs().max(1e-300), "k={k} θ={theta}");
            }
            assert!((d.moment(2) - (2.0 - c2) / 5.0).abs() < 1e-15);
            assert!(d.density(0.3).unwrap() == d.density(-0.3).unwrap());
        }
    }

    #[test]
    fn sample_second_moment() {
        let d = DipoleCharacteristic::perpendicular();
        let mut rng = crate::rng::trajectory_rng(11, 0);
        let n = 200_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n {
            let s = d.sample(&mut rng);
            m1 += s;
            m2 += s * s;
        }
        let n = n as f64;
        assert!((m1 / n).abs() < 3.0 * (0.4f64 / n).sqrt());
        let se = ((d.moment(4) - 0.16) / n).sqrt();
        assert!((m2 / n - 0.4).abs() < 4.0 * se);
    }
}
