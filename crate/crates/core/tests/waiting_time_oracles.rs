mod common;

use common::{integrate, ks_pvalue, ks_statistic};
use pumprecoil_core::rng::trajectory_rng;
use pumprecoil_core::waiting_time::{self, resonant};
use pumprecoil_core::{Complex64, WaitingTimeModel};

// With γ = 1 the trap frequency 2ν equals ν̃.

/// Time after which the survival is far below double precision.
fn horizon(m: &WaitingTimeModel) -> f64 {
    let (a, b) = m.eigenvalues();
    let slowest = -(a.re.max(b.re));
    45.0 / slowest
}

/// Plain RK4 on the driven two-amplitude system, returning `w(t)` on a grid.
fn ode_density(s: f64, delta: f64, gamma: f64, t_end: f64, steps: usize) -> Vec<(f64, f64)> {
    let k = 0.5 * s.sqrt() * gamma;
    let i = Complex64::new(0.0, 1.0);
    let f = |p1: Complex64, p3: Complex64| (-i * delta * gamma * p1 - i * k * p3, -i * k * p1 - p3 * gamma);
    let h = t_end / steps as f64;
    let (mut p1, mut p3) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    let mut out = vec![(0.0, 0.0)];
    for n in 0..steps {
        let (a1, a3) = f(p1, p3);
        let (b1, b3) = f(p1 + a1 * (h / 2.0), p3 + a3 * (h / 2.0));
        let (c1, c3) = f(p1 + b1 * (h / 2.0), p3 + b3 * (h / 2.0));
        let (d1, d3) = f(p1 + c1 * h, p3 + c3 * h);
        p1 += (a1 + b1 * 2.0 + c1 * 2.0 + d1) * (h / 6.0);
        p3 += (a3 + b3 * 2.0 + c3 * 2.0 + d3) * (h / 6.0);
        out.push(((n + 1) as f64 * h, 2.0 * gamma * p3.norm_sqr()));
    }
    out
}

#[test]
fn resonant_closed_form_is_normalized() {
    for s in [0.05, 0.5, 1.0, 1.0 + 1e-7, 4.0, 25.0, 400.0] {
        let m = WaitingTimeModel::new(s, 0.0, 1.0);
        let t = horizon(&m);
        let total: f64 = integrate(|t| resonant::density(s, 1.0, t), 0.0, t, 4000);
        assert!((total - 1.0).abs() < 1e-9, "S = {s}: {total}");
    }
}

#[test]
fn detuned_density_matches_ode_and_normalizes() {
    for (s, d) in [(1.0, 1.0), (25.0, 1.0), (0.3, 2.5), (4.0, -0.7)] {
        let m = WaitingTimeModel::new(s, d, 1.0);
        let t = horizon(&m);
        let total: f64 = integrate(|x| m.density(x).unwrap(), 0.0, t, 4000);
        assert!((total - 1.0).abs() < 1e-6, "S = {s}, Δ = {d}: {total}");
        let t_ode = t.min(60.0);
        for (x, w) in ode_density(s, d, 1.0, t_ode, 60_000).into_iter().step_by(997) {
            let ours = m.density(x).unwrap();
            assert!((ours - w).abs() < 1e-6, "S = {s}, Δ = {d}, t = {x}: {ours} vs {w}");
        }
    }
}

#[test]
fn spectral_matches_fourier_quadrature() {
    let nu = 0.16;
    for (s, d) in [(1.0, 0.0), (25.0, 0.0), (0.2, 0.0), (1.0, 1.0), (9.0, -2.0)] {
        let m = WaitingTimeModel::new(s, d, 1.0);
        let t = horizon(&m);
        for omega in [0.0, 2.0 * nu, 4.0 * nu, 3.0] {
            let num: Complex64 = integrate(|x| Complex64::from_polar(m.density(x).unwrap(), omega * x), 0.0, t, 6000);
            let ana = waiting_time::spectral(s, d, 1.0, omega);
            assert!((num - ana).norm() < 1e-8, "S = {s}, Δ = {d}, ω = {omega}: {num} vs {ana}");
            if d == 0.0 {
                assert!((resonant::spectral(s, 1.0, omega) - ana).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn modulus_identity_on_grid() {
    for i in 0..=40 {
        let s = 10f64.powf(-3.0 + 0.15 * i as f64);
        for j in 1..=20 {
            let v = 0.05 * j as f64;
            let a = resonant::modulus(s, v);
            let b = resonant::modulus_expanded(s, v);
            let c = resonant::spectral(s, 1.0, v).norm();
            assert!((a - b).abs() <= 1e-12, "S = {s}, ν̃ = {v}: {a} vs {b}");
            assert!((a - c).abs() <= 1e-12, "S = {s}, ν̃ = {v}");
        }
    }
}

#[test]
fn phase_tangent_matches_spectral_argument() {
    for (s, v) in [(1.0, 0.16), (25.0, 0.16), (0.5, 0.3), (100.0, 0.9)] {
        let w = resonant::spectral(s, 1.0, v);
        let tan = w.im / w.re;
        let closed = resonant::phase_tan(s, v);
        assert!((tan - closed).abs() < 1e-10 * tan.abs().max(1.0), "S = {s}, ν̃ = {v}: {tan} vs {closed}");
    }
}

#[test]
fn sampler_passes_ks() {
    for (k, (s, d)) in [(25.0, 0.0), (0.5, 0.0), (1.0, 0.0), (4.0, 1.0)].into_iter().enumerate() {
        let m = WaitingTimeModel::new(s, d, 1.0);
        let mut rng = trajectory_rng(20_240_611, k as u64);
        let mut xs: Vec<f64> = (0..100_000).map(|_| m.sample(&mut rng)).collect();
        let dist = ks_statistic(&mut xs, |t| m.cdf(t).unwrap());
        let p = ks_pvalue(dist, xs.len());
        assert!(p > 0.01, "S = {s}, Δ = {d}: D = {dist}, p = {p}");
    }
}

#[test]
fn undriven_atom_never_emits() {
    let m = WaitingTimeModel::new(0.0, 0.0, 1.0);
    let mut rng = trajectory_rng(1, 0);
    assert_eq!(m.sample(&mut rng), f64::INFINITY);
    assert_eq!(waiting_time::spectral(0.0, 0.0, 1.0, 0.0), Complex64::new(1.0, 0.0));
    assert_eq!(waiting_time::spectral(0.0, 0.0, 1.0, 0.3), Complex64::new(0.0, 0.0));
}
