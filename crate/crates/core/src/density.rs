//! Histogram and moment estimators built from trajectory samples.
//!
//! The 2D density uses the axes `(Re α/η₁, Im α/η₁)`. Quadratures are
//! `q(φ) = √2 Re(α e^{iφ})`, in the same units as `α`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
#[allow(unused_imports)] // float math under no_std
use num_traits::Float;

use crate::stats::RunningStat;
use crate::trajectory::{Estimate, RecoilAccumulator, RecoilShiftSample, SampleSink};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DensityError {
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("invalid binning: {0}")]
    BadBinning(&'static str),
}

/// Default grid of the 2D density and bin count of quadrature histograms.
pub const DEFAULT_BINS: usize = 200;

/// Uniform binning of `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self, DensityError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(DensityError::BadBinning("axis needs finite lo < hi"));
        }
        if bins == 0 {
            return Err(DensityError::BadBinning("axis needs at least one bin"));
        }
        Ok(Axis { lo, hi, bins })
    }

    /// `[−half, half)`.
    pub fn symmetric(half: f64, bins: usize) -> Result<Self, DensityError> {
        Self::new(-half, half, bins)
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.width()
    }

    #[inline]
    pub fn index(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x < self.hi) {
            return None;
        }
        let i = ((x - self.lo) / (self.hi - self.lo) * self.bins as f64) as usize;
        Some(i.min(self.bins - 1))
    }
}

/// Binned `p(α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceHistogram {
    eta1: f64,
    x: Axis,
    p: Axis,
    /// Row-major, `x` fastest.
    counts: Vec<u64>,
    total: u64,
    out_of_range: u64,
}

impl PhaseSpaceHistogram {
    /// Axes in units of `η₁`; `eta1` converts samples to those units.
    pub fn new(eta1: f64, x: Axis, p: Axis) -> Result<Self, DensityError> {
        if !(eta1 > 0.0 && eta1.is_finite()) {
            return Err(DensityError::BadBinning("axis scale eta1 must be positive"));
        }
        Ok(PhaseSpaceHistogram { eta1, x, p, counts: vec![0; x.bins * p.bins], total: 0, out_of_range: 0 })
    }

    pub fn x_axis(&self) -> Axis {
        self.x
    }

    pub fn p_axis(&self) -> Axis {
        self.p
    }

    #[inline]
    pub fn add(&mut self, alpha: Complex64) {
        self.total += 1;
        let (xs, ps) = (alpha.re / self.eta1, alpha.im / self.eta1);
        match (self.x.index(xs), self.p.index(ps)) {
            (Some(i), Some(j)) => self.counts[j * self.x.bins + i] += 1,
            _ => self.out_of_range += 1,
        }
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[j * self.x.bins + i]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn out_of_range(&self) -> u64 {
        self.out_of_range
    }

    pub fn in_range(&self) -> u64 {
        self.total - self.out_of_range
    }

    /// Probability density per unit area of the scaled axes, normalized by
    /// all samples (out-of-range ones included).
    pub fn density(&self, i: usize, j: usize) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(i, j) as f64 / (self.total as f64 * self.x.width() * self.p.width())
    }

    /// `(x, p, density)` for every cell, `x` fastest.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.p.bins)
            .flat_map(move |j| (0..self.x.bins).map(move |i| (self.x.center(i), self.p.center(j), self.density(i, j))))
    }

    /// Fraction of in-range samples per `x` column.
    pub fn marginal_x(&self) -> Vec<f64> {
        let n = self.in_range().max(1) as f64;
        (0..self.x.bins).map(|i| (0..self.p.bins).map(|j| self.count(i, j)).sum::<u64>() as f64 / n).collect()
    }

    /// Fraction of in-range samples per `p` row.
    pub fn marginal_p(&self) -> Vec<f64> {
        let n = self.in_range().max(1) as f64;
        (0..self.p.bins).map(|j| (0..self.x.bins).map(|i| self.count(i, j)).sum::<u64>() as f64 / n).collect()
    }
}

impl SampleSink for PhaseSpaceHistogram {
    fn push(&mut self, _index: u64, sample: &RecoilShiftSample) {
        self.add(sample.alpha);
    }

    fn merge(&mut self, later: Self) {
        assert!(self.x == later.x && self.p == later.p, "merging histograms with different grids");
        for (a, b) in self.counts.iter_mut().zip(later.counts) {
            *a += b;
        }
        self.total += later.total;
        self.out_of_range += later.out_of_range;
    }
}

/// `q = √2 Re(α e^{iφ})`.
#[inline]
pub fn quadrature(alpha: Complex64, phi: f64) -> f64 {
    SQRT_2 * (alpha * Complex64::from_polar(1.0, phi)).re
}

/// Binned `p(q, φ)` on a range symmetric about 0.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureHistogram {
    phi: f64,
    rot: Complex64,
    axis: Axis,
    counts: Vec<u64>,
    total: u64,
    out_of_range: u64,
}

impl QuadratureHistogram {
    /// `bins ≥ 2` over `[−half_range, half_range)`.
    pub fn new(phi: f64, half_range: f64, bins: usize) -> Result<Self, DensityError> {
        if bins < 2 {
            return Err(DensityError::BadBinning("quadrature histogram needs at least 2 bins"));
        }
        if half_range.is_nan() || half_range <= 0.0 {
            return Err(DensityError::BadBinning("quadrature range must be positive"));
        }
        let axis = Axis::symmetric(half_range, bins)?;
        Ok(QuadratureHistogram {
            phi,
            rot: Complex64::from_polar(1.0, phi),
            axis,
            counts: vec![0; bins],
            total: 0,
            out_of_range: 0,
        })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn out_of_range(&self) -> u64 {
        self.out_of_range
    }

    pub fn in_range(&self) -> u64 {
        self.total - self.out_of_range
    }

    #[inline]
    pub fn add_q(&mut self, q: f64) {
        self.total += 1;
        match self.axis.index(q) {
            Some(i) => self.counts[i] += 1,
            None => self.out_of_range += 1,
        }
    }

    #[inline]
    pub fn add(&mut self, alpha: Complex64) {
        self.add_q(SQRT_2 * (alpha * self.rot).re);
    }

    /// Probability mass per bin, normalized over in-range samples.
    pub fn masses(&self) -> Vec<f64> {
        let n = self.in_range();
        if n == 0 {
            return vec![0.0; self.axis.bins];
        }
        self.counts.iter().map(|c| *c as f64 / n as f64).collect()
    }

    /// `(q, density)` per bin; integrates to 1 over in-range samples.
    pub fn density(&self) -> Vec<(f64, f64)> {
        let w = self.axis.width();
        self.masses().into_iter().enumerate().map(|(i, m)| (self.axis.center(i), m / w)).collect()
    }
}

impl SampleSink for QuadratureHistogram {
    fn push(&mut self, _index: u64, sample: &RecoilShiftSample) {
        self.add(sample.alpha);
    }

    fn merge(&mut self, later: Self) {
        assert!(self.axis == later.axis && self.phi == later.phi, "merging different quadrature binnings");
        for (a, b) in self.counts.iter_mut().zip(later.counts) {
            *a += b;
        }
        self.total += later.total;
        self.out_of_range += later.out_of_range;
    }
}

/// Histogram of `q(φ)` directly from samples.
pub fn quadrature_distribution(
    samples: &[RecoilShiftSample],
    phi: f64,
    bins: usize,
    half_range: f64,
) -> Result<QuadratureHistogram, DensityError> {
    let mut h = QuadratureHistogram::new(phi, half_range, bins)?;
    samples.iter().for_each(|s| h.add(s.alpha));
    Ok(h)
}

/// Sample counts per angular sector of `arg α`, sector 0 starting at `−π`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSectors {
    counts: Vec<u64>,
    zero: u64,
}

impl AngularSectors {
    pub fn new(sectors: usize) -> Self {
        assert!(sectors > 0);
        AngularSectors { counts: vec![0; sectors], zero: 0 }
    }

    pub fn add(&mut self, alpha: Complex64) {
        if alpha == Complex64::new(0.0, 0.0) {
            self.zero += 1;
            return;
        }
        let k = self.counts.len();
        let i = (((alpha.arg() + PI) / (2.0 * PI)) * k as f64) as usize;
        self.counts[i.min(k - 1)] += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Pearson statistic against equal occupation.
    pub fn chi_square_uniform(&self) -> f64 {
        let n: u64 = self.counts.iter().sum();
        let e = n as f64 / self.counts.len() as f64;
        self.counts.iter().map(|c| (*c as f64 - e).powi(2) / e).sum()
    }
}

impl SampleSink for AngularSectors {
    fn push(&mut self, _index: u64, sample: &RecoilShiftSample) {
        self.add(sample.alpha);
    }

    fn merge(&mut self, later: Self) {
        for (a, b) in self.counts.iter_mut().zip(later.counts) {
            *a += b;
        }
        self.zero += later.zero;
    }
}

/// Running `q` and `q²` at a fixed set of phases.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureMoments {
    phis: Vec<f64>,
    q: Vec<RunningStat>,
    q2: Vec<RunningStat>,
}

impl QuadratureMoments {
    pub fn new(phis: &[f64]) -> Self {
        QuadratureMoments {
            phis: phis.to_vec(),
            q: vec![RunningStat::default(); phis.len()],
            q2: vec![RunningStat::default(); phis.len()],
        }
    }

    pub fn add(&mut self, alpha: Complex64) {
        for (k, phi) in self.phis.iter().enumerate() {
            let q = quadrature(alpha, *phi);
            self.q[k].push(q);
            self.q2[k].push(q * q);
        }
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn mean(&self, k: usize) -> Estimate {
        Estimate { mean: self.q[k].mean(), se: self.q[k].std_error() }
    }

    /// Variance of `q` at phase `k`. The error bar is that of `⟨q²⟩`; the
    /// mean correction is second order when `⟨q⟩ ≈ 0`.
    pub fn variance(&self, k: usize) -> Estimate {
        let m = self.q[k].mean();
        Estimate { mean: self.q2[k].mean() - m * m, se: self.q2[k].std_error() }
    }
}

impl SampleSink for QuadratureMoments {
    fn push(&mut self, _index: u64, sample: &RecoilShiftSample) {
        self.add(sample.alpha);
    }

    fn merge(&mut self, later: Self) {
        for (a, b) in self.q.iter_mut().zip(&later.q) {
            a.merge(b);
        }
        for (a, b) in self.q2.iter_mut().zip(&later.q2) {
            a.merge(b);
        }
    }
}

/// Plug-in moment estimates with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMoments {
    pub count: usize,
    pub mean_re: Estimate,
    pub mean_im: Estimate,
    pub abs2: Estimate,
    pub alpha2_re: Estimate,
    pub alpha2_im: Estimate,
    pub abs4: Estimate,
    /// `(δq₊² − δq₋²)/(δq₊² + δq₋²)` from a phase scan, jackknife error.
    pub anisotropy: Estimate,
    /// Phase of the largest quadrature variance.
    pub phi_plus: f64,
}

const SCAN_PHASES: usize = 720;
const JACKKNIFE_GROUPS: usize = 20;

/// Centered first and second moments of a sample block.
#[derive(Debug, Clone, Copy, Default)]
struct Block {
    n: f64,
    s1: Complex64,
    s_abs2: f64,
    s_a2: Complex64,
}

impl Block {
    fn add(&mut self, a: Complex64) {
        self.n += 1.0;
        self.s1 += a;
        self.s_abs2 += a.norm_sqr();
        self.s_a2 += a * a;
    }

    fn combine(&self, o: &Block, sign: f64) -> Block {
        Block {
            n: self.n + sign * o.n,
            s1: self.s1 + o.s1 * sign,
            s_abs2: self.s_abs2 + sign * o.s_abs2,
            s_a2: self.s_a2 + o.s_a2 * sign,
        }
    }

    /// Scan `δq²(φ) = 2[⟨x_φ²⟩ − ⟨x_φ⟩²]` with `x_φ = Re(α e^{iφ})` over
    /// a phase grid; returns `(anisotropy, phase of the maximum)`.
    fn scan(&self) -> (f64, f64) {
        let m = self.s1 / self.n;
        let n2 = self.s_abs2 / self.n - m.norm_sqr();
        let a2 = self.s_a2 / self.n - m * m;
        let (mut lo, mut hi, mut phi_hi) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for k in 0..SCAN_PHASES {
            let phi = PI * k as f64 / SCAN_PHASES as f64;
            let v = n2 + (a2 * Complex64::from_polar(1.0, 2.0 * phi)).re;
            lo = lo.min(v);
            if v > hi {
                hi = v;
                phi_hi = phi;
            }
        }
        ((hi - lo) / (hi + lo), phi_hi)
    }
}

/// Moments of a sample set with error bars.
pub fn empirical_moments(samples: &[RecoilShiftSample]) -> Result<EmpiricalMoments, DensityError> {
    if samples.len() < 2 {
        return Err(DensityError::InsufficientSamples { needed: 2, got: samples.len() });
    }
    let mut acc = RecoilAccumulator::new();
    let g = JACKKNIFE_GROUPS.min(samples.len());
    let mut groups = vec![Block::default(); g];
    let mut all = Block::default();
    for (i, s) in samples.iter().enumerate() {
        acc.add(s);
        groups[i * g / samples.len()].add(s.alpha);
        all.add(s.alpha);
    }
    let (a_full, phi_plus) = all.scan();
    let loo: Vec<f64> = groups.iter().map(|b| all.combine(b, -1.0).scan().0).collect();
    let mean_loo = loo.iter().sum::<f64>() / g as f64;
    let var = loo.iter().map(|x| (x - mean_loo).powi(2)).sum::<f64>() * (g as f64 - 1.0) / g as f64;
    let (mean_re, mean_im) = acc.mean_alpha();
    let (alpha2_re, alpha2_im) = acc.mean_alpha2();
    let fix = |e: Estimate| if e.se.is_nan() { Estimate { mean: e.mean, se: 0.0 } } else { e };
    Ok(EmpiricalMoments {
        count: samples.len(),
        mean_re,
        mean_im,
        abs2: acc.mean_abs2(),
        alpha2_re,
        alpha2_im,
        abs4: acc.mean_abs4(),
        anisotropy: fix(Estimate { mean: a_full, se: var.sqrt() }),
        phi_plus,
    })
}

/// One point of the tomography signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomographyPoint {
    pub tau: f64,
    /// `P₁(τ, φ) = 1/2 − 1/2 Re Σ p_i e^{−i q_i τ}`.
    pub p1: f64,
    /// `|1/2 Σ p_i sin(q_i τ)|`, zero for a symmetric distribution.
    pub imag_residual: f64,
    /// Standard error of that sum when the masses come from `n` samples.
    pub noise_floor: f64,
}

/// Ground-state occupation after the displacement-sensitive probe, from a
/// quadrature histogram (direct sum over bin centres).
pub fn tomography_signal(qhist: &QuadratureHistogram, tau_grid: &[f64]) -> Vec<TomographyPoint> {
    let masses = qhist.masses();
    let axis = qhist.axis();
    let n = qhist.in_range().max(1) as f64;
    tau_grid
        .iter()
        .map(|&tau| {
            let (mut re, mut im, mut s2) = (0.0, 0.0, 0.0);
            for (i, p) in masses.iter().enumerate() {
                if *p == 0.0 {
                    continue;
                }
                let (sn, cs) = (axis.center(i) * tau).sin_cos();
                re += p * cs;
                im += p * sn;
                s2 += p * sn * sn;
            }
            TomographyPoint {
                tau,
                p1: 0.5 - 0.5 * re,
                imag_residual: 0.5 * im.abs(),
                noise_floor: 0.5 * ((s2 - im * im).max(0.0) / n).sqrt(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(re: f64, im: f64) -> RecoilShiftSample {
        RecoilShiftSample { alpha: Complex64::new(re, im), n_emissions: 1, t_final: 1.0 }
    }

    #[test]
    fn histogram_bookkeeping() {
        let ax = Axis::symmetric(2.0, 4).unwrap();
        let mut h = PhaseSpaceHistogram::new(0.1, ax, ax).unwrap();
        assert_eq!((h.total(), h.in_range()), (0, 0));
        h.add(Complex64::new(0.05, -0.15));
        h.add(Complex64::new(0.5, 0.0));
        assert_eq!(h.total(), 2);
        assert_eq!(h.out_of_range(), 1);
        assert_eq!(h.count(2, 0), 1);
        let total: f64 = h.cells().map(|c| c.2).sum::<f64>() * ax.width() * ax.width();
        assert!((total - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadrature_normalized() {
        let samples: Vec<_> = (0..1000).map(|i| s((i as f64 * 0.37).sin(), (i as f64).cos())).collect();
        let h = quadrature_distribution(&samples, 0.3, 50, 2.0).unwrap();
        let sum: f64 = h.density().iter().map(|(_, d)| d * h.axis().width()).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(QuadratureHistogram::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn repeated_sample_has_no_spread() {
        let samples = vec![s(0.3, -0.2); 50];
        let m = empirical_moments(&samples).unwrap();
        assert!(m.abs2.se < 1e-9 && m.alpha2_re.se < 1e-9);
        assert!((m.abs2.mean - 0.13).abs() < 1e-14);
        assert!(empirical_moments(&samples[..1]).is_err());
    }

    #[test]
    fn tomography_at_zero() {
        let samples: Vec<_> = (0..500).map(|i| s((i as f64 * 0.71).sin(), 0.0)).collect();
        let h = quadrature_distribution(&samples, 0.0, 64, 2.0).unwrap();
        let t = tomography_signal(&h, &[0.0, 1.0]);
        assert!(t[0].p1.abs() < 1e-12);
        assert_eq!(t[0].imag_residual, 0.0);
    }
}
