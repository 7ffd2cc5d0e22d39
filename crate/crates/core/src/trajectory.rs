//! Monte Carlo sampling of completed pump trajectories.
//!
//! One trajectory: starting at `t = 0`, draw a waiting time, decide with
//! probability `λ₂` whether this emission is the final one into `|2⟩`, draw its
//! direction cosine from `μ₂` (final) or `μ₁` (recycled), and add the kick
//! `iη s e^{iνt}` to the phase-space shift. Repeat until the final emission.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::ops::Range;

use num_complex::Complex64;
#[allow(unused_imports)] // float math under no_std
use num_traits::Float;
use rand_core::RngCore;

use crate::config::PumpConfig;
use crate::dipole::DipoleCharacteristic;
use crate::rng;
use crate::stats::{CompensatedSum, RunningStat};
use crate::waiting_time::WaitingTimeModel;

/// Emission budget per trajectory unless overridden.
pub const DEFAULT_EMISSION_CAP: u64 = 100_000_000;

/// Trajectories per chunk of a batch. Chunk boundaries, and therefore every
/// floating-point merge, are fixed by this constant alone.
pub const CHUNK: u64 = 1024;

// 2π split so that the phase can be reduced without losing low bits.
const TAU_HI: f64 = TAU;
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrajectoryError {
    #[error("trajectory {index} exceeded the budget of {cap} emissions")]
    RunawayTrajectory { index: u64, cap: u64 },
    #[error("saturation is zero: the atom is never excited and pumping never completes")]
    NeverCompletes,
}

/// One completed trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoilShiftSample {
    /// Total phase-space shift, in units of the ground-state width.
    pub alpha: Complex64,
    pub n_emissions: u64,
    /// Time of the final emission in `1/γ`.
    pub t_final: f64,
}

/// What to sample: `(seed, n_trajectories)` fixes the result, `n_workers`
/// only changes how fast it arrives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerPlan {
    pub seed: u64,
    pub n_trajectories: u64,
    pub n_workers: usize,
}

impl SamplerPlan {
    pub fn new(seed: u64, n_trajectories: u64) -> Self {
        SamplerPlan { seed, n_trajectories, n_workers: 1 }
    }

    pub fn workers(mut self, n: usize) -> Self {
        self.n_workers = n.max(1);
        self
    }

    /// Index ranges of the fixed chunks, in order.
    pub fn chunks(&self) -> impl Iterator<Item = Range<u64>> + '_ {
        let n = self.n_trajectories;
        (0..n.div_ceil(CHUNK)).map(move |c| c * CHUNK..((c + 1) * CHUNK).min(n))
    }
}

/// Anything that can absorb samples and be merged with a sibling built from
/// a later index range.
pub trait SampleSink {
    fn push(&mut self, index: u64, sample: &RecoilShiftSample);
    fn merge(&mut self, later: Self);
}

impl SampleSink for Vec<RecoilShiftSample> {
    fn push(&mut self, _index: u64, sample: &RecoilShiftSample) {
        Vec::push(self, *sample);
    }
    fn merge(&mut self, mut later: Self) {
        self.append(&mut later);
    }
}

impl<A: SampleSink, B: SampleSink> SampleSink for (A, B) {
    fn push(&mut self, index: u64, sample: &RecoilShiftSample) {
        self.0.push(index, sample);
        self.1.push(index, sample);
    }
    fn merge(&mut self, later: Self) {
        self.0.merge(later.0);
        self.1.merge(later.1);
    }
}

impl<A: SampleSink, B: SampleSink, C: SampleSink> SampleSink for (A, B, C) {
    fn push(&mut self, index: u64, sample: &RecoilShiftSample) {
        self.0.push(index, sample);
        self.1.push(index, sample);
        self.2.push(index, sample);
    }
    fn merge(&mut self, later: Self) {
        self.0.merge(later.0);
        self.1.merge(later.1);
        self.2.merge(later.2);
    }
}

/// Streaming pairwise merge of per-chunk sinks fed in index order.
///
/// Works like a binary counter: two neighbours of equal weight are merged as
/// soon as both exist, so at most `log₂(chunks)` partial results are alive.
/// The merge tree depends only on the number of parts, never on who
/// produced them.
#[derive(Debug)]
pub struct OrderedMerger<S> {
    stack: Vec<(u32, S)>,
}

impl<S: SampleSink> Default for OrderedMerger<S> {
    fn default() -> Self {
        OrderedMerger { stack: Vec::new() }
    }
}

impl<S: SampleSink> OrderedMerger<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, part: S) {
        let mut cur = (0u32, part);
        while let Some(top) = self.stack.last() {
            if top.0 != cur.0 {
                break;
            }
            let (level, mut earlier) = self.stack.pop().expect("non-empty");
            earlier.merge(cur.1);
            cur = (level + 1, earlier);
        }
        self.stack.push(cur);
    }

    pub fn finish(mut self) -> Option<S> {
        let mut acc = self.stack.pop()?.1;
        while let Some((_, mut earlier)) = self.stack.pop() {
            earlier.merge(acc);
            acc = earlier;
        }
        Some(acc)
    }
}

/// Merge per-chunk results in index order with [`OrderedMerger`].
pub fn merge_in_order<S: SampleSink>(parts: Vec<S>) -> Option<S> {
    let mut m = OrderedMerger::new();
    parts.into_iter().for_each(|p| m.push(p));
    m.finish()
}

#[derive(Debug, Clone)]
pub struct TrajectorySampler {
    wtm: WaitingTimeModel,
    dipole1: DipoleCharacteristic,
    dipole2: DipoleCharacteristic,
    eta1: f64,
    eta2: f64,
    lambda2: f64,
    nu: f64,
    cap: u64,
}

impl TrajectorySampler {
    pub fn new(cfg: &PumpConfig) -> Result<Self, TrajectoryError> {
        Self::with_model(cfg, WaitingTimeModel::from_config(cfg))
    }

    pub fn with_model(cfg: &PumpConfig, wtm: WaitingTimeModel) -> Result<Self, TrajectoryError> {
        if wtm.saturation() == 0.0 {
            return Err(TrajectoryError::NeverCompletes);
        }
        Ok(TrajectorySampler {
            wtm,
            dipole1: cfg.dipole1(),
            dipole2: cfg.dipole2(),
            eta1: cfg.eta1(),
            eta2: cfg.eta2(),
            lambda2: cfg.lambda2(),
            nu: cfg.nu(),
            cap: DEFAULT_EMISSION_CAP,
        })
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap.max(1);
        self
    }

    pub fn waiting_time(&self) -> &WaitingTimeModel {
        &self.wtm
    }

    /// Run one trajectory on `rng`. A runaway reports index 0; batch helpers
    /// fill in the real index.
    pub fn sample_trajectory<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<RecoilShiftSample, TrajectoryError> {
        let mut t = CompensatedSum::default();
        let mut phase = 0.0f64;
        let (mut re, mut im) = (0.0f64, 0.0f64);
        let mut n = 0u64;
        loop {
            if n == self.cap {
                return Err(TrajectoryError::RunawayTrajectory { index: 0, cap: self.cap });
            }
            n += 1;
            let tau = self.wtm.sample(rng);
            t.add(tau);
            phase += self.nu * tau;
            while phase >= TAU_HI {
                phase = (phase - TAU_HI) - TAU_LO;
            }
            let last = rng::uniform(rng) < self.lambda2;
            let (eta, dip) = if last { (self.eta2, &self.dipole2) } else { (self.eta1, &self.dipole1) };
            let s = dip.sample(rng);
            let (sn, cs) = phase.sin_cos();
            // i·η s·e^{iφ}
            re -= eta * s * sn;
            im += eta * s * cs;
            if last {
                break;
            }
        }
        let alpha = Complex64::new(re, im);
        let bound = self.eta2 + (n - 1) as f64 * self.eta1;
        assert!(
            alpha.norm() <= bound * (1.0 + 1e-9) + 1e-300,
            "recoil shift {alpha} exceeds the triangle bound {bound} after {n} emissions"
        );
        Ok(RecoilShiftSample { alpha, n_emissions: n, t_final: t.value() })
    }

    /// Trajectory `index` of the run seeded with `seed`.
    pub fn sample_index(&self, seed: u64, index: u64) -> Result<RecoilShiftSample, TrajectoryError> {
        let mut rng = rng::trajectory_rng(seed, index);
        self.sample_trajectory(&mut rng).map_err(|e| match e {
            TrajectoryError::RunawayTrajectory { cap, .. } => TrajectoryError::RunawayTrajectory { index, cap },
            other => other,
        })
    }

    /// Feed trajectories `range` of the `seed` run into `sink`, in order.
    pub fn fill<S: SampleSink>(&self, seed: u64, range: Range<u64>, sink: &mut S) -> Result<(), TrajectoryError> {
        for i in range {
            let s = self.sample_index(seed, i)?;
            sink.push(i, &s);
        }
        Ok(())
    }

    /// The samples of `plan`, lazily and in index order.
    pub fn batch(&self, plan: SamplerPlan) -> impl Iterator<Item = Result<RecoilShiftSample, TrajectoryError>> + '_ {
        (0..plan.n_trajectories).map(move |i| self.sample_index(plan.seed, i))
    }

    /// Chunked single-threaded run: one sink per chunk, merged through an
    /// [`OrderedMerger`]. Any parallel driver that fills the same chunks and
    /// feeds them to the merger in order produces the identical result.
    pub fn run<S: SampleSink>(&self, plan: SamplerPlan, make: impl Fn() -> S) -> Result<S, TrajectoryError> {
        let mut merger = OrderedMerger::new();
        for range in plan.chunks() {
            let mut sink = make();
            self.fill(plan.seed, range, &mut sink)?;
            merger.push(sink);
        }
        Ok(merger.finish().unwrap_or_else(make))
    }
}

/// Merge-only accumulator of the recoil moments and the photon-count
/// histogram.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecoilAccumulator {
    pub re: RunningStat,
    pub im: RunningStat,
    pub abs2: RunningStat,
    pub alpha2_re: RunningStat,
    pub alpha2_im: RunningStat,
    pub abs4: RunningStat,
    pub alpha4_re: RunningStat,
    pub alpha4_im: RunningStat,
    pub emissions: RunningStat,
    /// Photon count → number of trajectories.
    pub counts: BTreeMap<u64, u64>,
}

/// Estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    fn of(s: &RunningStat) -> Self {
        Estimate { mean: s.mean(), se: s.std_error() }
    }

    /// `(mean − target)/se`.
    pub fn z(&self, target: f64) -> f64 {
        (self.mean - target) / self.se
    }
}

impl RecoilAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, s: &RecoilShiftSample) {
        let a = s.alpha;
        let a2 = a * a;
        let n2 = a.norm_sqr();
        let a4 = a2 * a2;
        self.re.push(a.re);
        self.im.push(a.im);
        self.abs2.push(n2);
        self.alpha2_re.push(a2.re);
        self.alpha2_im.push(a2.im);
        self.abs4.push(n2 * n2);
        self.alpha4_re.push(a4.re);
        self.alpha4_im.push(a4.im);
        self.emissions.push(s.n_emissions as f64);
        *self.counts.entry(s.n_emissions).or_insert(0) += 1;
    }

    pub fn count(&self) -> u64 {
        self.abs2.count()
    }

    pub fn mean_alpha(&self) -> (Estimate, Estimate) {
        (Estimate::of(&self.re), Estimate::of(&self.im))
    }

    pub fn mean_abs2(&self) -> Estimate {
        Estimate::of(&self.abs2)
    }

    pub fn mean_alpha2(&self) -> (Estimate, Estimate) {
        (Estimate::of(&self.alpha2_re), Estimate::of(&self.alpha2_im))
    }

    pub fn mean_abs4(&self) -> Estimate {
        Estimate::of(&self.abs4)
    }

    pub fn mean_alpha4(&self) -> (Estimate, Estimate) {
        (Estimate::of(&self.alpha4_re), Estimate::of(&self.alpha4_im))
    }

    pub fn mean_emissions(&self) -> Estimate {
        Estimate::of(&self.emissions)
    }
}

impl SampleSink for RecoilAccumulator {
    fn push(&mut self, _index: u64, sample: &RecoilShiftSample) {
        self.add(sample);
    }

    fn merge(&mut self, later: Self) {
        self.re.merge(&later.re);
        self.im.merge(&later.im);
        self.abs2.merge(&later.abs2);
        self.alpha2_re.merge(&later.alpha2_re);
        self.alpha2_im.merge(&later.alpha2_im);
        self.abs4.merge(&later.abs4);
        self.alpha4_re.merge(&later.alpha4_re);
        self.alpha4_im.merge(&later.alpha4_im);
        self.emissions.merge(&later.emissions);
        for (k, v) in later.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(l2: f64, e1: f64, e2: f64) -> PumpConfig {
        PumpConfig::builder().lambda2(l2).eta(e1, e2).nu_tilde(0.16).saturation(25.0).build().unwrap()
    }

    #[test]
    fn single_emission() {
        let c = cfg(1.0, 0.1, 0.075);
        let smp = TrajectorySampler::new(&c).unwrap();
        for i in 0..1000 {
            let s = smp.sample_index(3, i).unwrap();
            assert_eq!(s.n_emissions, 1);
            let phase = c.nu() * s.t_final;
            // α = iη₂ s e^{iνt}: α e^{−iνt}/i is real and within η₂
            let r = s.alpha * Complex64::from_polar(1.0, -phase) / Complex64::i();
            assert!(r.im.abs() < 1e-12);
            assert!(r.re.abs() <= 0.075);
        }
    }

    #[test]
    fn no_recoil_without_eta() {
        let smp = TrajectorySampler::new(&cfg(0.3, 0.0, 0.0)).unwrap();
        for i in 0..200 {
            assert_eq!(smp.sample_index(1, i).unwrap().alpha, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn runaway_is_reported_with_index() {
        let smp = TrajectorySampler::new(&cfg(1e-6, 0.1, 0.1)).unwrap().with_cap(10);
        let err = smp.sample_index(5, 42).unwrap_err();
        assert_eq!(err, TrajectoryError::RunawayTrajectory { index: 42, cap: 10 });
    }

    #[test]
    fn zero_saturation_rejected() {
        let c = PumpConfig::builder().lambda2(0.5).eta(0.1, 0.1).nu_tilde(0.16).saturation(0.0).build().unwrap();
        assert_eq!(TrajectorySampler::new(&c).unwrap_err(), TrajectoryError::NeverCompletes);
    }

    #[test]
    fn chunked_run_equals_stream() {
        let smp = TrajectorySampler::new(&cfg(0.5, 0.1, 0.075)).unwrap();
        let plan = SamplerPlan::new(9, 3000);
        let all: Vec<_> = smp.batch(plan).map(Result::unwrap).collect();
        let chunked = smp.run(plan, Vec::new).unwrap();
        assert_eq!(all, chunked);
        assert_eq!(plan.chunks().count(), 3);
        let acc = smp.run(plan, RecoilAccumulator::new).unwrap();
        assert_eq!(acc.count(), 3000);
        assert_eq!(acc.counts.values().sum::<u64>(), 3000);
    }

    #[test]
    fn mean_emissions_geometric() {
        let smp = TrajectorySampler::new(&cfg(0.5, 0.1, 0.075)).unwrap();
        let acc = smp.run(SamplerPlan::new(2, 50_000), RecoilAccumulator::new).unwrap();
        assert!(acc.mean_emissions().z(2.0).abs() < 4.0);
    }
}
