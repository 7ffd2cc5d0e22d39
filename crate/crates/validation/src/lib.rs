//! Helpers for the acceptance run in `tests/acceptance.rs`.

use pumprecoil::exec;
use pumprecoil_core::trajectory::SampleSink;
use pumprecoil_core::{PumpConfig, SamplerPlan, TrajectorySampler};

/// Pass/fail of one criterion with the measured numbers behind it.
#[derive(Debug, Default)]
pub struct Verdict {
    pub ok: bool,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new() -> Self {
        Verdict { ok: true, notes: Vec::new() }
    }

    pub fn check(&mut self, pass: bool, note: String) {
        if pass {
            self.notes.push(note);
        } else {
            self.ok = false;
            self.notes.push(format!("FAILED {note}"));
        }
    }

    pub fn info(&mut self, note: String) {
        self.notes.push(note);
    }
}

/// `n` trajectories of `cfg` on all available cores.
pub fn sample<S, F>(cfg: &PumpConfig, seed: u64, n: u64, make: F) -> S
where
    S: SampleSink + Send,
    F: Fn() -> S + Sync,
{
    let sampler = TrajectorySampler::new(cfg).unwrap();
    let plan = SamplerPlan::new(seed, n).workers(exec::default_workers());
    exec::run(&sampler, plan, make).unwrap()
}

/// Weighted least-squares line through `(x, y, weight)` points; returns
/// `(slope, weighted R²)`.
pub fn weighted_fit(pts: &[(f64, f64, f64)]) -> (f64, f64) {
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    let syy: f64 = pts.iter().map(|p| p.2 * (p.1 - my).powi(2)).sum();
    (sxy / sxx, sxy * sxy / (sxx * syy))
}
