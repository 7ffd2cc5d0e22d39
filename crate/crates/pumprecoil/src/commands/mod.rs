//! Subcommand implementations.
//!
//! Every command writes `manifest.json` into its output directory, also when
//! it fails. Data files never mention the worker count or the wall time, so
//! they are byte-identical across worker counts.

use std::time::Instant;

use pumprecoil_core::{PumpConfig, SamplerPlan, TrajectorySampler};

use crate::cli::{Cli, Command, Common};
use crate::error::AppError;
use crate::exec;
use crate::output::{Meta, OutDir, RunManifest};

mod density;
mod map;
mod moments;
mod quadrature;
mod scan;
mod tomography;
mod waiting_time;

/// Shared state of one command run.
pub struct Ctx {
    pub out: OutDir,
    pub manifest: RunManifest,
    pub common: Common,
}

impl Ctx {
    pub fn config(&mut self) -> Result<PumpConfig, AppError> {
        let cfg = crate::config_file::load(&self.common.config, &self.common.overrides)?;
        self.manifest.config = cfg.to_params().into_iter().collect();
        Ok(cfg)
    }

    pub fn workers(&self) -> usize {
        self.common.workers.unwrap_or_else(exec::default_workers).max(1)
    }

    /// Sampler and plan for `samples` trajectories; records both in the
    /// manifest.
    pub fn sampler(
        &mut self,
        cfg: &PumpConfig,
        samples: u64,
        cap: Option<u64>,
    ) -> Result<(TrajectorySampler, SamplerPlan), AppError> {
        let mut sampler = TrajectorySampler::new(cfg)?;
        if let Some(c) = cap {
            sampler = sampler.with_cap(c);
        }
        let plan = SamplerPlan::new(self.common.seed, samples).workers(self.workers());
        self.manifest.seed = Some(plan.seed);
        self.manifest.samples = Some(samples);
        self.manifest.workers = Some(plan.n_workers);
        if samples == 0 {
            self.manifest.notes.push("zero samples requested; histograms are empty".into());
        }
        Ok((sampler, plan))
    }

    /// Header lines every data file starts with.
    pub fn header(&self, cfg: &PumpConfig) -> Meta {
        let mut m = vec![
            ("tool".to_string(), format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))),
            ("command".to_string(), self.manifest.command.clone()),
        ];
        for (k, v) in cfg.to_params() {
            m.push((k, format!("{v}")));
        }
        m
    }
}

fn split(cli: Cli) -> (&'static str, Common, Command) {
    let common = match &cli.command {
        Command::Density(a) => a.common.clone(),
        Command::Quadrature(a) => a.common.clone(),
        Command::Moments(a) => a.common.clone(),
        Command::AnisotropyScan(a) => a.common.clone(),
        Command::Tomography(a) => a.common.clone(),
        Command::Map(a) => a.common.clone(),
        Command::WaitingTime(a) => a.common.clone(),
    };
    let name = match &cli.command {
        Command::Density(_) => "density",
        Command::Quadrature(_) => "quadrature",
        Command::Moments(_) => "moments",
        Command::AnisotropyScan(_) => "anisotropy-scan",
        Command::Tomography(_) => "tomography",
        Command::Map(_) => "map",
        Command::WaitingTime(_) => "waiting-time",
    };
    (name, common, cli.command)
}

/// Run a parsed command line; returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    let start = Instant::now();
    let (name, common, command) = split(cli);
    let out = match OutDir::create(&common.out) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", common.out.display());
            return 3;
        }
    };
    let mut ctx = Ctx { out, manifest: RunManifest::new(name), common };
    let result = match &command {
        Command::Density(a) => density::run(&mut ctx, a),
        Command::Quadrature(a) => quadrature::run(&mut ctx, a),
        Command::Moments(a) => moments::run(&mut ctx, a),
        Command::AnisotropyScan(a) => scan::run(&mut ctx, a),
        Command::Tomography(a) => tomography::run(&mut ctx, a),
        Command::Map(a) => map::run(&mut ctx, a),
        Command::WaitingTime(a) => waiting_time::run(&mut ctx, a),
    };
    let code = match &result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            ctx.manifest.status = "error";
            ctx.manifest.error = Some(e.to_string());
            e.exit_code()
        }
    };
    ctx.manifest.outputs = ctx.out.written().to_vec();
    ctx.manifest.wall_time_s = start.elapsed().as_secs_f64();
    let manifest = ctx.manifest.clone();
    if let Err(e) = ctx.out.write_json("manifest.json", &manifest) {
        eprintln!("error: cannot write manifest: {e}");
        return if code == 0 { 3 } else { code };
    }
    code
}
