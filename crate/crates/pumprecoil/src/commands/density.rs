use pumprecoil_core::density::{Axis, PhaseSpaceHistogram};
use pumprecoil_core::{RecoilMomentSet, RecoilShiftSample};

use super::Ctx;
use crate::cli::DensityArgs;
use crate::error::AppError;
use crate::exec;
use crate::output::Table;

pub fn run(ctx: &mut Ctx, args: &DensityArgs) -> Result<(), AppError> {
    let cfg = ctx.config()?;
    if args.grid == 0 {
        return Err(AppError::Usage("--grid must be positive".into()));
    }
    // Five standard deviations of the wider of Re α, Im α.
    let extent = match args.extent {
        Some(e) => e,
        None => {
            let spread = RecoilMomentSet::from_config(&cfg).extremal().var_plus;
            (5.0 * (0.5 * spread).sqrt() / cfg.eta1()).max(1e-3)
        }
    };
    let axis = Axis::symmetric(extent, args.grid).map_err(|e| AppError::Usage(e.to_string()))?;
    let (sampler, plan) = ctx.sampler(&cfg, args.samples, args.cap)?;
    let make_hist = || PhaseSpaceHistogram::new(cfg.eta1(), axis, axis).expect("validated axes");

    let hist = if args.raw {
        let (h, samples): (PhaseSpaceHistogram, Vec<RecoilShiftSample>) =
            exec::run(&sampler, plan, || (make_hist(), Vec::new()))?;
        ctx.out.write_raw("samples.bin", &samples)?;
        h
    } else {
        exec::run(&sampler, plan, make_hist)?
    };

    let mut meta = ctx.header(&cfg);
    for (k, v) in [
        ("seed", plan.seed.to_string()),
        ("samples", args.samples.to_string()),
        ("grid", args.grid.to_string()),
        ("extent_eta1", format!("{extent}")),
        ("in_range", hist.in_range().to_string()),
        ("out_of_range", hist.out_of_range().to_string()),
        ("axes", "x = Re(alpha)/eta1, p = Im(alpha)/eta1; density per unit area".to_string()),
    ] {
        meta.push((k.to_string(), v));
    }
    let mut table = Table::new(meta, &["x", "p", "density"]);
    for (x, p, d) in hist.cells() {
        table.push(vec![x, p, d]);
    }
    ctx.out.write_table("density", &table)?;
    Ok(())
}
