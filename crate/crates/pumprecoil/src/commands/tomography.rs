use pumprecoil_core::density::{tomography_signal, QuadratureHistogram};
use pumprecoil_core::RecoilMomentSet;

use super::Ctx;
use crate::cli::{parse_grid, TomographyArgs};
use crate::error::AppError;
use crate::exec;
use crate::output::Table;

pub fn run(ctx: &mut Ctx, args: &TomographyArgs) -> Result<(), AppError> {
    let cfg = ctx.config()?;
    let taus = parse_grid(&args.tau_grid).map_err(AppError::Usage)?;
    if taus.is_empty() {
        return Err(AppError::Usage("--tau-grid is empty".into()));
    }
    // Twelve standard deviations of the widest quadrature.
    let range = match args.range {
        Some(r) => r,
        None => 12.0 * RecoilMomentSet::from_config(&cfg).extremal().var_plus.sqrt().max(1e-9),
    };
    let proto = QuadratureHistogram::new(args.phi, range, args.bins).map_err(|e| AppError::Usage(e.to_string()))?;
    let (sampler, plan) = ctx.sampler(&cfg, args.samples, args.cap)?;
    let hist = exec::run(&sampler, plan, || proto.clone())?;

    let mut meta = ctx.header(&cfg);
    for (k, v) in [
        ("seed", plan.seed.to_string()),
        ("samples", args.samples.to_string()),
        ("phi", format!("{}", args.phi)),
        ("bins", args.bins.to_string()),
        ("range", format!("{range}")),
        ("out_of_range", hist.out_of_range().to_string()),
        ("signal", "P1(tau) = 1/2 - 1/2 Re sum_q p(q) e^{-i q tau}, q = sqrt(2) Re(alpha e^{i phi})".to_string()),
    ] {
        meta.push((k.to_string(), v));
    }
    let mut table = Table::new(meta, &["tau", "p1", "imag_residual", "noise_floor"]);
    for p in tomography_signal(&hist, &taus) {
        table.push(vec![p.tau, p.p1, p.imag_residual, p.noise_floor]);
    }
    ctx.out.write_table("tomography", &table)?;
    Ok(())
}
