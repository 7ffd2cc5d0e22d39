use pumprecoil_core::moments::{
    anisotropy_vs_saturation, lambda2_threshold, optimize_n_spread, s_max, saturated_anisotropy, SaturationOptimum,
};

use super::Ctx;
use crate::cli::{parse_grid, ScanArgs};
use crate::error::AppError;
use crate::output::Table;

pub fn run(ctx: &mut Ctx, args: &ScanArgs) -> Result<(), AppError> {
    let cfg = ctx.config()?;
    let grid = parse_grid(&args.s_grid).map_err(AppError::Usage)?;
    let points = anisotropy_vs_saturation(&cfg, &grid)?;
    let spread = optimize_n_spread(&cfg, &grid)?;
    let peak = match s_max(&cfg)? {
        SaturationOptimum::Interior(s) => format!("{s}"),
        SaturationOptimum::SaturationLimited => "none (A grows up to full saturation)".to_string(),
    };
    let mut meta = ctx.header(&cfg);
    for (k, v) in [
        ("s_max", peak),
        ("lambda2_threshold", format!("{}", lambda2_threshold(cfg.nu_tilde()))),
        ("anisotropy_saturated", format!("{}", saturated_anisotropy(cfg.lambda2(), cfg.nu_tilde()))),
        ("s_min_number_variance", format!("{}", spread.s_star)),
        ("number_variance", "final <(dn)^2> from the ground state, n_bar + dn_p^2".to_string()),
    ] {
        meta.push((k.to_string(), v));
    }
    let mut table = Table::new(meta, &["saturation", "anisotropy", "phi_a", "number_variance"]);
    for (p, (_, v)) in points.iter().zip(&spread.objective) {
        table.push(vec![p.saturation, p.anisotropy, p.phi_a, *v]);
    }
    ctx.out.write_table("anisotropy", &table)?;
    Ok(())
}
