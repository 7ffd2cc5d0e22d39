use pumprecoil_core::moments::spectral_at;
use pumprecoil_core::WaitingTimeModel;

use super::Ctx;
use crate::cli::WaitingTimeArgs;
use crate::error::AppError;
use crate::output::Table;

pub fn run(ctx: &mut Ctx, args: &WaitingTimeArgs) -> Result<(), AppError> {
    let cfg = ctx.config()?;
    if cfg.saturation() == 0.0 {
        return Err(AppError::Config("saturation 0: the atom is never excited".into()));
    }
    if args.points < 2 {
        return Err(AppError::Usage("--points must be at least 2".into()));
    }
    let model = WaitingTimeModel::from_config(&cfg);
    let t_max = match args.t_max {
        Some(t) if t > 0.0 => t,
        Some(t) => return Err(AppError::Usage(format!("--t-max {t} must be positive"))),
        None => model.quantile_survival(1e-12),
    };
    let w = spectral_at(&cfg, 1);
    let mut meta = ctx.header(&cfg);
    for (k, v) in [
        ("regime", format!("{:?}", model.regime())),
        ("spectral_2nu", format!("{} {}", w.re, w.im)),
        ("units", "t in the time unit of gamma, density its inverse".to_string()),
    ] {
        meta.push((k.to_string(), v));
    }
    let mut table = Table::new(meta, &["t", "density", "survival"]);
    for i in 0..args.points {
        let t = t_max * i as f64 / (args.points - 1) as f64;
        let d = model.density(t).map_err(|e| AppError::Runtime(e.to_string()))?;
        let s = model.survival(t).map_err(|e| AppError::Runtime(e.to_string()))?;
        table.push(vec![t, d, s]);
    }
    ctx.out.write_table("waiting_time", &table)?;
    Ok(())
}
