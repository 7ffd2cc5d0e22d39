use pumprecoil_core::density::QuadratureHistogram;
use pumprecoil_core::trajectory::SampleSink;
use pumprecoil_core::{RecoilMomentSet, RecoilShiftSample};

use super::Ctx;
use crate::cli::QuadratureArgs;
use crate::error::AppError;
use crate::exec;
use crate::output::Table;

/// Several quadrature histograms filled from the same trajectories.
#[derive(Debug, Clone)]
struct Quadratures(Vec<QuadratureHistogram>);

impl SampleSink for Quadratures {
    fn push(&mut self, index: u64, sample: &RecoilShiftSample) {
        self.0.iter_mut().for_each(|h| h.push(index, sample));
    }

    fn merge(&mut self, later: Self) {
        self.0.iter_mut().zip(later.0).for_each(|(a, b)| a.merge(b));
    }
}

pub fn run(ctx: &mut Ctx, args: &QuadratureArgs) -> Result<(), AppError> {
    let cfg = ctx.config()?;
    if args.bins < 2 || args.range.is_nan() || args.range <= 0.0 {
        return Err(AppError::Usage("need --bins >= 2 and --range > 0".into()));
    }
    let phases: Vec<(&str, f64)> = if args.extremal {
        let e = RecoilMomentSet::from_config(&cfg).extremal();
        vec![("quadrature_minus", e.phi_minus), ("quadrature_plus", e.phi_plus)]
    } else {
        vec![("quadrature", args.phi.unwrap_or(0.0))]
    };
    let eta1 = cfg.eta1();
    let proto: Vec<QuadratureHistogram> = phases
        .iter()
        .map(|(_, phi)| QuadratureHistogram::new(*phi, args.range * eta1, args.bins))
        .collect::<Result<_, _>>()
        .map_err(|e| AppError::Usage(e.to_string()))?;
    let (sampler, plan) = ctx.sampler(&cfg, args.samples, args.cap)?;
    let hists = exec::run(&sampler, plan, || Quadratures(proto.clone()))?;

    for ((stem, phi), h) in phases.iter().zip(&hists.0) {
        let mut meta = ctx.header(&cfg);
        for (k, v) in [
            ("seed", plan.seed.to_string()),
            ("samples", args.samples.to_string()),
            ("phi", format!("{phi}")),
            ("bins", args.bins.to_string()),
            ("range_eta1", format!("{}", args.range)),
            ("out_of_range", h.out_of_range().to_string()),
            ("axis", "q = sqrt(2) Re(alpha e^{i phi}) / eta1; density per unit q".to_string()),
        ] {
            meta.push((k.to_string(), v));
        }
        let mut table = Table::new(meta, &["q", "density", "log_density"]);
        for (q, d) in h.density() {
            let d = d * eta1;
            table.push(vec![q / eta1, d, d.ln()]);
        }
        ctx.out.write_table(stem, &table)?;
    }
    Ok(())
}
