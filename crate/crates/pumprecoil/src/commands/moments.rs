use pumprecoil_core::moments::spectral_at;
use pumprecoil_core::{PhotonStatistics, RecoilAccumulator, RecoilMomentSet};
use serde::Serialize;
use serde_json::json;

use super::Ctx;
use crate::cli::MomentsArgs;
use crate::error::AppError;
use crate::exec;

/// Agreement threshold of the Monte Carlo check, in standard errors.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, Serialize)]
struct Comparison {
    quantity: &'static str,
    analytic: f64,
    monte_carlo: f64,
    std_error: f64,
    z: f64,
}

pub fn run(ctx: &mut Ctx, args: &MomentsArgs) -> Result<(), AppError> {
    let cfg = ctx.config()?;
    let m = RecoilMomentSet::from_config(&cfg);
    let e = m.extremal();
    let photons = PhotonStatistics::from_config(&cfg);
    let w = spectral_at(&cfg, 1);
    let mut report = json!({
        "config": cfg.to_params(),
        "analytic": {
            "n_bar": m.n_bar,
            "alpha2": [m.alpha2.re, m.alpha2.im],
            "anisotropy": m.anisotropy,
            "phi_a": m.phi_a,
            "phi_minus": e.phi_minus,
            "phi_plus": e.phi_plus,
            "dq2_minus": e.var_minus,
            "dq2_plus": e.var_plus,
            "abs_alpha4": m.alpha4,
            "alpha4": [m.alpha4_complex.re, m.alpha4_complex.im],
            "dn_sq": m.dn_sq,
            "dn": m.dn_sq.sqrt(),
            "photon_mean": photons.mean(),
            "photon_variance": photons.variance(),
            "spectral_2nu": [w.re, w.im],
        },
    });

    let mut failures = Vec::new();
    if args.mc_check {
        let (sampler, plan) = ctx.sampler(&cfg, args.samples, args.cap)?;
        let acc = exec::run(&sampler, plan, RecoilAccumulator::new)?;
        let (re, im) = acc.mean_alpha();
        let (a2r, a2i) = acc.mean_alpha2();
        let (a4r, a4i) = acc.mean_alpha4();
        let rows: Vec<Comparison> = [
            ("re_alpha", 0.0, re),
            ("im_alpha", 0.0, im),
            ("n_bar", m.n_bar, acc.mean_abs2()),
            ("re_alpha2", m.alpha2.re, a2r),
            ("im_alpha2", m.alpha2.im, a2i),
            ("abs_alpha4", m.alpha4, acc.mean_abs4()),
            ("re_alpha4", m.alpha4_complex.re, a4r),
            ("im_alpha4", m.alpha4_complex.im, a4i),
            ("photon_mean", photons.mean(), acc.mean_emissions()),
        ]
        .into_iter()
        .map(|(q, a, est)| Comparison {
            quantity: q,
            analytic: a,
            monte_carlo: est.mean,
            std_error: est.se,
            // a degenerate quantity with zero spread must hit exactly
            z: if est.se > 0.0 {
                est.z(a)
            } else if est.mean == a {
                0.0
            } else {
                f64::INFINITY
            },
        })
        .collect();
        failures = rows.iter().filter(|r| r.z.is_nan() || r.z.abs() > Z_LIMIT).cloned().collect();
        report["monte_carlo"] = json!({
            "seed": plan.seed,
            "samples": args.samples,
            "z_limit": Z_LIMIT,
            "comparisons": rows,
        });
        if args.samples < 2 {
            failures.clear();
            ctx.manifest.notes.push("fewer than 2 samples; no standard errors, check skipped".into());
        }
        report["diff"] = json!(failures);
    }
    ctx.out.write_json("moments.json", &report)?;
    if !failures.is_empty() {
        let names: Vec<&str> = failures.iter().map(|f| f.quantity).collect();
        return Err(AppError::Verification(format!(
            "Monte Carlo differs by more than {Z_LIMIT} standard errors in: {}",
            names.join(", ")
        )));
    }
    Ok(())
}
