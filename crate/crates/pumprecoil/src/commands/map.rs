use pumprecoil_core::mapping::{
    map_state, number_variance_map, number_variance_terms, quadrature_variance_map, LevelMoments, VibrationalMomentSet,
};
use pumprecoil_core::{Complex64, RecoilMomentSet};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Ctx;
use crate::cli::MapArgs;
use crate::error::AppError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    #[default]
    Normal,
    Symmetric,
}

/// One level as stored in JSON; complex numbers are `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelJson {
    pub population: f64,
    #[serde(default)]
    pub b: [f64; 2],
    #[serde(default)]
    pub n: f64,
    #[serde(default)]
    pub b2: [f64; 2],
    #[serde(default)]
    pub b2b2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsJson {
    #[serde(default)]
    pub ordering: Ordering,
    pub level1: LevelJson,
    pub level2: LevelJson,
}

fn c(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl LevelJson {
    fn to_moments(self, ordering: Ordering) -> LevelMoments {
        match ordering {
            Ordering::Normal => {
                LevelMoments { population: self.population, b: c(self.b), n: self.n, b2: c(self.b2), b2b2: self.b2b2 }
            }
            Ordering::Symmetric => {
                LevelMoments::from_symmetric(self.population, c(self.b), self.n, c(self.b2), self.b2b2)
            }
        }
    }

    fn from_moments(m: &LevelMoments) -> Self {
        LevelJson { population: m.population, b: [m.b.re, m.b.im], n: m.n, b2: [m.b2.re, m.b2.im], b2b2: m.b2b2 }
    }
}

impl MomentsJson {
    pub fn to_set(self) -> Result<VibrationalMomentSet, AppError> {
        Ok(VibrationalMomentSet::new(self.level1.to_moments(self.ordering), self.level2.to_moments(self.ordering))?)
    }
}

pub fn run(ctx: &mut Ctx, args: &MapArgs) -> Result<(), AppError> {
    let cfg = ctx.config()?;
    let initial = match &args.initial_moments {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<MomentsJson>(&text)?.to_set()?
        }
        None => VibrationalMomentSet::ground(),
    };
    let rm = RecoilMomentSet::from_config(&cfg);
    let fin = map_state(&initial, &rm)?.level2;
    let e = rm.extremal();
    let terms = number_variance_terms(&initial, &rm);
    let report = json!({
        "config": cfg.to_params(),
        "ordering": "normal",
        "initial": {
            "level1": LevelJson::from_moments(&initial.level1),
            "level2": LevelJson::from_moments(&initial.level2),
        },
        "recoil": {
            "n_bar": rm.n_bar,
            "alpha2": [rm.alpha2.re, rm.alpha2.im],
            "anisotropy": rm.anisotropy,
            "phi_a": rm.phi_a,
            "abs_alpha4": rm.alpha4,
            "dn_sq": rm.dn_sq,
        },
        "final": LevelJson::from_moments(&fin),
        "number_variance": number_variance_map(&initial, &rm)?,
        "m1": terms.m1,
        "m2": terms.m2,
        "quadrature_variance": {
            "phi_minus": e.phi_minus,
            "minus": quadrature_variance_map(&initial, &rm, e.phi_minus)?,
            "phi_plus": e.phi_plus,
            "plus": quadrature_variance_map(&initial, &rm, e.phi_plus)?,
        },
    });
    ctx.out.write_json("mapped.json", &report)?;
    Ok(())
}
