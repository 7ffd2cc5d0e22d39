//! JSON config files and `--set key=value` overrides.
//!
//! A config is a flat JSON object of numbers. Keys are the ones listed in
//! [`pumprecoil_core::config::KEYS`]; anything else is rejected.

use std::path::Path;

use pumprecoil_core::config::ParamMap;
use pumprecoil_core::PumpConfig;
use serde_json::Value;

use crate::error::AppError;

pub fn parse(text: &str) -> Result<ParamMap, AppError> {
    let value: Value = serde_json::from_str(text)?;
    let Value::Object(obj) = value else {
        return Err(AppError::Config("config must be a JSON object".into()));
    };
    let mut map = ParamMap::new();
    for (k, v) in obj {
        match v.as_f64() {
            Some(x) => {
                map.insert(k, x);
            }
            None => return Err(AppError::Config(format!("`{k}` must be a number, got {v}"))),
        }
    }
    Ok(map)
}

/// Apply `key=value` overrides on top of a parsed map.
pub fn apply_overrides(map: &mut ParamMap, overrides: &[String]) -> Result<(), AppError> {
    for o in overrides {
        let (k, v) = o.split_once('=').ok_or_else(|| AppError::Usage(format!("override `{o}` is not key=value")))?;
        let x: f64 = v.trim().parse().map_err(|_| AppError::Config(format!("override `{o}`: not a number")))?;
        map.insert(k.trim().to_string(), x);
    }
    Ok(())
}

pub fn load(path: &Path, overrides: &[String]) -> Result<PumpConfig, AppError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut map = parse(&text)?;
    apply_overrides(&mut map, overrides)?;
    Ok(PumpConfig::validate(&map)?)
}
