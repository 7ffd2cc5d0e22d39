//! Command-line interface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pumprecoil_core::rng::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "pumprecoil", version, about = "Recoil density of optical pumping in a harmonic trap")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON config file (flat object of numbers)
    pub config: PathBuf,
    /// Override a config value, repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; results do not depend on it [default: all cores]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// 2D recoil density on a grid scaled by eta1
    Density(DensityArgs),
    /// Quadrature distributions
    Quadrature(QuadratureArgs),
    /// Closed-form moments, optionally checked against Monte Carlo
    Moments(MomentsArgs),
    /// Resonant anisotropy over a saturation grid
    AnisotropyScan(ScanArgs),
    /// Ground-state occupation after a displacement-sensitive probe
    Tomography(TomographyArgs),
    /// Map initial vibrational moments through the pump process
    Map(MapArgs),
    /// Tabulate the waiting-time density and survival
    WaitingTime(WaitingTimeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Cells per axis
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Half-width of both axes in units of eta1 [default: from the analytic spread]
    #[arg(long)]
    pub extent: Option<f64>,
    /// Also dump every sample to samples.bin
    #[arg(long)]
    pub raw: bool,
    /// Emission cap per trajectory
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureArgs {
    #[command(flatten)]
    pub common: Common,
    /// Quadrature phase
    #[arg(long, conflicts_with = "extremal", allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Histograms at the phases of least and largest spread
    #[arg(long)]
    pub extremal: bool,
    #[arg(long, default_value_t = 200)]
    pub bins: usize,
    /// Half-range of the quadrature axis in units of eta1
    #[arg(long, default_value_t = 1000.0)]
    pub range: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Compare with sampled moments; exit 4 beyond 4 standard errors
    #[arg(long)]
    pub mc_check: bool,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    /// `start:stop:step` or a comma-separated list
    #[arg(long, default_value = "0:100:0.1")]
    pub s_grid: String,
}

#[derive(Debug, Clone, Args)]
pub struct TomographyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Probe strengths, `start:stop:step` or a comma-separated list
    #[arg(long, default_value = "0:20:0.1")]
    pub tau_grid: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 4000)]
    pub bins: usize,
    /// Half-range of the quadrature histogram [default: from the analytic spread]
    #[arg(long)]
    pub range: Option<f64>,
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub common: Common,
    /// JSON vibrational moments [default: electronic and vibrational ground state]
    #[arg(long)]
    pub initial_moments: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WaitingTimeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Last tabulated time in 1/gamma [default: survival below 1e-12]
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
}

/// `start:stop:step` (inclusive, tolerant to rounding) or `a,b,c`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, rest)) = text.split_once(':') {
        let (b, step) = rest.split_once(':').ok_or_else(|| format!("grid `{text}` is not start:stop:step"))?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("grid `{text}`: `{s}` is not a number"));
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if !a.is_finite() || !b.is_finite() || step.is_nan() || step <= 0.0 || b < a {
            return Err(format!("grid `{text}` needs start <= stop and step > 0"));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| a + i as f64 * step).collect());
    }
    text.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| format!("grid entry `{s}` is not a number"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("1, 2.5").unwrap(), vec![1.0, 2.5]);
        assert!(parse_grid("").unwrap().is_empty());
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("a,b").is_err());
        assert_eq!(parse_grid("0:100:0.1").unwrap().len(), 1001);
    }
}
