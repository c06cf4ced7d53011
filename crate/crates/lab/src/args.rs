use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{LabError, LabResult};

#[derive(Debug, Parser)]
#[command(
    name = "gjms-lab",
    version,
    about = "Experiments for the fractional GJMS operators on hyperbolic space"
)]
pub struct Cli {
    /// File of `key=value` lines supplying subcommand flags; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral bottoms, b_s, the gap, 2* and ρ as one JSON object on stdout.
    Constants(ConstantsArgs),
    /// Tabulate a spectral multiplier on a uniform β grid.
    Multiplier(MultiplierArgs),
    /// Critical mass, L² mass and energy of the cut-off bubble on an ε ladder, with rate fits.
    BubbleAsymptotics(BubbleArgs),
    /// Minimized Poincaré–Sobolev quotients over a λ grid.
    GapScan(GapScanArgs),
    /// Regularized radial kernel and its exponential decay rate.
    KernelDecay(KernelArgs),
    /// Multi-bump upper bound for λ above the spectral bottom.
    Blowdown(BlowdownArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::Multiplier(_) => "multiplier",
            Command::BubbleAsymptotics(_) => "bubble-asymptotics",
            Command::GapScan(_) => "gap-scan",
            Command::KernelDecay(_) => "kernel-decay",
            Command::Blowdown(_) => "blowdown",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub s: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct MultiplierArgs {
    /// gjms, intertwined or remainder
    #[arg(long, default_value = "gjms")]
    pub kind: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 50.0)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 501)]
    pub count: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct BubbleArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,
    /// Decreasing ε values, comma separated or start:stop:count.
    #[arg(long, default_value = "0.2,0.1,0.05,0.025")]
    pub eps: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct GapScanArgs {
    /// gjms or intertwined
    #[arg(long, default_value = "intertwined")]
    pub kind: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub s: f64,
    /// λ values, comma separated or start:stop:count.
    #[arg(long)]
    pub lambda: String,
    /// bubble or spline
    #[arg(long, default_value = "spline")]
    pub family: String,
    #[arg(long, default_value_t = 12)]
    pub knots: usize,
    #[arg(long, default_value_t = 8.0)]
    pub width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub grading: f64,
    /// Spline seed: `ground` or `bubble:<eps>`.
    #[arg(long, default_value = "ground")]
    pub seed: String,
    #[arg(long, default_value_t = 0.01)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 0.2)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 0.24)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 500)]
    pub budget: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct KernelArgs {
    #[arg(long, default_value = "gjms")]
    pub kind: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub s: f64,
    /// Radii, comma separated or start:stop:count (each ≥ 0.5).
    #[arg(long, default_value = "2:6:5")]
    pub r: String,
    #[arg(long, default_value_t = 0.01)]
    pub eps_reg: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct BlowdownArgs {
    #[arg(long, default_value = "intertwined")]
    pub kind: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub lambda: f64,
    /// Bump counts, comma separated.
    #[arg(long = "N", default_value = "4,16,64,256")]
    pub bumps: String,
    #[arg(long, default_value_t = 0.01)]
    pub eps_reg: f64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Appends `--key value` for every config entry whose flag is absent from `argv`.
pub fn merge_config(argv: Vec<String>) -> LabResult<Vec<String>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let text = fs::read_to_string(&path)?;
    let mut out = argv;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| LabError::Input(format!("{path}:{}: expected key=value", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(LabError::Input(format!(
                "{path}:{}: bad key `{key}`",
                lineno + 1
            )));
        }
        let flag = format!("--{key}");
        let given = out
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !given {
            out.push(flag);
            out.push(value.trim().to_string());
        }
    }
    Ok(out)
}

/// Parses `a,b,c` or `start:stop:count` into reals.
pub fn parse_reals(spec: &str, what: &str) -> LabResult<Vec<f64>> {
    let bad = || LabError::Input(format!("cannot parse {what} `{spec}`"));
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(LabError::Input(format!("empty {what}")));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.as_slice() {
        [single] => single
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<LabResult<Vec<f64>>>()?,
        [a, b, c] => {
            let start: f64 = a.trim().parse().map_err(|_| bad())?;
            let stop: f64 = b.trim().parse().map_err(|_| bad())?;
            let count: usize = c.trim().parse().map_err(|_| bad())?;
            match count {
                0 => return Err(bad()),
                1 => vec![start],
                _ => (0..count)
                    .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                    .collect(),
            }
        }
        _ => return Err(bad()),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(values)
}

pub fn parse_counts(spec: &str) -> LabResult<Vec<u64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(LabError::Input("empty bump-count list".into()));
    }
    spec.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| LabError::Input(format!("bad bump count `{t}`")))
        })
        .collect()
}
