//! Flag and config-file resolution.
//!
//! Every knob can come from three places with fixed precedence: command line
//! flag, then config file, then built-in default. The input source (entry or
//! manifest) is treated as one logical field, so a flag for either spelling
//! shadows both config keys. The resolved values are echoed into every report
//! under `meta.config`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use serde::Serialize;

use crate::CliError;

pub const DEFAULT_SAMPLES: usize = 500;
pub const DEFAULT_SEED: u64 = 0;
/// Per-axis resolution of hull, convexity, and reduction sweeps.
pub const DEFAULT_SWEEP_RES: usize = 24;
/// Per-axis resolution of gauss-scan grids.
pub const DEFAULT_SCAN_RES: usize = 64;
pub const DEFAULT_GRAD_TOL: f64 = 1e-9;
pub const DEFAULT_MORSE_TOL: f64 = 1e-8;
pub const DEFAULT_SUPP_TOL: f64 = 1e-7;
pub const DEFAULT_RANK_TOL: f64 = 1e-6;
pub const DEFAULT_DEDUP_RADIUS: f64 = 1e-5;

const CONFIG_KEYS: [&str; 14] = [
    "entry",
    "manifest",
    "samples",
    "seed",
    "resolution",
    "seed_resolution",
    "grad_tol",
    "morse_tol",
    "supp_tol",
    "rank_tol",
    "dedup_radius",
    "format",
    "out",
    "phi_log",
];

/// Flags shared by every subcommand.
#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Catalog entry name (see `list`).
    #[arg(long)]
    pub entry: Option<String>,
    /// Manifest file describing the immersion instead of a catalog name.
    #[arg(long, conflicts_with = "entry")]
    pub manifest: Option<PathBuf>,
    /// Key-value config file; command line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of accepted Monte Carlo draws.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed of the covector draw stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-axis sweep or scan resolution, comma separated; one value repeats.
    #[arg(long)]
    pub resolution: Option<String>,
    /// Per-axis Newton seeding grid, comma separated; one value repeats.
    #[arg(long)]
    pub seed_resolution: Option<String>,
    /// Gradient tolerance of the critical point search.
    #[arg(long)]
    pub grad_tol: Option<f64>,
    /// Degeneracy threshold on normalized Hessian determinants.
    #[arg(long)]
    pub morse_tol: Option<f64>,
    /// Supporting-hyperplane tolerance.
    #[arg(long)]
    pub supp_tol: Option<f64>,
    /// Relative singular value cutoff for hull rank detection.
    #[arg(long)]
    pub rank_tol: Option<f64>,
    /// Critical point deduplication radius, relative to the image diameter.
    #[arg(long)]
    pub dedup_radius: Option<f64>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: a JSON report, or plot-data CSV for tac and gauss-scan.
    #[arg(long, value_parser = ["json", "csv"])]
    pub format: Option<String>,
    /// Per-draw diagnostics file, one JSON line per draw (tac only).
    #[arg(long)]
    pub phi_log: Option<PathBuf>,
}

/// Effective configuration after merging flags, config file, and defaults.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub entry: Option<String>,
    pub manifest: Option<String>,
    pub samples: usize,
    pub seed: u64,
    /// `None` selects the per-command default resolution.
    pub resolution: Option<Vec<usize>>,
    pub seed_resolution: Option<Vec<usize>>,
    pub grad_tol: f64,
    pub morse_tol: f64,
    pub supp_tol: f64,
    pub rank_tol: f64,
    pub dedup_radius: f64,
    pub format: String,
    pub out: Option<String>,
    pub phi_log: Option<String>,
}

pub fn resolve(command: &str, args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut file = BTreeMap::new();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|err| CliError::input(format!("config {}: {err}", path.display())))?;
        for (key, value) in affine_tac::manifest::parse_kv(&text)? {
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(CliError::input(format!(
                    "config {}: unknown key `{key}`",
                    path.display()
                )));
            }
            file.insert(key, value);
        }
    }
    let (mut entry, manifest) = match (&args.entry, &args.manifest) {
        (Some(e), None) => (Some(e.clone()), None),
        (None, Some(m)) => (None, Some(m.display().to_string())),
        (Some(_), Some(_)) => {
            return Err(CliError::input("entry and manifest are mutually exclusive"));
        }
        (None, None) => match (file.get("entry"), file.get("manifest")) {
            (Some(_), Some(_)) => {
                return Err(CliError::input("config sets both entry and manifest"));
            }
            (e, m) => (e.cloned(), m.cloned()),
        },
    };
    if command == "kossowski" && entry.is_none() && manifest.is_none() {
        entry = Some("sigma_kossowski".to_string());
    }
    let format = match &args.format {
        Some(f) => f.clone(),
        None => match file.get("format") {
            Some(f) if f == "json" || f == "csv" => f.clone(),
            Some(f) => {
                return Err(CliError::input(format!(
                    "format must be json or csv, got `{f}`"
                )));
            }
            None => "json".to_string(),
        },
    };
    Ok(RunConfig {
        command: command.to_string(),
        entry,
        manifest,
        samples: scalar(args.samples, &file, "samples", DEFAULT_SAMPLES)?,
        seed: scalar(args.seed, &file, "seed", DEFAULT_SEED)?,
        resolution: axis_list(args.resolution.as_deref(), &file, "resolution")?,
        seed_resolution: axis_list(args.seed_resolution.as_deref(), &file, "seed_resolution")?,
        grad_tol: scalar(args.grad_tol, &file, "grad_tol", DEFAULT_GRAD_TOL)?,
        morse_tol: scalar(args.morse_tol, &file, "morse_tol", DEFAULT_MORSE_TOL)?,
        supp_tol: scalar(args.supp_tol, &file, "supp_tol", DEFAULT_SUPP_TOL)?,
        rank_tol: scalar(args.rank_tol, &file, "rank_tol", DEFAULT_RANK_TOL)?,
        dedup_radius: scalar(args.dedup_radius, &file, "dedup_radius", DEFAULT_DEDUP_RADIUS)?,
        format,
        out: args
            .out
            .as_ref()
            .map(|p| p.display().to_string())
            .or_else(|| file.get("out").cloned()),
        phi_log: args
            .phi_log
            .as_ref()
            .map(|p| p.display().to_string())
            .or_else(|| file.get("phi_log").cloned()),
    })
}

fn scalar<T: FromStr + Copy>(
    cli: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    if let Some(value) = cli {
        return Ok(value);
    }
    match file.get(key) {
        Some(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("config key {key}: cannot parse `{raw}`"))),
        None => Ok(default),
    }
}

fn axis_list(
    cli: Option<&str>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<Vec<usize>>, CliError> {
    let raw = match cli {
        Some(s) => Some(s.to_string()),
        None => file.get(key).cloned(),
    };
    let Some(raw) = raw else {
        return Ok(None);
    };
    let values = raw
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| CliError::input(format!("{key}: cannot parse `{}`", part.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() || values.contains(&0) {
        return Err(CliError::input(format!("{key}: values must be positive")));
    }
    Ok(Some(values))
}
