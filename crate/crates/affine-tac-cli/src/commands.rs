//! Subcommand implementations.
//!
//! Handlers load the input immersion (catalog entry or manifest), run the
//! corresponding library pipeline, and package the serializable result with
//! an exit code. Exit 2 is reserved for a failed verdict: the minimality and
//! convexity sides of the equivalence disagreeing, or the degeneracy-gauge
//! assertions not holding.

use affine_tac::catalog::{self, kossowski_check, CatalogEntry, KnownData};
use affine_tac::curvature::{gauss_jacobian_rank, lipschitz_killing_at};
use affine_tac::exterior::UnitEllipsoid;
use affine_tac::geometry::{
    affine_hull_dim, convexity_certify, main_theorem_check, reduce, TheoremConfig,
};
use affine_tac::manifest;
use affine_tac::manifold::FD_STEP_REL;
use affine_tac::morse::SearchConfig;
use affine_tac::tac::{certify_minimal, estimate_tau};
use affine_tac::{par, Error};
use serde::Serialize;
use serde_json::Value;

use crate::config::{RunConfig, DEFAULT_SCAN_RES, DEFAULT_SWEEP_RES};
use crate::output::{histogram_csv, scan_csv, ScanRow};
use crate::CliError;

/// Largest |lambda(0)| accepted by the degeneracy-gauge check.
const LAMBDA_AT_0_TOL: f64 = 1e-8;
/// Smallest |lambda'(0)| accepted by the degeneracy-gauge check.
const DLAMBDA_MIN: f64 = 1e-3;

/// What a handler hands back to the report writer.
pub struct Outcome {
    pub result: Value,
    pub exit: u8,
    pub rejections: usize,
    /// CSV payload replacing the JSON report when plot data was requested.
    pub csv: Option<String>,
    /// JSON lines, one per draw.
    pub phi_log: Option<String>,
}

impl Outcome {
    fn report<T: Serialize>(result: &T) -> Self {
        Self {
            result: serde_json::to_value(result).expect("result types serialize without error"),
            exit: 0,
            rejections: 0,
            csv: None,
            phi_log: None,
        }
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.phi_log.is_some() && cfg.command != "tac" {
        return Err(CliError::input(
            "per-draw diagnostics are only produced by tac",
        ));
    }
    if cfg.format == "csv" && !matches!(cfg.command.as_str(), "tac" | "gauss-scan") {
        return Err(CliError::input(format!(
            "{} has no plot data; csv output applies to tac and gauss-scan",
            cfg.command
        )));
    }
    match cfg.command.as_str() {
        "tac" => tac(cfg),
        "certify-minimal" => certify(cfg),
        "convexity" => convexity(cfg),
        "reduce" => reduce_hull(cfg),
        "theorem" => theorem(cfg),
        "kossowski" => kossowski(cfg),
        "gauss-scan" => gauss_scan(cfg),
        "list" => list(),
        other => Err(CliError::input(format!("unknown command `{other}`"))),
    }
}

fn load_entry(cfg: &RunConfig) -> Result<CatalogEntry, CliError> {
    match (&cfg.entry, &cfg.manifest) {
        (Some(name), None) => Ok(catalog::entry(name)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|err| CliError::input(format!("manifest {path}: {err}")))?;
            let spec = manifest::parse_manifest(&text)?;
            Ok(manifest::build(&spec)?)
        }
        _ => Err(CliError::input(
            "exactly one of --entry or --manifest is required",
        )),
    }
}

/// Expands a one-value-or-per-axis list to `n` axes.
fn expand_res(res: &Option<Vec<usize>>, n: usize, default: usize) -> Result<Vec<usize>, CliError> {
    match res {
        None => Ok(vec![default; n]),
        Some(v) if v.len() == 1 => Ok(vec![v[0]; n]),
        Some(v) if v.len() == n => Ok(v.clone()),
        Some(v) => Err(CliError::input(format!(
            "resolution needs 1 or {n} values, got {}",
            v.len()
        ))),
    }
}

fn search_config(cfg: &RunConfig, n: usize) -> Result<SearchConfig, CliError> {
    let seed_resolution = match &cfg.seed_resolution {
        None => None,
        Some(v) => Some(expand_res(&Some(v.clone()), n, 0)?),
    };
    Ok(SearchConfig {
        seed_resolution,
        grad_tol: cfg.grad_tol,
        morse_tol: cfg.morse_tol,
        dedup_radius_rel: cfg.dedup_radius,
        supp_tol: cfg.supp_tol,
        ..SearchConfig::default()
    })
}

fn tac(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let entry = load_entry(cfg)?;
    let search = search_config(cfg, entry.atlas.dim())?;
    let space = UnitEllipsoid::standard(entry.atlas.ambient_dim());
    let outcome = estimate_tau(
        &entry.atlas,
        entry.frame.id(),
        &space,
        cfg.samples,
        cfg.seed,
        &search,
    )?;
    let phi_log = cfg.phi_log.as_ref().map(|_| {
        let mut lines = String::new();
        for diag in &outcome.diagnostics {
            lines.push_str(&serde_json::to_string(diag).expect("diagnostics serialize"));
            lines.push('\n');
        }
        lines
    });
    let csv = (cfg.format == "csv").then(|| histogram_csv(&outcome.report.histogram));
    Ok(Outcome {
        rejections: outcome.report.non_morse_rejections,
        csv,
        phi_log,
        ..Outcome::report(&outcome.report)
    })
}

fn certify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let entry = load_entry(cfg)?;
    let search = search_config(cfg, entry.atlas.dim())?;
    let space = UnitEllipsoid::standard(entry.atlas.ambient_dim());
    let cert = certify_minimal(
        &entry.atlas,
        entry.frame.id(),
        &space,
        cfg.samples,
        cfg.seed,
        &search,
    )?;
    Ok(Outcome {
        rejections: cert.report.non_morse_rejections,
        ..Outcome::report(&cert)
    })
}

fn convexity(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let entry = load_entry(cfg)?;
    let n = entry.atlas.dim();
    let m = entry.atlas.ambient_dim();
    if m != n + 1 {
        return Err(CliError::input(format!(
            "convexity sweep needs a codimension-one immersion; ambient {m}, manifold {n} \
             (run reduce or theorem for degenerate images)"
        )));
    }
    let res = expand_res(&cfg.resolution, n, DEFAULT_SWEEP_RES)?;
    let report = convexity_certify(
        &entry.atlas,
        &entry.frame,
        &UnitEllipsoid::standard(m),
        &res,
        cfg.supp_tol,
    )?;
    Ok(Outcome::report(&report))
}

#[derive(Serialize)]
struct ReduceStep {
    from_ambient: usize,
    to_ambient: usize,
    xi_slot: usize,
    kappa: f64,
    equiaffine_max_violation: f64,
}

#[derive(Serialize)]
struct ReduceResult {
    ambient_dim: usize,
    hull_dim: usize,
    singular_values: Vec<f64>,
    reduced: bool,
    steps: Vec<ReduceStep>,
    final_ambient_dim: usize,
}

fn reduce_hull(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let entry = load_entry(cfg)?;
    let n = entry.atlas.dim();
    let res = expand_res(&cfg.resolution, n, DEFAULT_SWEEP_RES)?;
    let initial = affine_hull_dim(&entry.atlas, &res, cfg.rank_tol)?;
    let ambient_dim = entry.atlas.ambient_dim();
    let hull_dim = initial.dim;
    let singular_values = initial.singular_values.clone();
    let mut atlas = entry.atlas;
    let mut frame = entry.frame;
    let mut current = initial;
    let mut steps = Vec::new();
    while current.dim < atlas.ambient_dim() {
        let red = reduce(&atlas, &frame, &current, &res)?;
        steps.push(ReduceStep {
            from_ambient: atlas.ambient_dim(),
            to_ambient: red.atlas.ambient_dim(),
            xi_slot: red.xi_slot,
            kappa: red.kappa,
            equiaffine_max_violation: red.equiaffine.max_violation,
        });
        atlas = red.atlas;
        frame = red.frame;
        current = affine_hull_dim(&atlas, &res, cfg.rank_tol)?;
    }
    let result = ReduceResult {
        ambient_dim,
        hull_dim,
        singular_values,
        reduced: !steps.is_empty(),
        steps,
        final_ambient_dim: atlas.ambient_dim(),
    };
    Ok(Outcome::report(&result))
}

fn theorem(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let entry = load_entry(cfg)?;
    let n = entry.atlas.dim();
    let search = search_config(cfg, n)?;
    let sweep_res = match &cfg.resolution {
        None => None,
        Some(v) => Some(expand_res(&Some(v.clone()), n, 0)?),
    };
    let tcfg = TheoremConfig {
        sample_count: cfg.samples,
        seed: cfg.seed,
        search,
        sweep_res,
        rank_tol: cfg.rank_tol,
    };
    let verdict = main_theorem_check(
        &entry.atlas,
        &entry.frame,
        &UnitEllipsoid::standard(entry.atlas.ambient_dim()),
        &tcfg,
    )?;
    let rejections = verdict.tau.non_morse_rejections
        + verdict
            .reduced_tau
            .as_ref()
            .map_or(0, |r| r.non_morse_rejections);
    let exit = if verdict.equivalence_holds { 0 } else { 2 };
    Ok(Outcome {
        exit,
        rejections,
        ..Outcome::report(&verdict)
    })
}

fn kossowski(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let entry = load_entry(cfg)?;
    // A failed positivity or cross-check is a failed claim about the surface,
    // not a crash, so it gets the verdict exit code.
    let report = kossowski_check(&entry).map_err(|err| match err {
        Error::Pathology(msg) => CliError::verdict(format!("degeneracy gauge check: {msg}")),
        other => CliError::from(other),
    })?;
    let pass = report.beta_positive
        && report.lambda_at_0.abs() <= LAMBDA_AT_0_TOL
        && report.dlambda_at_0.abs() > DLAMBDA_MIN;
    Ok(Outcome {
        exit: if pass { 0 } else { 2 },
        ..Outcome::report(&report)
    })
}

#[derive(Serialize)]
struct ScanResult {
    rows: Vec<ScanRow>,
}

fn gauss_scan(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let entry = load_entry(cfg)?;
    let n = entry.atlas.dim();
    if n != 2 || entry.frame.rank() != 1 {
        return Err(CliError::input(
            "gauss-scan needs a two-dimensional manifold with a rank-one frame",
        ));
    }
    let res = expand_res(&cfg.resolution, 2, DEFAULT_SCAN_RES)?;
    let space = UnitEllipsoid::standard(entry.atlas.ambient_dim());
    let mut points = Vec::new();
    for chart in 0..entry.atlas.charts.len() {
        for point in entry.atlas.chart_grid(chart, &res) {
            points.push((chart, point[0], point[1]));
        }
    }
    let rows: Vec<Result<ScanRow, Error>> = par::map_slice(&points, |&(chart, u, v)| {
        let g = lipschitz_killing_at(&entry.atlas, &entry.frame, &space, chart, &[u, v], 1.0)?;
        let sigma_min =
            gauss_jacobian_rank(&entry.atlas, &entry.frame, &space, chart, &[u, v], FD_STEP_REL)?;
        Ok(ScanRow {
            chart: entry.atlas.charts[chart].id.clone(),
            u,
            v,
            g,
            sigma_min,
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let csv = (cfg.format == "csv").then(|| scan_csv(&rows));
    Ok(Outcome {
        csv,
        ..Outcome::report(&ScanResult { rows })
    })
}

#[derive(Serialize)]
struct ListRow {
    name: &'static str,
    manifold_dim: usize,
    ambient_dim: usize,
    charts: usize,
    frame: String,
    known: KnownData,
}

fn list() -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for name in catalog::names() {
        let entry = catalog::entry(name)?;
        rows.push(ListRow {
            name,
            manifold_dim: entry.atlas.dim(),
            ambient_dim: entry.atlas.ambient_dim(),
            charts: entry.atlas.charts.len(),
            frame: entry.frame.id().to_string(),
            known: entry.known,
        });
    }
    Ok(Outcome::report(&rows))
}
