//! Critical points of height functions over a compact atlas.
//!
//! For a covector `φ` the height function is `h_φ(u) = height(φ, f(u))`; its
//! gradient entries are heights of first derivatives and its Hessian entries
//! heights of second derivatives, so the whole search runs on chart jets.
//! The pipeline is grid seeding, damped Newton on the gradient, ambient
//! deduplication, then Hessian classification. At a critical point the
//! chart-coordinate Hessian is tensorial, so no connection correction is
//! applied.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exterior::{height, MultiCovector};
use crate::manifold::{Atlas, Chart, Sample};

/// Default seeding density per axis when a chart carries no hint.
pub const DEFAULT_SEED_RES: usize = 64;

/// Tuning knobs for the critical-point search.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Override for the seeding grid; `None` uses chart hints or the default.
    pub seed_resolution: Option<Vec<usize>>,
    /// Gradient tolerance, scaled by the covector size and atlas diameter.
    pub grad_tol: f64,
    /// Degeneracy threshold on the normalized Hessian determinant.
    pub morse_tol: f64,
    /// Deduplication radius as a fraction of the ambient diameter.
    pub dedup_radius_rel: f64,
    pub max_newton: usize,
    /// Supporting-hyperplane tolerance, scaled like the height values.
    pub supp_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed_resolution: None,
            grad_tol: 1e-9,
            morse_tol: 1e-8,
            dedup_radius_rel: 1e-5,
            max_newton: 50,
            supp_tol: 1e-7,
        }
    }
}

/// One deduplicated critical point of a height function.
#[derive(Debug, Clone)]
pub struct CriticalPointRecord {
    pub chart: usize,
    pub chart_id: String,
    pub u: Vec<f64>,
    pub point: DVector<f64>,
    pub height: f64,
    pub grad_residual: f64,
    pub hessian_signs: Vec<i8>,
    /// Number of negative Hessian eigenvalues.
    pub index: usize,
    pub degenerate: bool,
}

/// Search outcome for one covector.
#[derive(Debug, Clone)]
pub struct MorseCount {
    pub phi: MultiCovector,
    pub records: Vec<CriticalPointRecord>,
    /// True when every record is non-degenerate and at least a minimum and a
    /// maximum were found.
    pub morse: bool,
    pub seeds: usize,
    pub converged: usize,
    pub discarded: usize,
}

impl MorseCount {
    pub fn count(&self) -> usize {
        self.records.len()
    }
}

struct HeightEval {
    grad: DVector<f64>,
    hess: DMatrix<f64>,
    point: DVector<f64>,
    residual: f64,
}

fn eval_height(chart: &Chart, phi: &MultiCovector, u: &[f64]) -> Option<HeightEval> {
    let jet = chart.eval_jet(u).ok()?;
    let n = jet.d1.len();
    let grad = DVector::from_iterator(n, jet.d1.iter().map(|v| height(phi, v)));
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = height(phi, jet.d2_at(i, j));
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    let residual = grad.norm();
    Some(HeightEval {
        grad,
        hess,
        point: jet.point,
        residual,
    })
}

enum NewtonOutcome {
    Converged { u: Vec<f64>, eval: HeightEval },
    Discarded,
}

fn newton_from_seed(
    chart: &Chart,
    phi: &MultiCovector,
    seed: &[f64],
    tol: f64,
    max_newton: usize,
) -> NewtonOutcome {
    let n = chart.dim();
    let max_span = (0..n)
        .map(|k| chart.domain.span(k))
        .fold(0.0_f64, f64::max);
    let step_cap = 0.2 * max_span;
    let mut u = seed.to_vec();
    let Some(mut cur) = eval_height(chart, phi, &u) else {
        return NewtonOutcome::Discarded;
    };
    for _ in 0..max_newton {
        if cur.residual < tol {
            return NewtonOutcome::Converged { u, eval: cur };
        }
        let Some(delta) = cur.hess.clone().lu().solve(&(-&cur.grad)) else {
            return NewtonOutcome::Discarded;
        };
        let mut step = delta;
        let biggest = step.amax();
        if biggest > step_cap {
            step *= step_cap / biggest;
        }
        let mut s = 1.0;
        loop {
            let mut trial = u.clone();
            for k in 0..n {
                trial[k] += s * step[k];
            }
            chart.domain.wrap(&mut trial);
            if let Some(next) = eval_height(chart, phi, &trial) {
                if next.residual < cur.residual {
                    u = trial;
                    cur = next;
                    break;
                }
            }
            s *= 0.5;
            if s < 1.0 / 64.0 {
                return NewtonOutcome::Discarded;
            }
        }
    }
    NewtonOutcome::Discarded
}

fn seed_grid(atlas: &Atlas, config: &SearchConfig) -> Result<Vec<Sample>> {
    if let Some(res) = &config.seed_resolution {
        return atlas.sample_parameters(res);
    }
    let mut out = Vec::new();
    for (c, chart) in atlas.charts.iter().enumerate() {
        let res = chart
            .seed_hint
            .clone()
            .unwrap_or_else(|| vec![DEFAULT_SEED_RES; chart.dim()]);
        for u in atlas.chart_grid(c, &res) {
            // Seeds do not need ambient images; fill lazily in Newton.
            out.push(Sample {
                chart: c,
                u,
                point: DVector::zeros(0),
            });
        }
    }
    Ok(out)
}

/// Finds and classifies the critical points of `h_φ` over the atlas.
pub fn find_critical_points(
    atlas: &Atlas,
    phi: &MultiCovector,
    config: &SearchConfig,
) -> Result<MorseCount> {
    if phi.is_zero(0.0) {
        return Err(Error::DegenerateInput("zero covector has no heights".into()));
    }
    let n = atlas.dim();
    let diameter = atlas.ambient_diameter();
    let tol = config.grad_tol * phi.norm_inf() * diameter.max(f64::MIN_POSITIVE);
    let seeds = seed_grid(atlas, config)?;
    let mut candidates: Vec<(usize, Vec<f64>, HeightEval)> = Vec::new();
    let mut discarded = 0usize;
    for seed in &seeds {
        match newton_from_seed(
            &atlas.charts[seed.chart],
            phi,
            &seed.u,
            tol,
            config.max_newton,
        ) {
            NewtonOutcome::Converged { u, eval } => candidates.push((seed.chart, u, eval)),
            NewtonOutcome::Discarded => discarded += 1,
        }
    }
    let converged = candidates.len();
    // Lowest residual represents each ambient cluster; ties broken by chart
    // and coordinates for a deterministic record list.
    candidates.sort_by(|a, b| {
        a.2.residual
            .partial_cmp(&b.2.residual)
            .unwrap()
            .then(a.0.cmp(&b.0))
            .then(a.1.partial_cmp(&b.1).unwrap())
    });
    let radius = config.dedup_radius_rel * diameter;
    let mut kept: Vec<(usize, Vec<f64>, HeightEval)> = Vec::new();
    for cand in candidates {
        if kept
            .iter()
            .all(|k| (&k.2.point - &cand.2.point).norm() > radius)
        {
            kept.push(cand);
        }
    }
    let phi_scale = phi.norm_inf();
    let mut records: Vec<CriticalPointRecord> = kept
        .into_iter()
        .map(|(chart, u, eval)| {
            let normalized = &eval.hess / phi_scale;
            let degenerate = normalized.determinant().abs() < config.morse_tol;
            let eigen = normalized.symmetric_eigen();
            let hessian_signs: Vec<i8> = eigen
                .eigenvalues
                .iter()
                .map(|&l| if l < 0.0 { -1 } else { 1 })
                .collect();
            let index = hessian_signs.iter().filter(|&&s| s < 0).count();
            CriticalPointRecord {
                chart,
                chart_id: atlas.charts[chart].id.clone(),
                u,
                height: height(phi, &eval.point),
                point: eval.point,
                grad_residual: eval.residual,
                hessian_signs,
                index,
                degenerate,
            }
        })
        .collect();
    records.sort_by(|a, b| {
        a.height
            .partial_cmp(&b.height)
            .unwrap()
            .then(a.chart.cmp(&b.chart))
            .then(a.u.partial_cmp(&b.u).unwrap())
    });
    let non_degenerate = records.iter().all(|r| !r.degenerate);
    let has_min = records.iter().any(|r| r.index == 0);
    let has_max = records.iter().any(|r| r.index == n);
    let morse = non_degenerate && records.len() >= 2 && has_min && has_max;
    Ok(MorseCount {
        phi: phi.clone(),
        records,
        morse,
        seeds: seeds.len(),
        converged,
        discarded,
    })
}

/// True when the height of every sample lies on one side of the record's
/// level, i.e. the hyperplane through the record supports the image.
pub fn is_supporting_direction(
    atlas: &Atlas,
    phi: &MultiCovector,
    record: &CriticalPointRecord,
    samples: &[Sample],
    supp_tol: f64,
) -> bool {
    let scale = phi.norm_inf() * atlas.ambient_diameter();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in samples {
        let d = height(phi, &s.point) - record.height;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    lo >= -supp_tol * scale || hi <= supp_tol * scale
}
