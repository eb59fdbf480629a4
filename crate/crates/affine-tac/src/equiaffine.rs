//! Transversal frames and the tangential/transversal decomposition of second
//! derivatives.
//!
//! For a frame `ξ_1, …, ξ_r` complementing the tangent space, every second
//! derivative splits as `∂_i ∂_j f = Γ^k_ij ∂_k f + α^s_ij ξ_s`. The induced
//! volume is `θ = det [d1 | ξ] / θ^⊥(ξ)`, and the frame is equiaffine when
//! the covariant derivative of `θ` under the induced connection vanishes;
//! `check_equiaffine` measures exactly that defect with finite differences
//! of `θ` against the Christoffel trace.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::manifold::{sym_index, sym_len, Atlas, Chart, ImmersionJet};
use crate::par;

/// Frame data at one parameter point: the transversal vectors, their first
/// derivatives along each chart axis, and the transversal volume of the
/// frame tuple.
#[derive(Debug, Clone)]
pub struct FrameJet {
    pub xi: Vec<DVector<f64>>,
    /// `dxi[s][k]` is the derivative of `ξ_s` along chart axis `k`.
    pub dxi: Vec<Vec<DVector<f64>>>,
    pub theta_perp: f64,
}

type FrameFn = dyn Fn(usize, &[f64]) -> FrameJet + Send + Sync;

/// Transversal frame field, given per chart and parameter point.
#[derive(Clone)]
pub struct TransversalFrame {
    id: String,
    rank: usize,
    eval: Arc<FrameFn>,
}

impl TransversalFrame {
    pub fn new(
        id: impl Into<String>,
        rank: usize,
        eval: impl Fn(usize, &[f64]) -> FrameJet + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            rank,
            eval: Arc::new(eval),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Number of transversal directions (the codimension `r`).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eval(&self, chart: usize, u: &[f64]) -> FrameJet {
        (self.eval)(chart, u)
    }
}

/// Decomposition output at one point: Christoffel symbols, the affine
/// fundamental form in frame coefficients and as ambient vectors, and the
/// induced volume `θ`.
#[derive(Debug, Clone)]
pub struct FundamentalData {
    dim: usize,
    rank: usize,
    /// `gamma[k][(i, j)]` is `Γ^k_ij`.
    pub gamma: Vec<DMatrix<f64>>,
    /// Frame coefficients of `α(∂_i, ∂_j)`, packed like `sym_index`.
    pub alpha: Vec<DVector<f64>>,
    /// Ambient value of `α(∂_i, ∂_j)`, packed like `sym_index`.
    pub alpha_ambient: Vec<DVector<f64>>,
    pub theta_value: f64,
}

impl FundamentalData {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn christoffel(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[k][(i, j)]
    }

    pub fn alpha_coeffs(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.alpha[sym_index(self.dim, i, j)]
    }

    pub fn alpha_vector(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.alpha_ambient[sym_index(self.dim, i, j)]
    }

    /// `Σ_i Γ^i_{ki}`: the Christoffel trace entering the volume derivative.
    pub fn christoffel_trace(&self, k: usize) -> f64 {
        (0..self.dim).map(|i| self.gamma[i][(k, i)]).sum()
    }

    /// Determinant of the matrix of `α` coefficients along a single frame
    /// direction `s`; only meaningful together with a height pairing.
    pub fn alpha_det(&self, s: usize) -> f64 {
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.alpha[sym_index(n, i, j)][s];
            }
        }
        m.determinant()
    }
}

/// Splits every second derivative of `jet` into tangential and transversal
/// parts against `frame`, and computes the induced volume.
pub fn decompose(jet: &ImmersionJet, frame: &FrameJet) -> Result<FundamentalData> {
    let m = jet.point.len();
    let n = jet.d1.len();
    let r = frame.xi.len();
    if n + r != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: n + r,
        });
    }
    if frame.theta_perp == 0.0 {
        return Err(Error::DegenerateInput(
            "frame has zero transversal volume".into(),
        ));
    }
    let mut a = DMatrix::zeros(m, m);
    for (c, v) in jet.d1.iter().chain(frame.xi.iter()).enumerate() {
        a.set_column(c, v);
    }
    let lu = a.lu();
    let det = lu.determinant();
    // Relative invertibility floor keeps failure scale-free.
    let scale = jet
        .d1
        .iter()
        .chain(frame.xi.iter())
        .map(|v| v.norm())
        .fold(1.0_f64, f64::max);
    if det.abs() <= 1e-14 * scale.powi(m as i32) {
        return Err(Error::DegenerateInput(
            "transversality failure: frame does not complement the tangent".into(),
        ));
    }
    let mut gamma = vec![DMatrix::zeros(n, n); n];
    let mut alpha = Vec::with_capacity(sym_len(n));
    let mut alpha_ambient = Vec::with_capacity(sym_len(n));
    for i in 0..n {
        for j in i..n {
            let rhs = jet.d2_at(i, j);
            let c = lu
                .solve(rhs)
                .ok_or_else(|| Error::DegenerateInput("singular decomposition solve".into()))?;
            for k in 0..n {
                gamma[k][(i, j)] = c[k];
                gamma[k][(j, i)] = c[k];
            }
            let coeffs = DVector::from_iterator(r, (0..r).map(|s| c[n + s]));
            let mut amb = DVector::zeros(m);
            for s in 0..r {
                amb += &frame.xi[s] * coeffs[s];
            }
            alpha.push(coeffs);
            alpha_ambient.push(amb);
        }
    }
    Ok(FundamentalData {
        dim: n,
        rank: r,
        gamma,
        alpha,
        alpha_ambient,
        theta_value: det / frame.theta_perp,
    })
}

/// Jet + frame + decomposition at an atlas point, with chart context in
/// errors.
pub fn fundamental_at(
    atlas: &Atlas,
    frame: &TransversalFrame,
    chart: usize,
    u: &[f64],
) -> Result<FundamentalData> {
    let jet = atlas.charts[chart].eval_jet(u)?;
    let fj = frame.eval(chart, u);
    decompose(&jet, &fj).map_err(|e| match e {
        Error::DegenerateInput(msg) if msg.starts_with("transversality") => Error::Transversality {
            chart: atlas.charts[chart].id.clone(),
            at: u.to_vec(),
        },
        other => other,
    })
}

/// Result of the equiaffine test: the largest covariant-derivative defect of
/// the induced volume over the sampled points.
#[derive(Debug, Clone, Serialize)]
pub struct EquiaffineReport {
    pub max_violation: f64,
    pub samples: usize,
    pub worst_chart: String,
    pub worst_u: Vec<f64>,
}

/// Measures `∂_k θ - Σ_i Γ^i_{ki} θ` over a parameter sweep by central
/// differences of `θ` along each axis.
pub fn check_equiaffine(
    atlas: &Atlas,
    frame: &TransversalFrame,
    res: &[usize],
) -> Result<EquiaffineReport> {
    let samples = atlas.sample_parameters(res)?;
    let evals: Vec<Result<(f64, usize, Vec<f64>)>> = par::map_slice(&samples, |s| {
        let chart = &atlas.charts[s.chart];
        let center = fundamental_at(atlas, frame, s.chart, &s.u)?;
        let mut worst: f64 = 0.0;
        for k in 0..atlas.dim() {
            let h = crate::manifold::FD_STEP_REL * chart.domain.span(k);
            let mut up = s.u.clone();
            up[k] += h;
            let mut dn = s.u.clone();
            dn[k] -= h;
            let tp = fundamental_at(atlas, frame, s.chart, &up)?.theta_value;
            let tm = fundamental_at(atlas, frame, s.chart, &dn)?.theta_value;
            let derivative = (tp - tm) / (2.0 * h);
            let defect = derivative - center.christoffel_trace(k) * center.theta_value;
            worst = worst.max(defect.abs());
        }
        Ok((worst, s.chart, s.u.clone()))
    });
    let mut max_violation: f64 = 0.0;
    let mut worst_chart = String::new();
    let mut worst_u = Vec::new();
    let count = evals.len();
    for e in evals {
        let (v, chart, u) = e?;
        if v >= max_violation {
            max_violation = v;
            worst_chart = atlas.charts[chart].id.clone();
            worst_u = u;
        }
    }
    Ok(EquiaffineReport {
        max_violation,
        samples: count,
        worst_chart,
        worst_u,
    })
}

/// Divisor normalizing an `n x n` determinant of chart-frame values to the
/// `θ`-unimodular frame.
pub fn unimodular_rescale(fd: &FundamentalData) -> Result<f64> {
    if fd.theta_value == 0.0 {
        return Err(Error::DegenerateInput(
            "orientation degeneracy: induced volume is zero".into(),
        ));
    }
    Ok(fd.theta_value * fd.theta_value)
}

/// Cross product in three dimensions.
pub(crate) fn cross3(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    DVector::from_column_slice(&[
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// Unit-normal frame jet of a two-dimensional chart in `R^3`, with analytic
/// first derivatives assembled from the chart jet.
pub(crate) fn unit_normal_jet(jet: &ImmersionJet) -> FrameJet {
    let raw = cross3(&jet.d1[0], &jet.d1[1]);
    let norm = raw.norm();
    let n_hat = &raw / norm;
    let mut dxi_k = Vec::with_capacity(2);
    for k in 0..2 {
        let draw = cross3(jet.d2_at(k, 0), &jet.d1[1]) + cross3(&jet.d1[0], jet.d2_at(k, 1));
        let tangential = &draw - &n_hat * n_hat.dot(&draw);
        dxi_k.push(tangential / norm);
    }
    FrameJet {
        xi: vec![n_hat],
        dxi: vec![dxi_k],
        theta_perp: 1.0,
    }
}

/// Euclidean unit-normal frame for an atlas of surfaces in `R^3`.
pub fn euclidean_normal_frame(charts: Vec<Chart>) -> TransversalFrame {
    TransversalFrame::new("euclidean_normal", 1, move |chart, u| {
        let jet = charts[chart]
            .eval_jet(u)
            .expect("normal frame evaluated outside chart domain");
        unit_normal_jet(&jet)
    })
}

/// Pushforward of a frame through an ambient map over the original charts:
/// vectors transform by the Jacobian, derivatives pick up the map curvature.
pub fn push_frame(
    frame: &TransversalFrame,
    original_charts: Vec<Chart>,
    map: crate::manifold::AmbientMap,
    id: impl Into<String>,
) -> TransversalFrame {
    let rank = frame.rank();
    let inner = frame.clone();
    TransversalFrame::new(id, rank, move |chart, u| {
        let fj = inner.eval(chart, u);
        let jet = original_charts[chart]
            .eval_jet(u)
            .expect("pushed frame evaluated outside chart domain");
        let j = map.jacobian(&jet.point);
        let xi: Vec<DVector<f64>> = fj.xi.iter().map(|v| &j * v).collect();
        let dxi = fj
            .dxi
            .iter()
            .zip(&fj.xi)
            .map(|(ds, xi_s)| {
                ds.iter()
                    .enumerate()
                    .map(|(k, dv)| {
                        // d/du_k (J(f(u)) ξ) = J dξ + (∂J along ∂_k f) ξ
                        let mut out = &j * dv;
                        let h = map_hessian_apply(&map, &jet.point, &jet.d1[k], xi_s);
                        out += h;
                        out
                    })
                    .collect()
            })
            .collect();
        FrameJet {
            xi,
            dxi,
            theta_perp: fj.theta_perp,
        }
    })
}

fn map_hessian_apply(
    map: &crate::manifold::AmbientMap,
    at: &DVector<f64>,
    dir: &DVector<f64>,
    v: &DVector<f64>,
) -> DVector<f64> {
    // Derivative of the Jacobian along `dir`, applied to `v`, assembled from
    // component Hessians by finite differences of the Jacobian would lose
    // accuracy; use the exact bilinear form instead.
    let h = map.component_hessians(at);
    let mut out = DVector::zeros(h.len());
    for (c, hc) in h.iter().enumerate() {
        out[c] = (hc * v).dot(dir);
    }
    out
}
