//! Charts, jets, and atlases of immersed compact manifolds.
//!
//! A chart carries a box domain (axes may be periodic), a jet source, and an
//! immersion tolerance. Jets hold the image point, first derivatives, and
//! symmetric second derivatives in packed upper-triangular order. Charts can
//! be pushed forward through a smooth ambient map, which is how reparametrized
//! and composite surfaces (affine images, radial scalings, embeddings into a
//! larger space) are built without new closed forms.
//!
//! Atlases never use transition maps: points from different charts are
//! identified purely by ambient distance.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default relative cross-chart identification radius (times the diameter).
pub const OVERLAP_DEDUP_REL: f64 = 1e-6;

/// Default relative finite-difference step (times the domain box diameter).
pub const FD_STEP_REL: f64 = 1e-5;

/// Default relative immersion tolerance for the smallest singular value.
pub const RANK_TOL: f64 = 1e-6;

/// Box domain with optionally periodic axes.
#[derive(Debug, Clone)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub periodic: Vec<bool>,
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, periodic: Vec<bool>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert_eq!(lo.len(), periodic.len());
        Self { lo, hi, periodic }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn span(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    /// Box diameter of the parameter domain.
    pub fn diameter(&self) -> f64 {
        (0..self.dim()).map(|k| self.span(k).powi(2)).sum::<f64>().sqrt()
    }

    /// Wraps periodic coordinates into `[lo, hi)`; leaves the rest untouched.
    pub fn wrap(&self, u: &mut [f64]) {
        for k in 0..self.dim() {
            if self.periodic[k] {
                let span = self.span(k);
                let mut x = (u[k] - self.lo[k]) % span;
                if x < 0.0 {
                    x += span;
                }
                u[k] = self.lo[k] + x;
            }
        }
    }

    /// Containment after wrapping periodic axes.
    pub fn contains(&self, u: &[f64]) -> bool {
        u.iter().enumerate().all(|(k, &x)| {
            self.periodic[k] || (x >= self.lo[k] - 1e-12 && x <= self.hi[k] + 1e-12)
        })
    }
}

/// Packed index of the symmetric pair `(i, j)`, `i <= j`, among `n` axes.
#[inline]
pub fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * n - i + 1) / 2 + (j - i)
}

/// Number of packed symmetric pairs for `n` axes.
#[inline]
pub fn sym_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Second-order jet of an immersion at one parameter point.
#[derive(Debug, Clone)]
pub struct ImmersionJet {
    pub point: DVector<f64>,
    /// First derivatives along each chart axis.
    pub d1: Vec<DVector<f64>>,
    /// Second derivatives in packed `sym_index` order.
    pub d2: Vec<DVector<f64>>,
}

impl ImmersionJet {
    pub fn d2_at(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.d2[sym_index(self.d1.len(), i, j)]
    }
}

type JetFn = dyn Fn(&[f64]) -> ImmersionJet + Send + Sync;
type ValueFn = dyn Fn(&[f64]) -> DVector<f64> + Send + Sync;

/// Where a chart gets its jets from.
#[derive(Clone)]
pub enum JetSource {
    /// Closed-form jet.
    Analytic(Arc<JetFn>),
    /// Central finite differences of a value map with absolute step `step`.
    FiniteDifference { value: Arc<ValueFn>, step: f64 },
}

/// One coordinate chart of an immersed manifold.
#[derive(Clone)]
pub struct Chart {
    pub id: String,
    pub domain: Domain,
    pub ambient_dim: usize,
    pub rank_tol: f64,
    /// Preferred per-axis seed resolution for sweeps over this chart.
    pub seed_hint: Option<Vec<usize>>,
    source: JetSource,
}

impl Chart {
    pub fn analytic(
        id: impl Into<String>,
        domain: Domain,
        ambient_dim: usize,
        jet: impl Fn(&[f64]) -> ImmersionJet + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            domain,
            ambient_dim,
            rank_tol: RANK_TOL,
            seed_hint: None,
            source: JetSource::Analytic(Arc::new(jet)),
        }
    }

    pub fn finite_difference(
        id: impl Into<String>,
        domain: Domain,
        ambient_dim: usize,
        value: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        let step = FD_STEP_REL * domain.diameter();
        Self {
            id: id.into(),
            domain,
            ambient_dim,
            rank_tol: RANK_TOL,
            seed_hint: None,
            source: JetSource::FiniteDifference {
                value: Arc::new(value),
                step,
            },
        }
    }

    pub fn with_seed_hint(mut self, hint: Vec<usize>) -> Self {
        self.seed_hint = Some(hint);
        self
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Image point only; cheaper than a full jet for finite-difference charts.
    pub fn eval_point(&self, u: &[f64]) -> Result<DVector<f64>> {
        if !self.domain.contains(u) {
            return Err(Error::OutsideDomain {
                chart: self.id.clone(),
                at: u.to_vec(),
            });
        }
        let mut w = u.to_vec();
        self.domain.wrap(&mut w);
        Ok(match &self.source {
            JetSource::Analytic(jet) => jet(&w).point,
            JetSource::FiniteDifference { value, .. } => value(&w),
        })
    }

    /// Full jet with the immersion condition enforced: the smallest singular
    /// value of the differential must exceed `rank_tol` relative to its
    /// root-mean-square singular value.
    pub fn eval_jet(&self, u: &[f64]) -> Result<ImmersionJet> {
        if !self.domain.contains(u) {
            return Err(Error::OutsideDomain {
                chart: self.id.clone(),
                at: u.to_vec(),
            });
        }
        let mut w = u.to_vec();
        self.domain.wrap(&mut w);
        let jet = match &self.source {
            JetSource::Analytic(jet) => jet(&w),
            JetSource::FiniteDifference { value, step } => fd_jet(value.as_ref(), &w, *step),
        };
        let n = self.dim();
        debug_assert_eq!(jet.d1.len(), n);
        debug_assert_eq!(jet.d2.len(), sym_len(n));
        // Gram-determinant form of the relative smallest-singular-value test.
        let mut gram = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let g = jet.d1[i].dot(&jet.d1[j]);
                gram[(i, j)] = g;
                gram[(j, i)] = g;
            }
        }
        let rms2 = gram.trace() / n as f64;
        let det = gram.determinant();
        let floor = (self.rank_tol * self.rank_tol * rms2).powi(n as i32);
        if !(det > floor) {
            let sigma = if rms2 > 0.0 {
                (det.max(0.0) / rms2.powi(n as i32 - 1)).sqrt() / rms2.sqrt()
            } else {
                0.0
            };
            return Err(Error::DegenerateJet {
                chart: self.id.clone(),
                at: u.to_vec(),
                sigma,
                tol: self.rank_tol,
            });
        }
        Ok(jet)
    }

    /// Pushforward of the chart through an ambient map.
    pub fn compose(self, map: &AmbientMap) -> Chart {
        let source = match self.source {
            JetSource::Analytic(jet) => {
                let map = map.clone();
                JetSource::Analytic(Arc::new(move |u: &[f64]| map.push_jet(&jet(u))))
            }
            JetSource::FiniteDifference { value, step } => {
                let map = map.clone();
                JetSource::FiniteDifference {
                    value: Arc::new(move |u: &[f64]| map.eval(&value(u))),
                    step,
                }
            }
        };
        Chart {
            ambient_dim: map.out_dim,
            source,
            ..self
        }
    }
}

fn fd_jet(value: &ValueFn, u: &[f64], h: f64) -> ImmersionJet {
    let n = u.len();
    let point = value(u);
    let shift = |du: &[(usize, f64)]| {
        let mut w = u.to_vec();
        for &(k, d) in du {
            w[k] += d;
        }
        value(&w)
    };
    let mut d1 = Vec::with_capacity(n);
    for k in 0..n {
        let plus = shift(&[(k, h)]);
        let minus = shift(&[(k, -h)]);
        d1.push((plus - minus) / (2.0 * h));
    }
    let mut d2 = Vec::with_capacity(sym_len(n));
    for i in 0..n {
        for j in i..n {
            if i == j {
                let plus = shift(&[(i, h)]);
                let minus = shift(&[(i, -h)]);
                d2.push((plus + minus - &point * 2.0) / (h * h));
            } else {
                let pp = shift(&[(i, h), (j, h)]);
                let pm = shift(&[(i, h), (j, -h)]);
                let mp = shift(&[(i, -h), (j, h)]);
                let mm = shift(&[(i, -h), (j, -h)]);
                d2.push((pp - pm - mp + mm) / (4.0 * h * h));
            }
        }
    }
    ImmersionJet { point, d1, d2 }
}

type MapFn = dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync;
type JacFn = dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync;
type HessFn = dyn Fn(&DVector<f64>) -> Vec<DMatrix<f64>> + Send + Sync;

/// Smooth map between ambient spaces with first and second derivatives;
/// pushes jets forward by the chain rule.
#[derive(Clone)]
pub struct AmbientMap {
    pub out_dim: usize,
    eval: Arc<MapFn>,
    jac: Arc<JacFn>,
    /// Component Hessians, one symmetric matrix per output coordinate.
    hess: Arc<HessFn>,
}

impl AmbientMap {
    pub fn new(
        out_dim: usize,
        eval: impl Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
        jac: impl Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync + 'static,
        hess: impl Fn(&DVector<f64>) -> Vec<DMatrix<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            out_dim,
            eval: Arc::new(eval),
            jac: Arc::new(jac),
            hess: Arc::new(hess),
        }
    }

    /// Affine map `x -> A x + b`; `A` may be rectangular.
    pub fn affine(a: DMatrix<f64>, b: DVector<f64>) -> Self {
        assert_eq!(a.nrows(), b.len());
        let out = a.nrows();
        let in_dim = a.ncols();
        let a2 = a.clone();
        Self {
            out_dim: out,
            eval: Arc::new(move |x: &DVector<f64>| &a * x + &b),
            jac: Arc::new(move |_x: &DVector<f64>| a2.clone()),
            hess: Arc::new(move |_x: &DVector<f64>| vec![DMatrix::zeros(in_dim, in_dim); out]),
        }
    }

    pub fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.eval)(x)
    }

    pub fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        (self.jac)(x)
    }

    /// One symmetric matrix of second derivatives per output coordinate.
    pub fn component_hessians(&self, x: &DVector<f64>) -> Vec<DMatrix<f64>> {
        (self.hess)(x)
    }

    /// Linear part applied to a tangent/transversal vector at `x`.
    pub fn push_vector(&self, x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        self.jacobian(x) * v
    }

    /// Chain + product rule on a full second-order jet.
    pub fn push_jet(&self, jet: &ImmersionJet) -> ImmersionJet {
        let p = &jet.point;
        let j = self.jacobian(p);
        let h = (self.hess)(p);
        let n = jet.d1.len();
        let point = self.eval(p);
        let d1: Vec<DVector<f64>> = jet.d1.iter().map(|v| &j * v).collect();
        let mut d2 = Vec::with_capacity(jet.d2.len());
        for i in 0..n {
            for jj in i..n {
                let mut out = &j * jet.d2_at(i, jj);
                for (c, hc) in h.iter().enumerate() {
                    out[c] += (hc * &jet.d1[jj]).dot(&jet.d1[i]);
                }
                d2.push(out);
            }
        }
        ImmersionJet { point, d1, d2 }
    }
}

/// One sampled parameter point with its ambient image.
#[derive(Debug, Clone)]
pub struct Sample {
    pub chart: usize,
    pub u: Vec<f64>,
    pub point: DVector<f64>,
}

/// A covering family of charts with ambient-distance identification.
#[derive(Clone)]
pub struct Atlas {
    pub charts: Vec<Chart>,
    pub betti: Option<Vec<usize>>,
    /// Ambient distance below which two sampled points are identified.
    pub overlap_dedup_radius: f64,
    diameter: f64,
}

impl Atlas {
    /// Builds the atlas and estimates the ambient diameter from a coarse
    /// sweep; the identification radius is relative to that diameter.
    pub fn new(charts: Vec<Chart>, betti: Option<Vec<usize>>) -> Result<Self> {
        Self::with_dedup(charts, betti, OVERLAP_DEDUP_REL)
    }

    pub fn with_dedup(
        charts: Vec<Chart>,
        betti: Option<Vec<usize>>,
        dedup_rel: f64,
    ) -> Result<Self> {
        if charts.is_empty() {
            return Err(Error::DegenerateInput("atlas with no charts".into()));
        }
        let dim = charts[0].dim();
        let ambient = charts[0].ambient_dim;
        for c in &charts {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
            if c.ambient_dim != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: c.ambient_dim,
                });
            }
        }
        let mut atlas = Self {
            charts,
            betti,
            overlap_dedup_radius: 0.0,
            diameter: 0.0,
        };
        let coarse = atlas.raw_samples(&vec![8; dim])?;
        let mut diam: f64 = 0.0;
        for i in 0..coarse.len() {
            for j in (i + 1)..coarse.len() {
                diam = diam.max((&coarse[i].point - &coarse[j].point).norm());
            }
        }
        if diam <= 0.0 {
            return Err(Error::DegenerateInput(
                "atlas image has zero diameter".into(),
            ));
        }
        atlas.diameter = diam;
        atlas.overlap_dedup_radius = dedup_rel * diam;
        Ok(atlas)
    }

    pub fn dim(&self) -> usize {
        self.charts[0].dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.charts[0].ambient_dim
    }

    /// Ambient diameter estimated at construction time.
    pub fn ambient_diameter(&self) -> f64 {
        self.diameter
    }

    /// Euler characteristic from the Betti numbers, when present.
    pub fn euler_characteristic(&self) -> Option<i64> {
        self.betti.as_ref().map(|b| {
            b.iter()
                .enumerate()
                .map(|(k, &bk)| if k % 2 == 0 { bk as i64 } else { -(bk as i64) })
                .sum()
        })
    }

    /// Per-axis grid of one chart: periodic axes get an endpoint-free uniform
    /// grid, non-periodic axes are shifted to cell centers.
    pub fn chart_grid(&self, chart: usize, res: &[usize]) -> Vec<Vec<f64>> {
        let c = &self.charts[chart];
        let n = c.dim();
        assert_eq!(res.len(), n);
        let axes: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let span = c.domain.span(k);
                let r = res[k].max(1);
                (0..r)
                    .map(|j| {
                        if c.domain.periodic[k] {
                            c.domain.lo[k] + j as f64 * span / r as f64
                        } else {
                            c.domain.lo[k] + (j as f64 + 0.5) * span / r as f64
                        }
                    })
                    .collect()
            })
            .collect();
        let total: usize = axes.iter().map(Vec::len).product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            out.push((0..n).map(|k| axes[k][idx[k]]).collect());
            for k in (0..n).rev() {
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
        out
    }

    fn raw_samples(&self, res: &[usize]) -> Result<Vec<Sample>> {
        let mut out = Vec::new();
        for (ci, chart) in self.charts.iter().enumerate() {
            for u in self.chart_grid(ci, res) {
                let point = chart.eval_point(&u)?;
                out.push(Sample {
                    chart: ci,
                    u,
                    point,
                });
            }
        }
        Ok(out)
    }

    /// Deterministic parameter sweep over every chart, deduplicated across
    /// charts by ambient distance. Chart order, then row-major grid order;
    /// the first occurrence of an ambient point wins.
    pub fn sample_parameters(&self, res: &[usize]) -> Result<Vec<Sample>> {
        let raw = self.raw_samples(res)?;
        Ok(dedup_by_radius(raw, self.overlap_dedup_radius))
    }

    /// Sweep at each chart's preferred seed resolution (fallback per axis: 16).
    pub fn sample_default(&self) -> Result<Vec<Sample>> {
        let mut out = Vec::new();
        for (ci, chart) in self.charts.iter().enumerate() {
            let res = chart
                .seed_hint
                .clone()
                .unwrap_or_else(|| vec![16; chart.dim()]);
            for u in self.chart_grid(ci, &res) {
                let point = chart.eval_point(&u)?;
                out.push(Sample {
                    chart: ci,
                    u,
                    point,
                });
            }
        }
        Ok(dedup_by_radius(out, self.overlap_dedup_radius))
    }
}

/// Keeps the first sample of every ambient-distance cluster; grid hashing
/// keeps the scan linear.
pub fn dedup_by_radius(samples: Vec<Sample>, radius: f64) -> Vec<Sample> {
    if radius <= 0.0 {
        return samples;
    }
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut kept: Vec<Sample> = Vec::with_capacity(samples.len());
    let inv = 1.0 / radius;
    'outer: for s in samples {
        let cell: Vec<i64> = s.point.iter().map(|x| (x * inv).floor() as i64).collect();
        let dim = cell.len();
        let mut neighbor = cell.clone();
        let combos = 3usize.pow(dim as u32);
        for c in 0..combos {
            let mut t = c;
            for k in 0..dim {
                neighbor[k] = cell[k] + (t % 3) as i64 - 1;
                t /= 3;
            }
            if let Some(ids) = grid.get(&neighbor) {
                for &i in ids {
                    if (&kept[i].point - &s.point).norm() <= radius {
                        continue 'outer;
                    }
                }
            }
        }
        grid.entry(cell).or_default().push(kept.len());
        kept.push(s);
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn torus_value(u: &[f64]) -> DVector<f64> {
        let (r, a) = (2.0, 1.0);
        let (cu, su) = (u[0].cos(), u[0].sin());
        let (cv, sv) = (u[1].cos(), u[1].sin());
        DVector::from_column_slice(&[(r + a * cu) * cv, (r + a * cu) * sv, a * su])
    }

    fn torus_jet(u: &[f64]) -> ImmersionJet {
        let (r, a) = (2.0, 1.0);
        let (cu, su) = (u[0].cos(), u[0].sin());
        let (cv, sv) = (u[1].cos(), u[1].sin());
        let w = r + a * cu;
        ImmersionJet {
            point: DVector::from_column_slice(&[w * cv, w * sv, a * su]),
            d1: vec![
                DVector::from_column_slice(&[-a * su * cv, -a * su * sv, a * cu]),
                DVector::from_column_slice(&[-w * sv, w * cv, 0.0]),
            ],
            d2: vec![
                DVector::from_column_slice(&[-a * cu * cv, -a * cu * sv, -a * su]),
                DVector::from_column_slice(&[a * su * sv, -a * su * cv, 0.0]),
                DVector::from_column_slice(&[-w * cv, -w * sv, 0.0]),
            ],
        }
    }

    fn torus_domain() -> Domain {
        Domain::new(vec![-PI, -PI], vec![PI, PI], vec![true, true])
    }

    fn sphere_jet(u: &[f64]) -> ImmersionJet {
        let (st, ct) = (u[0].sin(), u[0].cos());
        let (cv, sv) = (u[1].cos(), u[1].sin());
        ImmersionJet {
            point: DVector::from_column_slice(&[st * cv, st * sv, ct]),
            d1: vec![
                DVector::from_column_slice(&[ct * cv, ct * sv, -st]),
                DVector::from_column_slice(&[-st * sv, st * cv, 0.0]),
            ],
            d2: vec![
                DVector::from_column_slice(&[-st * cv, -st * sv, -ct]),
                DVector::from_column_slice(&[-ct * sv, ct * cv, 0.0]),
                DVector::from_column_slice(&[-st * cv, -st * sv, 0.0]),
            ],
        }
    }

    #[test]
    fn sphere_jet_at_the_equator() {
        let dom = Domain::new(vec![0.3, -PI], vec![PI - 0.3, PI], vec![false, true]);
        let chart = Chart::analytic("sphere", dom, 3, sphere_jet);
        let jet = chart.eval_jet(&[PI / 2.0, 0.0]).unwrap();
        assert_abs_diff_eq!(jet.point[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(jet.d1[0][2], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(jet.d1[1][1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn finite_difference_jet_matches_analytic_on_the_torus() {
        let fd = Chart::finite_difference("torus-fd", torus_domain(), 3, torus_value);
        let an = Chart::analytic("torus", torus_domain(), 3, torus_jet);
        for u in [[0.3, -1.2], [1.9, 2.8], [-2.4, 0.1]] {
            let a = an.eval_jet(&u).unwrap();
            let f = fd.eval_jet(&u).unwrap();
            assert!((&a.point - &f.point).norm() < 1e-10);
            for k in 0..2 {
                assert!((&a.d1[k] - &f.d1[k]).norm() < 1e-6);
            }
            for k in 0..3 {
                assert!((&a.d2[k] - &f.d2[k]).norm() < 1e-4);
            }
        }
    }

    #[test]
    fn jet_symmetry_is_preserved_by_packing() {
        let an = Chart::analytic("torus", torus_domain(), 3, torus_jet);
        let jet = an.eval_jet(&[0.7, -0.4]).unwrap();
        assert_eq!(
            jet.d2_at(0, 1) as *const DVector<f64>,
            jet.d2_at(1, 0) as *const DVector<f64>
        );
        assert_eq!(sym_index(3, 2, 0), sym_index(3, 0, 2));
    }

    #[test]
    fn out_of_domain_and_degenerate_jets_error() {
        let dom = Domain::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![false, false]);
        let chart = Chart::analytic("line", dom, 3, |u: &[f64]| ImmersionJet {
            point: DVector::from_column_slice(&[u[0], 2.0 * u[0], 0.0]),
            d1: vec![
                DVector::from_column_slice(&[1.0, 2.0, 0.0]),
                DVector::from_column_slice(&[0.0, 0.0, 0.0]),
            ],
            d2: vec![DVector::zeros(3), DVector::zeros(3), DVector::zeros(3)],
        });
        assert!(matches!(
            chart.eval_jet(&[2.0, 0.5]),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(
            chart.eval_jet(&[0.5, 0.5]),
            Err(Error::DegenerateJet { .. })
        ));
    }

    #[test]
    fn periodic_sampling_counts_and_endpoint_exclusion() {
        let chart = Chart::analytic("torus", torus_domain(), 3, torus_jet);
        let atlas = Atlas::new(vec![chart], Some(vec![1, 2, 1])).unwrap();
        let samples = atlas.sample_parameters(&[4, 4]).unwrap();
        assert_eq!(samples.len(), 16);
        for s in &samples {
            assert!(s.u[0] < PI && s.u[1] < PI);
        }
        assert_eq!(atlas.euler_characteristic(), Some(0));
    }

    #[test]
    fn duplicate_charts_are_identified_by_ambient_distance() {
        let mk = || Chart::analytic("torus", torus_domain(), 3, torus_jet);
        let atlas = Atlas::new(vec![mk(), mk()], None).unwrap();
        let samples = atlas.sample_parameters(&[6, 6]).unwrap();
        assert_eq!(samples.len(), 36);
        for s in &samples {
            assert_eq!(s.chart, 0);
        }
    }

    #[test]
    fn affine_pushforward_matches_direct_composition() {
        let a = DMatrix::from_row_slice(
            4,
            3,
            &[1.0, 0.4, 0.0, 0.0, 1.0, -0.3, 0.2, 0.0, 1.0, 0.5, 0.5, 0.5],
        );
        let b = DVector::from_column_slice(&[0.1, -0.2, 0.3, 0.0]);
        let map = AmbientMap::affine(a.clone(), b.clone());
        let chart = Chart::analytic("torus", torus_domain(), 3, torus_jet).compose(&map);
        let direct = Chart::analytic("direct", torus_domain(), 4, move |u: &[f64]| {
            let jet = torus_jet(u);
            ImmersionJet {
                point: &a * &jet.point + &b,
                d1: jet.d1.iter().map(|v| &a * v).collect(),
                d2: jet.d2.iter().map(|v| &a * v).collect(),
            }
        });
        for u in [[0.4, 1.0], [-1.3, 2.2]] {
            let x = chart.eval_jet(&u).unwrap();
            let y = direct.eval_jet(&u).unwrap();
            assert!((&x.point - &y.point).norm() < 1e-12);
            for k in 0..2 {
                assert!((&x.d1[k] - &y.d1[k]).norm() < 1e-12);
            }
            for k in 0..3 {
                assert!((&x.d2[k] - &y.d2[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn nonlinear_pushforward_uses_component_hessians() {
        // Map (x, y, z) -> (x, y, z + x^2): Hessian of the last component is
        // 2 e1 e1^T, so second derivatives pick up 2 dx_i dx_j.
        let map = AmbientMap::new(
            3,
            |x: &DVector<f64>| DVector::from_column_slice(&[x[0], x[1], x[2] + x[0] * x[0]]),
            |x: &DVector<f64>| {
                let mut j = DMatrix::identity(3, 3);
                j[(2, 0)] = 2.0 * x[0];
                j
            },
            |_x| {
                let mut h = vec![DMatrix::zeros(3, 3); 3];
                h[2][(0, 0)] = 2.0;
                h
            },
        );
        let chart = Chart::analytic("torus", torus_domain(), 3, torus_jet).compose(&map);
        let fd = Chart::finite_difference("fd", torus_domain(), 3, |u: &[f64]| {
            let p = torus_value(u);
            DVector::from_column_slice(&[p[0], p[1], p[2] + p[0] * p[0]])
        });
        let u = [0.9, -0.7];
        let a = chart.eval_jet(&u).unwrap();
        let f = fd.eval_jet(&u).unwrap();
        for k in 0..3 {
            assert!((&a.d2[k] - &f.d2[k]).norm() < 1e-3, "k={k}");
        }
    }
}
