//! Affine hull detection, codimension reduction, convexity certification,
//! and the combined equivalence verdict.
//!
//! Reduction re-expresses an immersion whose image spans a proper affine
//! subspace in coordinates of that subspace. The new coordinates are scaled
//! so the standard determinant volume equals the old volume with the spare
//! frame vector `ξ` appended as last argument; the reduced transversal
//! volume plugs `ξ` into the old one the same way. With that convention the
//! reduced height functions are the old ones against `ψ ∧ ξ` up to sign, so
//! critical sets are preserved.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::curvature::gauss_at;
use crate::equiaffine::{check_equiaffine, EquiaffineReport, FrameJet, TransversalFrame};
use crate::error::{Error, Result};
use crate::exterior::{height, AffineSpace, UnitEllipsoid};
use crate::manifold::{AmbientMap, Atlas};
use crate::morse::SearchConfig;
use crate::par;
use crate::tac::{certify_minimal, TacReport, Witness};

/// Affine hull of the sampled image.
#[derive(Debug, Clone)]
pub struct HullResult {
    pub dim: usize,
    /// Orthonormal direction basis of the hull, `ambient x dim`.
    pub basis: DMatrix<f64>,
    /// Full orthonormal frame; trailing columns span the unused directions.
    pub full_frame: DMatrix<f64>,
    /// Centroid of the samples.
    pub base_point: DVector<f64>,
    pub singular_values: Vec<f64>,
}

/// Dimension of the affine span of a parameter sweep, by singular values of
/// the centered sample matrix.
pub fn affine_hull_dim(atlas: &Atlas, res: &[usize], rank_tol: f64) -> Result<HullResult> {
    let m = atlas.ambient_dim();
    let samples = atlas.sample_parameters(res)?;
    if samples.len() < m + 1 {
        return Err(Error::DegenerateInput(format!(
            "affine hull needs at least {} samples, got {}",
            m + 1,
            samples.len()
        )));
    }
    let mut base_point = DVector::zeros(m);
    for s in &samples {
        base_point += &s.point;
    }
    base_point /= samples.len() as f64;
    let mut centered = DMatrix::zeros(m, samples.len());
    for (j, s) in samples.iter().enumerate() {
        centered.set_column(j, &(&s.point - &base_point));
    }
    let svd = centered.svd(true, false);
    let sigma: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let top = sigma[0];
    if top <= 0.0 {
        return Err(Error::DegenerateInput(
            "all sampled image points coincide".into(),
        ));
    }
    let dim = sigma.iter().filter(|&&s| s > rank_tol * top).count();
    let full_frame = svd.u.expect("left singular vectors requested");
    let basis = full_frame.columns(0, dim).into_owned();
    Ok(HullResult {
        dim,
        basis,
        full_frame,
        base_point,
        singular_values: sigma,
    })
}

/// An immersion re-expressed in coordinates of a hyperplane containing its
/// image.
#[derive(Clone)]
pub struct ReducedImmersion {
    /// Reduced ambient space; its standard volume realizes the appended-`ξ`
    /// volume through the stored projection.
    pub space: AffineSpace,
    pub atlas: Atlas,
    pub frame: TransversalFrame,
    /// The spare frame vector, in original coordinates.
    pub xi: DVector<f64>,
    /// Frame slot the spare vector came from.
    pub xi_slot: usize,
    /// Affine projection from original to reduced coordinates.
    pub projection: AmbientMap,
    /// Volume of the hull basis with `ξ` appended.
    pub kappa: f64,
    /// Equiaffine defect of the reduced pair, from the validation sweep.
    pub equiaffine: EquiaffineReport,
}

const XI_TRANSVERSAL_TOL: f64 = 1e-8;

/// Drops one ambient dimension: keeps the hull directions, spends one frame
/// vector as the discarded direction, and rebuilds atlas and frame in the
/// new coordinates.
pub fn reduce(
    atlas: &Atlas,
    frame: &TransversalFrame,
    hull: &HullResult,
    check_res: &[usize],
) -> Result<ReducedImmersion> {
    let m = atlas.ambient_dim();
    let r = frame.rank();
    if hull.dim >= m {
        return Err(Error::Reduction(
            "image already spans the ambient space".into(),
        ));
    }
    if r < 2 {
        return Err(Error::Reduction(
            "frame has no vector to spend on the dropped direction".into(),
        ));
    }
    // Direction space of the containing hyperplane: the leading m-1 frame
    // columns. Its unit normal is the trailing column.
    let basis = hull.full_frame.columns(0, m - 1).into_owned();
    let q = hull.full_frame.column(m - 1).into_owned();
    // Pick the frame vector most transversal to the hyperplane, evaluated at
    // the first chart's center.
    let center: Vec<f64> = (0..atlas.dim())
        .map(|k| {
            let d = &atlas.charts[0].domain;
            0.5 * (d.lo[k] + d.hi[k])
        })
        .collect();
    let probe = frame.eval(0, &center);
    let mut best: Option<(usize, f64)> = None;
    for (s, xi) in probe.xi.iter().enumerate() {
        let t = q.dot(xi).abs() / xi.norm();
        if best.map_or(true, |(_, bt)| t > bt) {
            best = Some((s, t));
        }
    }
    let (xi_slot, tilt) = best.expect("frame with positive rank");
    if tilt < XI_TRANSVERSAL_TOL {
        return Err(Error::Reduction(format!(
            "no frame vector leaves the hull: best slot {xi_slot} has relative \
             normal component {tilt:.2e}"
        )));
    }
    let xi = probe.xi[xi_slot].clone();
    let kappa = {
        let mut mat = DMatrix::zeros(m, m);
        for c in 0..m - 1 {
            mat.set_column(c, &basis.column(c));
        }
        mat.set_column(m - 1, &xi);
        mat.determinant()
    };
    // Reduced coordinates T(x) = Λ Bᵀ (x - p0); scaling the first coordinate
    // by κ makes the standard determinant equal to the appended-ξ volume.
    let mut a_mat = basis.transpose();
    {
        let mut first = a_mat.row_mut(0);
        first *= kappa;
    }
    let b_vec = -(&a_mat * &hull.base_point);
    let projection = AmbientMap::affine(a_mat.clone(), b_vec);
    let charts: Vec<_> = atlas
        .charts
        .iter()
        .map(|c| c.clone().compose(&projection))
        .collect();
    let reduced_atlas = Atlas::new(charts, atlas.betti.clone())?;

    let q_dot_xi = q.dot(&xi);
    let inner = frame.clone();
    let orig_charts = atlas.charts.clone();
    let xi_frozen = xi.clone();
    let q_cl = q.clone();
    let a_cl = a_mat.clone();
    let reduced_frame = TransversalFrame::new(
        format!("{}|reduced", frame.id()),
        r - 1,
        move |c, u| {
            let fj = inner.eval(c, u);
            let jet = orig_charts[c]
                .eval_jet(u)
                .expect("reduced frame evaluated outside chart domain");
            let n = jet.d1.len();
            let mut xi_new = Vec::with_capacity(r - 1);
            let mut dxi_new = Vec::with_capacity(r - 1);
            let mut in_plane: Vec<DVector<f64>> = Vec::with_capacity(r - 1);
            for s in 0..r {
                if s == xi_slot {
                    continue;
                }
                // Slide along the spare vector until the hyperplane is hit.
                let coef = q_cl.dot(&fj.xi[s]) / q_dot_xi;
                let v = &fj.xi[s] - &xi_frozen * coef;
                xi_new.push(&a_cl * &v);
                let dks = fj.dxi[s]
                    .iter()
                    .map(|dv| {
                        let dcoef = q_cl.dot(dv) / q_dot_xi;
                        &a_cl * &(dv - &xi_frozen * dcoef)
                    })
                    .collect();
                dxi_new.push(dks);
                in_plane.push(v);
            }
            // New transversal volume: old volume of the slid vectors with ξ
            // appended, via their coordinates in the old frame basis.
            let mut basis_mat = DMatrix::zeros(jet.point.len(), jet.point.len());
            for (col, w) in jet.d1.iter().chain(fj.xi.iter()).enumerate() {
                basis_mat.set_column(col, w);
            }
            let lu = basis_mat.lu();
            let mut cmat = DMatrix::zeros(r, r);
            for (col, w) in in_plane.iter().chain(std::iter::once(&xi_frozen)).enumerate() {
                let coords = lu.solve(w).expect("frame degenerate during reduction");
                for row in 0..r {
                    cmat[(row, col)] = coords[n + row];
                }
            }
            FrameJet {
                xi: xi_new,
                dxi: dxi_new,
                theta_perp: fj.theta_perp * cmat.determinant(),
            }
        },
    );
    let equiaffine = check_equiaffine(&reduced_atlas, &reduced_frame, check_res)?;
    Ok(ReducedImmersion {
        space: AffineSpace::standard(m - 1),
        atlas: reduced_atlas,
        frame: reduced_frame,
        xi,
        xi_slot,
        projection,
        kappa,
        equiaffine,
    })
}

/// Supporting-hyperplane sweep result.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    /// Fraction of sampled points whose tangent hyperplane supports the
    /// whole sampled image.
    pub supporting_fraction: f64,
    /// Largest two-sided overshoot among failing points, relative to the
    /// height scale.
    pub worst_violation: f64,
    /// Ambient location of the worst failure, empty when convex.
    pub worst_point: Vec<f64>,
    pub samples: usize,
}

/// Tests every sampled tangent hyperplane against every sampled image point.
pub fn convexity_certify(
    atlas: &Atlas,
    frame: &TransversalFrame,
    space: &UnitEllipsoid,
    res: &[usize],
    supp_tol: f64,
) -> Result<ConvexityReport> {
    let samples = atlas.sample_parameters(res)?;
    let diameter = atlas.ambient_diameter();
    let verdicts: Vec<Result<(bool, f64)>> = par::map_slice(&samples, |p| {
        let nu = gauss_at(atlas, frame, space, p.chart, &p.u, 1.0)?;
        let level = height(&nu.phi, &p.point);
        let scale = nu.phi.norm_inf() * diameter;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for x in &samples {
            let d = height(&nu.phi, &x.point) - level;
            lo = lo.min(d);
            hi = hi.max(d);
        }
        let supporting = lo >= -supp_tol * scale || hi <= supp_tol * scale;
        // Overshoot of the smaller side, normalized; zero when supporting.
        let violation = if supporting {
            0.0
        } else {
            (-lo).min(hi) / scale
        };
        Ok((supporting, violation))
    });
    let mut supporting_count = 0usize;
    let mut worst_violation = 0.0f64;
    let mut worst_point = Vec::new();
    for (s, v) in samples.iter().zip(verdicts) {
        let (supporting, violation) = v?;
        if supporting {
            supporting_count += 1;
        } else if violation >= worst_violation {
            worst_violation = violation;
            worst_point = s.point.iter().cloned().collect();
        }
    }
    let n = samples.len();
    Ok(ConvexityReport {
        convex: supporting_count == n,
        supporting_fraction: supporting_count as f64 / n as f64,
        worst_violation,
        worst_point,
        samples: n,
    })
}

/// Knobs for the combined equivalence check.
#[derive(Debug, Clone)]
pub struct TheoremConfig {
    pub sample_count: usize,
    pub seed: u64,
    pub search: SearchConfig,
    /// Per-axis resolution for hull and convexity sweeps; `None` uses 24.
    pub sweep_res: Option<Vec<usize>>,
    pub rank_tol: f64,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        Self {
            sample_count: 500,
            seed: 0,
            search: SearchConfig::default(),
            sweep_res: None,
            rank_tol: 1e-6,
        }
    }
}

/// Both sides of the equivalence and whether they agree.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremVerdict {
    pub minimal: bool,
    pub tau: TacReport,
    pub witness: Option<Witness>,
    pub hull_dim: usize,
    pub ambient_dim: usize,
    pub manifold_dim: usize,
    pub reduced: bool,
    pub reduction_equiaffine: Option<EquiaffineReport>,
    pub reduced_tau: Option<TacReport>,
    pub reduced_minimal: Option<bool>,
    pub convex: Option<bool>,
    pub convexity: Option<ConvexityReport>,
    /// minimal ⇔ (hull is one above the manifold dimension AND convex).
    pub equivalence_holds: bool,
}

/// Runs the full pipeline: minimality certificate, hull detection, reduction
/// when the image is degenerate, convexity on the codimension-one result,
/// then the equivalence verdict.
pub fn main_theorem_check(
    atlas: &Atlas,
    frame: &TransversalFrame,
    space: &UnitEllipsoid,
    config: &TheoremConfig,
) -> Result<TheoremVerdict> {
    let n = atlas.dim();
    let res = config
        .sweep_res
        .clone()
        .unwrap_or_else(|| vec![24; n]);
    let cert = certify_minimal(
        atlas,
        frame.id(),
        space,
        config.sample_count,
        config.seed,
        &config.search,
    )?;
    let hull = affine_hull_dim(atlas, &res, config.rank_tol)?;
    let hull_dim = hull.dim;

    let mut work_atlas = atlas.clone();
    let mut work_frame = frame.clone();
    let mut current_hull = hull;
    let mut reduced = false;
    let mut reduction_equiaffine = None;
    while current_hull.dim < work_atlas.ambient_dim() {
        let red = reduce(&work_atlas, &work_frame, &current_hull, &res)?;
        reduced = true;
        reduction_equiaffine = Some(red.equiaffine.clone());
        work_atlas = red.atlas;
        work_frame = red.frame;
        current_hull = affine_hull_dim(&work_atlas, &res, config.rank_tol)?;
    }

    let (reduced_tau, reduced_minimal) = if reduced {
        let space_l = UnitEllipsoid::standard(work_atlas.ambient_dim());
        let cert_l = certify_minimal(
            &work_atlas,
            work_frame.id(),
            &space_l,
            config.sample_count,
            config.seed,
            &config.search,
        )?;
        (Some(cert_l.report), Some(cert_l.minimal))
    } else {
        (None, None)
    };

    let (convex, convexity) = if work_atlas.ambient_dim() == n + 1 {
        let space_l = UnitEllipsoid::standard(n + 1);
        let report = convexity_certify(
            &work_atlas,
            &work_frame,
            &space_l,
            &res,
            config.search.supp_tol,
        )?;
        (Some(report.convex), Some(report))
    } else {
        (None, None)
    };

    let rhs = hull_dim == n + 1 && convex == Some(true);
    Ok(TheoremVerdict {
        minimal: cert.minimal,
        tau: cert.report,
        witness: cert.witness,
        hull_dim,
        ambient_dim: atlas.ambient_dim(),
        manifold_dim: n,
        reduced,
        reduction_equiaffine,
        reduced_tau,
        reduced_minimal,
        convex,
        convexity,
        equivalence_holds: cert.minimal == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::wedge_hyperplane;
    use crate::manifold::Chart;
    use crate::morse::find_critical_points;
    use crate::tac::estimate_tau;
    use crate::test_shapes::{
        sphere_atlas, sphere_centro_frame, torus_atlas, torus_normal_frame,
    };
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Sphere atlas embedded in R^4 as the slice x4 = 0, with the frame
    /// (position vector, e4).
    fn embedded_sphere() -> (Atlas, TransversalFrame) {
        let inclusion = AmbientMap::affine(
            DMatrix::from_row_slice(4, 3, &[
                1.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, //
                0.0, 0.0, 1.0, //
                0.0, 0.0, 0.0,
            ]),
            DVector::zeros(4),
        );
        let base = sphere_atlas();
        let charts: Vec<Chart> = base
            .charts
            .iter()
            .map(|c| c.clone().compose(&inclusion))
            .collect();
        let atlas = Atlas::new(charts.clone(), base.betti.clone()).unwrap();
        let frame = TransversalFrame::new("position_and_e4", 2, move |c, u| {
            let jet = charts[c].eval_jet(u).unwrap();
            let e4 = DVector::from_column_slice(&[0.0, 0.0, 0.0, 1.0]);
            FrameJet {
                dxi: vec![jet.d1.clone(), vec![DVector::zeros(4), DVector::zeros(4)]],
                xi: vec![jet.point, e4],
                theta_perp: 1.0,
            }
        });
        (atlas, frame)
    }

    #[test]
    fn hull_detects_the_slice_and_full_dimensional_images() {
        let (embedded, _) = embedded_sphere();
        let hull = affine_hull_dim(&embedded, &[12, 24], 1e-6).unwrap();
        assert_eq!(hull.dim, 3);
        assert_eq!(hull.full_frame.ncols(), 4);
        // The unused direction is the constant slice normal.
        let q = hull.full_frame.column(3);
        assert_abs_diff_eq!(q[3].abs(), 1.0, epsilon = 1e-10);

        let torus = torus_atlas();
        let hull = affine_hull_dim(&torus, &[16, 16], 1e-6).unwrap();
        assert_eq!(hull.dim, 3);
    }

    #[test]
    fn hull_follows_an_affine_push_into_a_larger_space() {
        let push = AmbientMap::affine(
            DMatrix::from_row_slice(5, 3, &[
                0.4, -1.1, 0.3, //
                2.0, 0.5, -0.7, //
                -0.3, 0.9, 1.4, //
                1.1, 1.2, 0.2, //
                -0.6, 0.1, 0.8,
            ]),
            DVector::from_column_slice(&[3.0, -1.0, 0.5, 2.0, 0.0]),
        );
        let base = sphere_atlas();
        let charts: Vec<Chart> = base
            .charts
            .iter()
            .map(|c| c.clone().compose(&push))
            .collect();
        let atlas = Atlas::new(charts, base.betti.clone()).unwrap();
        let hull = affine_hull_dim(&atlas, &[12, 24], 1e-6).unwrap();
        assert_eq!(hull.dim, 3);
    }

    #[test]
    fn reduction_spends_the_constant_slice_vector() {
        let (atlas, frame) = embedded_sphere();
        let hull = affine_hull_dim(&atlas, &[12, 24], 1e-6).unwrap();
        let red = reduce(&atlas, &frame, &hull, &[8, 8]).unwrap();
        assert_eq!(red.atlas.ambient_dim(), 3);
        assert_eq!(red.xi_slot, 1);
        assert!(red.xi[3].abs() > 0.99);
        assert_abs_diff_eq!(red.kappa.abs(), 1.0, epsilon = 1e-10);
        assert!(
            red.equiaffine.max_violation < 1e-6,
            "violation {}",
            red.equiaffine.max_violation
        );
        // The reduced image is a round sphere again, so the average count
        // stays at the minimum.
        let space = UnitEllipsoid::standard(3);
        let outcome = estimate_tau(
            &red.atlas,
            red.frame.id(),
            &space,
            10,
            11,
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(outcome.report.tau_estimate, 2.0);
    }

    #[test]
    fn reduced_heights_match_appended_wedges() {
        let (atlas, frame) = embedded_sphere();
        let hull = affine_hull_dim(&atlas, &[12, 24], 1e-6).unwrap();
        let red = reduce(&atlas, &frame, &hull, &[6, 6]).unwrap();
        let basis = hull.full_frame.columns(0, 3).into_owned();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let y: Vec<DVector<f64>> = (0..3)
                .map(|_| {
                    DVector::from_iterator(3, (0..3).map(|_| rng.gen_range(-1.0..1.0)))
                })
                .collect();
            // Hyperplane vectors in the original space and their reduced
            // coordinates.
            let w: Vec<DVector<f64>> = y.iter().map(|v| &basis * v).collect();
            let reduced: Vec<DVector<f64>> =
                w.iter().map(|v| red.projection.jacobian(v) * v).collect();
            let psi = wedge_hyperplane(&reduced[0..2]).unwrap();
            let lhs = height(&psi, &reduced[2]);
            let phi = wedge_hyperplane(&[w[0].clone(), w[1].clone(), red.xi.clone()]).unwrap();
            let rhs = -height(&phi, &w[2]);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn reduction_preserves_critical_sets() {
        let (atlas, frame) = embedded_sphere();
        let hull = affine_hull_dim(&atlas, &[12, 24], 1e-6).unwrap();
        let red = reduce(&atlas, &frame, &hull, &[6, 6]).unwrap();
        let basis = hull.full_frame.columns(0, 3).into_owned();
        let config = SearchConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..5 {
            let y: Vec<DVector<f64>> = (0..2)
                .map(|_| {
                    DVector::from_iterator(3, (0..3).map(|_| rng.gen_range(-1.0..1.0)))
                })
                .collect();
            let w: Vec<DVector<f64>> = y.iter().map(|v| &basis * v).collect();
            let psi = {
                let reduced: Vec<DVector<f64>> =
                    w.iter().map(|v| red.projection.jacobian(v) * v).collect();
                wedge_hyperplane(&reduced).unwrap()
            };
            let phi =
                wedge_hyperplane(&[w[0].clone(), w[1].clone(), red.xi.clone()]).unwrap();
            let down = find_critical_points(&red.atlas, &psi, &config).unwrap();
            let up = find_critical_points(&atlas, &phi, &config).unwrap();
            assert_eq!(down.count(), up.count());
            assert_eq!(down.count(), 2);
            for (a, b) in down.records.iter().zip(up.records.iter().rev()) {
                // The sign convention flips heights, reversing the order.
                let mapped = red.projection.eval(&b.point);
                assert!((&mapped - &a.point).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn full_dimensional_input_cannot_reduce() {
        let torus = torus_atlas();
        let frame = torus_normal_frame();
        let hull = affine_hull_dim(&torus, &[16, 16], 1e-6).unwrap();
        match reduce(&torus, &frame, &hull, &[8, 8]) {
            Err(Error::Reduction(_)) => {}
            Err(other) => panic!("expected reduction error, got {other:?}"),
            Ok(_) => panic!("expected reduction error, got a reduction"),
        }
    }

    #[test]
    fn sphere_is_convex_and_torus_is_not() {
        let sphere = sphere_atlas();
        let space = UnitEllipsoid::standard(3);
        let report =
            convexity_certify(&sphere, &sphere_centro_frame(), &space, &[20, 40], 1e-7)
                .unwrap();
        assert!(report.convex);
        assert_eq!(report.supporting_fraction, 1.0);
        assert_eq!(report.worst_violation, 0.0);

        let torus = torus_atlas();
        let report =
            convexity_certify(&torus, &torus_normal_frame(), &space, &[40, 40], 1e-7).unwrap();
        assert!(!report.convex);
        // The outer half of the tube sits on the convex hull boundary, the
        // inner half does not.
        assert!(report.supporting_fraction > 0.3 && report.supporting_fraction < 0.7);
        assert!(report.worst_violation > 0.01);
        // Worst offenders sit toward the inner ring.
        let xy = (report.worst_point[0].powi(2) + report.worst_point[1].powi(2)).sqrt();
        assert!(xy < 2.0, "worst point radius {xy}");
    }

    #[test]
    fn equivalence_verdicts_on_sphere_torus_and_slice() {
        let config = TheoremConfig {
            sample_count: 10,
            seed: 5,
            sweep_res: Some(vec![20, 40]),
            ..TheoremConfig::default()
        };
        let space3 = UnitEllipsoid::standard(3);

        let sphere = sphere_atlas();
        let v = main_theorem_check(&sphere, &sphere_centro_frame(), &space3, &config).unwrap();
        assert!(v.minimal);
        assert_eq!(v.hull_dim, 3);
        assert!(!v.reduced);
        assert_eq!(v.convex, Some(true));
        assert!(v.equivalence_holds);

        let torus = torus_atlas();
        let v = main_theorem_check(&torus, &torus_normal_frame(), &space3, &config).unwrap();
        assert!(!v.minimal);
        assert_eq!(v.hull_dim, 3);
        assert_eq!(v.convex, Some(false));
        assert!(v.equivalence_holds);
        assert!(v.witness.is_some());

        let (embedded, frame) = embedded_sphere();
        let space4 = UnitEllipsoid::standard(4);
        let v = main_theorem_check(&embedded, &frame, &space4, &config).unwrap();
        assert!(v.minimal);
        assert_eq!(v.hull_dim, 3);
        assert!(v.reduced);
        assert_eq!(v.reduced_minimal, Some(true));
        assert_eq!(v.convex, Some(true));
        assert!(v.equivalence_holds);
        assert!(v.reduction_equiaffine.unwrap().max_violation < 1e-6);
    }
}
