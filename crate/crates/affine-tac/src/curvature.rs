//! Gauss map into the unit covector ellipsoid and the associated curvature
//! determinant.
//!
//! At each point the wedge of a volume-normalized tangent basis with a fiber
//! choice of transversal vectors gives a hyperplane covector; projecting it
//! to the ellipsoid yields the Gauss value `ν`. The curvature `G` is the
//! sign-adjusted determinant of the height pairing of `ν` against the
//! fundamental form, normalized to the volume-unimodular frame, so it does
//! not depend on the chart parametrization.

use nalgebra::{DMatrix, DVector};

use crate::equiaffine::{fundamental_at, unimodular_rescale, FundamentalData, TransversalFrame};
use crate::error::{Error, Result};
use crate::exterior::{height, project_to_ellipsoid, wedge_hyperplane, MultiCovector, UnitEllipsoid};
use crate::manifold::{Atlas, ImmersionJet};

/// Gauss-map value: a point of the unit ellipsoid, the normalization factor
/// applied to reach it, and the sheet sign.
#[derive(Debug, Clone)]
pub struct GaussValue {
    pub phi: MultiCovector,
    pub mu: f64,
    pub orientation: f64,
}

/// Wedges the volume-normalized tangent images with `fiber` transversal
/// vectors and projects onto `space`.
///
/// For codimension 1 `fiber` is empty; for codimension `r` it must hold
/// `r - 1` vectors. `orientation` selects the sheet.
pub fn gauss_map(
    jet: &ImmersionJet,
    fd: &FundamentalData,
    fiber: &[DVector<f64>],
    space: &UnitEllipsoid,
    orientation: f64,
) -> Result<GaussValue> {
    let m = jet.point.len();
    let n = jet.d1.len();
    if n + fiber.len() + 1 != m {
        return Err(Error::DimensionMismatch {
            expected: m - n - 1,
            got: fiber.len(),
        });
    }
    if fd.theta_value == 0.0 {
        return Err(Error::DegenerateInput(
            "zero induced volume: unimodular tangent basis undefined".into(),
        ));
    }
    let mut vectors: Vec<DVector<f64>> = jet.d1.clone();
    vectors.extend(fiber.iter().cloned());
    let pre = wedge_hyperplane(&vectors)?.scaled(1.0 / fd.theta_value);
    if pre.is_zero(0.0) {
        return Err(Error::DegenerateInput(
            "zero wedge: tangent and fiber vectors are dependent".into(),
        ));
    }
    let (phi, mu) = project_to_ellipsoid(space, &pre)?;
    Ok(GaussValue {
        phi: phi.scaled(orientation),
        mu,
        orientation,
    })
}

/// Curvature determinant `(-1)^n det[height(ν, α(∂_i, ∂_j))] / θ²`.
pub fn lipschitz_killing(fd: &FundamentalData, gauss: &GaussValue) -> Result<f64> {
    let n = fd.dim();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = height(&gauss.phi, fd.alpha_vector(i, j));
        }
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * m.determinant() / unimodular_rescale(fd)?)
}

/// Gauss value at an atlas point for a rank-1 frame.
pub fn gauss_at(
    atlas: &Atlas,
    frame: &TransversalFrame,
    space: &UnitEllipsoid,
    chart: usize,
    u: &[f64],
    orientation: f64,
) -> Result<GaussValue> {
    debug_assert_eq!(frame.rank(), 1, "fiber choice required beyond rank 1");
    let jet = atlas.charts[chart].eval_jet(u)?;
    let fd = fundamental_at(atlas, frame, chart, u)?;
    gauss_map(&jet, &fd, &[], space, orientation)
}

/// Curvature determinant at an atlas point for a rank-1 frame.
pub fn lipschitz_killing_at(
    atlas: &Atlas,
    frame: &TransversalFrame,
    space: &UnitEllipsoid,
    chart: usize,
    u: &[f64],
    orientation: f64,
) -> Result<f64> {
    let fd = fundamental_at(atlas, frame, chart, u)?;
    let jet = atlas.charts[chart].eval_jet(u)?;
    let gauss = gauss_map(&jet, &fd, &[], space, orientation)?;
    lipschitz_killing(&fd, &gauss)
}

/// Smallest singular value of the finite-difference differential of the
/// Gauss map at an atlas point, computed in the tangent plane of the
/// coefficient sphere. Zero detects Gauss-critical points.
pub fn gauss_jacobian_rank(
    atlas: &Atlas,
    frame: &TransversalFrame,
    space: &UnitEllipsoid,
    chart: usize,
    u: &[f64],
    step_rel: f64,
) -> Result<f64> {
    let n = atlas.dim();
    let domain = &atlas.charts[chart].domain;
    let center = space.coords(&gauss_at(atlas, frame, space, chart, u, 1.0)?.phi);
    let m = center.len();
    let mut columns = DMatrix::zeros(m, n);
    for k in 0..n {
        let h = step_rel * domain.span(k);
        if h <= 4.0 * f64::EPSILON * (1.0 + u[k].abs()) {
            return Err(Error::DegenerateInput(
                "finite-difference step underflow in Gauss differential".into(),
            ));
        }
        let mut up = u.to_vec();
        up[k] += h;
        let mut dn = u.to_vec();
        dn[k] -= h;
        let ap = space.coords(&gauss_at(atlas, frame, space, chart, &up, 1.0)?.phi);
        let am = space.coords(&gauss_at(atlas, frame, space, chart, &dn, 1.0)?.phi);
        columns.set_column(k, &((ap - am) / (2.0 * h)));
    }
    // Project the columns onto the tangent plane of the unit coefficient
    // sphere at the center value; rank is basis-independent there.
    let projected = &columns - &center * (center.transpose() * &columns);
    let svd = projected.svd(false, false);
    Ok(svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiaffine::{decompose, FrameJet};
    use crate::manifold::{Atlas, Chart, Domain};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn sphere_chart() -> Chart {
        Chart::analytic(
            "sphere",
            Domain::new(vec![0.35, -PI], vec![PI - 0.35, PI], vec![false, true]),
            3,
            |u: &[f64]| {
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
            },
        )
    }

    fn centro_frame(chart: Chart) -> TransversalFrame {
        TransversalFrame::new("centro_affine", 1, move |_c, u| {
            let jet = chart.eval_jet(u).unwrap();
            FrameJet {
                dxi: vec![jet.d1.clone()],
                xi: vec![jet.point],
                theta_perp: 1.0,
            }
        })
    }

    fn flat_atlas_and_frame() -> (Atlas, TransversalFrame) {
        let chart = Chart::analytic(
            "plane",
            Domain::new(vec![-1.0, -1.0], vec![1.0, 1.0], vec![false, false]),
            3,
            |u: &[f64]| ImmersionJet {
                point: DVector::from_column_slice(&[u[0], u[1], 0.0]),
                d1: vec![
                    DVector::from_column_slice(&[1.0, 0.0, 0.0]),
                    DVector::from_column_slice(&[0.0, 1.0, 0.0]),
                ],
                d2: vec![DVector::zeros(3); 3],
            },
        );
        let frame = TransversalFrame::new("vertical", 1, |_c, _u| FrameJet {
            xi: vec![DVector::from_column_slice(&[0.0, 0.0, 1.0])],
            dxi: vec![vec![DVector::zeros(3), DVector::zeros(3)]],
            theta_perp: 1.0,
        });
        (Atlas::new(vec![chart], None).unwrap(), frame)
    }

    #[test]
    fn sphere_gauss_value_annihilates_the_tangent_plane() {
        let chart = sphere_chart();
        let frame = centro_frame(chart.clone());
        let space = UnitEllipsoid::standard(3);
        let atlas = Atlas::new(vec![chart.clone()], None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let u = [
                rng.gen_range(0.4..PI - 0.4),
                rng.gen_range(-PI..PI),
            ];
            let jet = chart.eval_jet(&u).unwrap();
            let g = gauss_at(&atlas, &frame, &space, 0, &u, 1.0).unwrap();
            for k in 0..2 {
                assert!(height(&g.phi, &jet.d1[k]).abs() < 1e-10);
            }
            // The kernel is exactly the tangent plane: the radial height is
            // bounded away from zero.
            assert!(height(&g.phi, &jet.point).abs() > 0.5);
        }
    }

    #[test]
    fn flat_patch_has_constant_gauss_value_and_zero_curvature() {
        let (atlas, frame) = flat_atlas_and_frame();
        let space = UnitEllipsoid::standard(3);
        let base = gauss_at(&atlas, &frame, &space, 0, &[0.0, 0.0], 1.0).unwrap();
        for u in [[0.5, 0.5], [-0.9, 0.3], [0.1, -0.7]] {
            let g = gauss_at(&atlas, &frame, &space, 0, &u, 1.0).unwrap();
            for j in 0..3 {
                assert_abs_diff_eq!(g.phi.coeffs()[j], base.phi.coeffs()[j], epsilon = 1e-14);
            }
            let gk = lipschitz_killing_at(&atlas, &frame, &space, 0, &u, 1.0).unwrap();
            assert_eq!(gk, 0.0);
        }
    }

    #[test]
    fn round_sphere_curvature_is_one_on_both_sheets() {
        let chart = sphere_chart();
        let frame = centro_frame(chart.clone());
        let space = UnitEllipsoid::standard(3);
        let atlas = Atlas::new(vec![chart], None).unwrap();
        for u in [[1.0, 0.2], [2.2, -1.5], [PI / 2.0, 3.0]] {
            for orientation in [1.0, -1.0] {
                let g = lipschitz_killing_at(&atlas, &frame, &space, 0, &u, orientation).unwrap();
                assert_abs_diff_eq!(g, 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn circle_curvature_changes_sign_with_the_sheet() {
        // One-dimensional example, so the two sheets must disagree in sign.
        let circle = Chart::analytic(
            "circle",
            Domain::new(vec![-PI], vec![PI], vec![true]),
            2,
            |u: &[f64]| {
                let (c, s) = (u[0].cos(), u[0].sin());
                ImmersionJet {
                    point: DVector::from_column_slice(&[c, s]),
                    d1: vec![DVector::from_column_slice(&[-s, c])],
                    d2: vec![DVector::from_column_slice(&[-c, -s])],
                }
            },
        );
        let frame = centro_frame(circle.clone());
        let space = UnitEllipsoid::standard(2);
        let jet = circle.eval_jet(&[0.8]).unwrap();
        let fd = decompose(&jet, &frame.eval(0, &[0.8])).unwrap();
        let plus = gauss_map(&jet, &fd, &[], &space, 1.0).unwrap();
        let minus = gauss_map(&jet, &fd, &[], &space, -1.0).unwrap();
        let gp = lipschitz_killing(&fd, &plus).unwrap();
        let gm = lipschitz_killing(&fd, &minus).unwrap();
        assert_abs_diff_eq!(gp, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gm, -gp, epsilon = 1e-12);
    }

    #[test]
    fn curvature_scales_with_the_normalization_power() {
        let chart = sphere_chart();
        let frame = centro_frame(chart.clone());
        let space = UnitEllipsoid::standard(3);
        let u = [1.3, 0.4];
        let jet = chart.eval_jet(&u).unwrap();
        let fd = decompose(&jet, &frame.eval(0, &u)).unwrap();
        let base = gauss_map(&jet, &fd, &[], &space, 1.0).unwrap();
        let g0 = lipschitz_killing(&fd, &base).unwrap();
        let c = 1.7;
        let scaled = GaussValue {
            phi: base.phi.scaled(c),
            mu: base.mu * c,
            orientation: base.orientation,
        };
        let g1 = lipschitz_killing(&fd, &scaled).unwrap();
        assert_abs_diff_eq!(g1, c * c * g0, epsilon = 1e-10);
    }

    #[test]
    fn sphere_gauss_differential_has_full_rank() {
        let chart = sphere_chart();
        let frame = centro_frame(chart.clone());
        let space = UnitEllipsoid::standard(3);
        let atlas = Atlas::new(vec![chart], None).unwrap();
        for u in [[0.9, 0.0], [1.6, 2.0], [2.3, -2.8]] {
            let s = gauss_jacobian_rank(&atlas, &frame, &space, 0, &u, 1e-5).unwrap();
            assert!(s > 0.3, "sigma_min {s}");
        }
    }

    #[test]
    fn flat_patch_gauss_differential_vanishes() {
        let (atlas, frame) = flat_atlas_and_frame();
        let space = UnitEllipsoid::standard(3);
        let s = gauss_jacobian_rank(&atlas, &frame, &space, 0, &[0.2, 0.1], 1e-5).unwrap();
        assert!(s < 1e-12);
    }

    #[test]
    fn vanishing_step_is_rejected() {
        let (atlas, frame) = flat_atlas_and_frame();
        let space = UnitEllipsoid::standard(3);
        let err = gauss_jacobian_rank(&atlas, &frame, &space, 0, &[0.0, 0.0], 0.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }

    #[test]
    fn fiber_vector_arity_is_checked() {
        let chart = sphere_chart();
        let frame = centro_frame(chart.clone());
        let u = [1.0, 1.0];
        let jet = chart.eval_jet(&u).unwrap();
        let fd = decompose(&jet, &frame.eval(0, &u)).unwrap();
        let space = UnitEllipsoid::standard(3);
        let extra = DVector::from_column_slice(&[0.0, 0.0, 1.0]);
        let err = gauss_map(&jet, &fd, &[extra], &space, 1.0).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }
}
