//! Closed-form surfaces shared by unit tests.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::equiaffine::{FrameJet, TransversalFrame};
use crate::exterior::MultiCovector;
use crate::manifold::{Atlas, Chart, Domain, ImmersionJet};

/// Covector whose height pairing equals the dot product with `w`.
pub(crate) fn covector_for_direction(w: &[f64]) -> MultiCovector {
    let m = w.len();
    let coeffs: Vec<f64> = (0..m)
        .map(|j| if (m - 1 - j) % 2 == 0 { w[j] } else { -w[j] })
        .collect();
    MultiCovector::from_coeffs(coeffs)
}

pub(crate) fn sphere_jet(u: &[f64]) -> ImmersionJet {
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

fn sphere_charts() -> Vec<Chart> {
    let polar = Chart::analytic(
        "polar",
        Domain::new(vec![0.2, -PI], vec![PI - 0.2, PI], vec![false, true]),
        3,
        sphere_jet,
    )
    .with_seed_hint(vec![10, 20]);
    // Same parametrization rotated so the two charts cover each other's
    // missing caps.
    let swapped = Chart::analytic(
        "equator",
        Domain::new(vec![0.2, -PI], vec![PI - 0.2, PI], vec![false, true]),
        3,
        |u: &[f64]| {
            let jet = sphere_jet(u);
            let rot = |v: &DVector<f64>| DVector::from_column_slice(&[v[2], v[1], -v[0]]);
            ImmersionJet {
                point: rot(&jet.point),
                d1: jet.d1.iter().map(&rot).collect(),
                d2: jet.d2.iter().map(&rot).collect(),
            }
        },
    )
    .with_seed_hint(vec![10, 20]);
    vec![polar, swapped]
}

/// Unit sphere covered by two rotated angular charts.
pub(crate) fn sphere_atlas() -> Atlas {
    Atlas::new(sphere_charts(), Some(vec![1, 0, 1])).unwrap()
}

/// Position-vector frame for the unit sphere atlas.
pub(crate) fn sphere_centro_frame() -> TransversalFrame {
    let charts = sphere_charts();
    TransversalFrame::new("centro_affine", 1, move |c, u| {
        let jet = charts[c].eval_jet(u).unwrap();
        FrameJet {
            dxi: vec![jet.d1.clone()],
            xi: vec![jet.point],
            theta_perp: 1.0,
        }
    })
}

pub(crate) fn torus_jet(u: &[f64]) -> ImmersionJet {
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

fn torus_chart() -> Chart {
    Chart::analytic(
        "torus",
        Domain::new(vec![-PI, -PI], vec![PI, PI], vec![true, true]),
        3,
        torus_jet,
    )
    .with_seed_hint(vec![16, 16])
}

/// Torus of revolution, radii 2 and 1.
pub(crate) fn torus_atlas() -> Atlas {
    Atlas::new(vec![torus_chart()], Some(vec![1, 2, 1])).unwrap()
}

/// Euclidean unit-normal frame for the torus atlas.
pub(crate) fn torus_normal_frame() -> TransversalFrame {
    crate::equiaffine::euclidean_normal_frame(vec![torus_chart()])
}
