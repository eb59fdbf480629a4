//! Named example immersions with ground-truth data for regression runs.
//!
//! Every entry carries an atlas, an equiaffine transversal frame, and the
//! values the pipeline is expected to reproduce. Entries are immutable and
//! addressable by name from the CLI.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::equiaffine::{euclidean_normal_frame, fundamental_at, FrameJet, TransversalFrame};
use crate::manifold::{AmbientMap, Atlas, Chart, Domain, ImmersionJet};
use crate::{Error, Result};

/// Ground truth attached to a catalog entry. `None` means "not known in
/// closed form"; regression checks skip those fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnownData {
    pub tau: Option<f64>,
    pub minimal: Option<bool>,
    pub convex: Option<bool>,
    pub hull_dim: Option<usize>,
    pub betti: Vec<usize>,
    /// Critical-point counts that Morse draws are allowed to produce.
    pub histogram_support: Option<Vec<usize>>,
    pub degeneracy_locus: Option<String>,
}

pub struct CatalogEntry {
    pub name: String,
    pub atlas: Atlas,
    pub frame: TransversalFrame,
    pub known: KnownData,
}

pub fn names() -> [&'static str; 6] {
    [
        "sphere_centroaffine_n2",
        "sphere_centroaffine_n3",
        "sphere_in_R4",
        "torus_revolution",
        "dumbbell",
        "sigma_kossowski",
    ]
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    match name {
        "sphere_centroaffine_n2" => sphere_centroaffine_n2(),
        "sphere_centroaffine_n3" => sphere_centroaffine_n3(),
        "sphere_in_R4" => sphere_in_r4(),
        "torus_revolution" => torus_revolution(2.0, 1.0),
        "dumbbell" => dumbbell(0.6, 8.0),
        "sigma_kossowski" => sigma_kossowski(),
        other => Err(Error::UnknownEntry(other.to_string())),
    }
}

/// Per-chart domain replacement used by manifest-built variants.
#[derive(Debug, Clone, Default)]
pub struct DomainOverride {
    pub lo: Option<Vec<f64>>,
    pub hi: Option<Vec<f64>>,
    pub periodic: Option<Vec<bool>>,
}

pub(crate) type ChartOverrides = BTreeMap<usize, DomainOverride>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Form {
    Sphere2,
    Sphere3,
    SphereInR4,
    Torus,
    Dumbbell,
    Sigma,
}

impl Form {
    pub(crate) fn parse(s: &str) -> Result<Form> {
        match s {
            "sphere_centroaffine_n2" => Ok(Form::Sphere2),
            "sphere_centroaffine_n3" => Ok(Form::Sphere3),
            "sphere_in_R4" => Ok(Form::SphereInR4),
            "torus_revolution" => Ok(Form::Torus),
            "dumbbell" => Ok(Form::Dumbbell),
            "sigma_kossowski" => Ok(Form::Sigma),
            other => Err(Error::Manifest(format!("unknown form {other}"))),
        }
    }
}

pub(crate) fn build_form(
    form: Form,
    params: &BTreeMap<String, f64>,
    overrides: &ChartOverrides,
    betti_override: Option<Vec<usize>>,
    name_override: Option<String>,
) -> Result<CatalogEntry> {
    let custom = !params.is_empty() || !overrides.is_empty();
    let mut entry = match form {
        Form::Sphere2 => {
            reject_params(params, &[], "sphere_centroaffine_n2")?;
            sphere2_with(overrides)?
        }
        Form::Sphere3 => {
            reject_params(params, &[], "sphere_centroaffine_n3")?;
            sphere3_with(overrides)?
        }
        Form::SphereInR4 => {
            reject_params(params, &[], "sphere_in_R4")?;
            sphere_in_r4_with(overrides)?
        }
        Form::Torus => {
            reject_params(params, &["major", "minor"], "torus_revolution")?;
            let major = params.get("major").copied().unwrap_or(2.0);
            let minor = params.get("minor").copied().unwrap_or(1.0);
            torus_with(major, minor, overrides)?
        }
        Form::Dumbbell => {
            reject_params(params, &["neck_depth", "neck_width"], "dumbbell")?;
            let depth = params.get("neck_depth").copied().unwrap_or(0.6);
            let width = params.get("neck_width").copied().unwrap_or(8.0);
            dumbbell_with(depth, width, overrides)?
        }
        Form::Sigma => {
            reject_params(params, &[], "sigma_kossowski")?;
            sigma_with(overrides)?
        }
    };
    if custom {
        // Analytic ground truth is only claimed for the stock parameters.
        entry.known = KnownData {
            betti: entry.known.betti.clone(),
            hull_dim: entry.known.hull_dim,
            tau: None,
            minimal: None,
            convex: None,
            histogram_support: None,
            degeneracy_locus: None,
        };
    }
    if let Some(betti) = betti_override {
        let n = entry.atlas.dim();
        if betti.len() != n + 1 {
            return Err(Error::Manifest(format!(
                "betti needs {} entries for a {n}-manifold, got {}",
                n + 1,
                betti.len()
            )));
        }
        entry.known.betti = betti.clone();
        let charts = entry.atlas.charts.clone();
        entry.atlas = Atlas::new(charts, Some(betti))?;
    }
    if let Some(name) = name_override {
        entry.name = name;
    }
    Ok(entry)
}

fn reject_params(
    params: &BTreeMap<String, f64>,
    allowed: &[&str],
    form: &str,
) -> Result<()> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Manifest(format!(
                "unknown parameter {key} for form {form}"
            )));
        }
    }
    Ok(())
}

fn apply_overrides(charts: &mut [Chart], overrides: &ChartOverrides) -> Result<()> {
    for (&index, over) in overrides {
        let chart = charts.get_mut(index).ok_or_else(|| {
            Error::Manifest(format!("chart override index {index} out of range"))
        })?;
        let dim = chart.domain.dim();
        let mut lo = chart.domain.lo.clone();
        let mut hi = chart.domain.hi.clone();
        let mut periodic = chart.domain.periodic.clone();
        if let Some(v) = &over.lo {
            if v.len() != dim {
                return Err(Error::Manifest(format!(
                    "chart {index} lo needs {dim} values"
                )));
            }
            lo.clone_from(v);
        }
        if let Some(v) = &over.hi {
            if v.len() != dim {
                return Err(Error::Manifest(format!(
                    "chart {index} hi needs {dim} values"
                )));
            }
            hi.clone_from(v);
        }
        if let Some(v) = &over.periodic {
            if v.len() != dim {
                return Err(Error::Manifest(format!(
                    "chart {index} periodic needs {dim} values"
                )));
            }
            periodic.clone_from(v);
        }
        for k in 0..dim {
            if !(hi[k] > lo[k]) {
                return Err(Error::Manifest(format!(
                    "chart {index} axis {k}: empty interval [{}, {}]",
                    lo[k], hi[k]
                )));
            }
        }
        chart.domain = Domain::new(lo, hi, periodic);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Round sphere, n = 2.

fn round_sphere_jet(u: &[f64]) -> ImmersionJet {
    let (st, ct) = u[0].sin_cos();
    let (sv, cv) = u[1].sin_cos();
    ImmersionJet {
        point: DVector::from_vec(vec![st * cv, st * sv, ct]),
        d1: vec![
            DVector::from_vec(vec![ct * cv, ct * sv, -st]),
            DVector::from_vec(vec![-st * sv, st * cv, 0.0]),
        ],
        d2: vec![
            DVector::from_vec(vec![-st * cv, -st * sv, -ct]),
            DVector::from_vec(vec![-ct * sv, ct * cv, 0.0]),
            DVector::from_vec(vec![-st * cv, -st * sv, 0.0]),
        ],
    }
}

/// Two polar charts; the second is rotated so its coordinate singularities
/// land on the first chart's equator.
fn round_sphere_charts() -> Vec<Chart> {
    let dom = || {
        Domain::new(
            vec![0.2, -PI],
            vec![PI - 0.2, PI],
            vec![false, true],
        )
    };
    // (x, y, z) -> (z, y, -x): determinant +1, swaps the poles onto the x axis.
    let rot = AmbientMap::affine(
        DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 0.0]),
        DVector::zeros(3),
    );
    vec![
        Chart::analytic("polar", dom(), 3, round_sphere_jet).with_seed_hint(vec![10, 20]),
        Chart::analytic("tilted", dom(), 3, round_sphere_jet)
            .with_seed_hint(vec![10, 20])
            .compose(&rot),
    ]
}

fn centroaffine_frame(charts: Vec<Chart>) -> TransversalFrame {
    TransversalFrame::new("centroaffine_position", 1, move |chart, u| {
        let jet = charts[chart]
            .eval_jet(u)
            .expect("position frame evaluated outside chart domain");
        FrameJet {
            dxi: vec![jet.d1.clone()],
            xi: vec![jet.point],
            theta_perp: 1.0,
        }
    })
}

fn sphere2_with(overrides: &ChartOverrides) -> Result<CatalogEntry> {
    let mut charts = round_sphere_charts();
    apply_overrides(&mut charts, overrides)?;
    let frame = centroaffine_frame(charts.clone());
    let atlas = Atlas::new(charts, Some(vec![1, 0, 1]))?;
    Ok(CatalogEntry {
        name: "sphere_centroaffine_n2".into(),
        atlas,
        frame,
        known: KnownData {
            tau: Some(2.0),
            minimal: Some(true),
            convex: Some(true),
            hull_dim: Some(3),
            betti: vec![1, 0, 1],
            histogram_support: Some(vec![2]),
            degeneracy_locus: None,
        },
    })
}

pub fn sphere_centroaffine_n2() -> Result<CatalogEntry> {
    sphere2_with(&ChartOverrides::new())
}

// ---------------------------------------------------------------------------
// Round sphere, n = 3.

fn round_three_sphere_jet(u: &[f64]) -> ImmersionJet {
    let (sp, cp) = u[0].sin_cos();
    let (st, ct) = u[1].sin_cos();
    let (sv, cv) = u[2].sin_cos();
    let point = DVector::from_vec(vec![sp * st * cv, sp * st * sv, sp * ct, cp]);
    ImmersionJet {
        d1: vec![
            DVector::from_vec(vec![cp * st * cv, cp * st * sv, cp * ct, -sp]),
            DVector::from_vec(vec![sp * ct * cv, sp * ct * sv, -sp * st, 0.0]),
            DVector::from_vec(vec![-sp * st * sv, sp * st * cv, 0.0, 0.0]),
        ],
        d2: vec![
            -&point,
            DVector::from_vec(vec![cp * ct * cv, cp * ct * sv, -cp * st, 0.0]),
            DVector::from_vec(vec![-cp * st * sv, cp * st * cv, 0.0, 0.0]),
            DVector::from_vec(vec![-sp * st * cv, -sp * st * sv, -sp * ct, 0.0]),
            DVector::from_vec(vec![-sp * ct * sv, sp * ct * cv, 0.0, 0.0]),
            DVector::from_vec(vec![-sp * st * cv, -sp * st * sv, 0.0, 0.0]),
        ],
        point,
    }
}

fn sphere3_with(overrides: &ChartOverrides) -> Result<CatalogEntry> {
    let dom = || {
        Domain::new(
            vec![0.15, 0.15, -PI],
            vec![PI - 0.15, PI - 0.15, PI],
            vec![false, false, true],
        )
    };
    // Even permutation (x1, x2, x3, x4) -> (x3, x4, x1, x2); the circles the
    // first chart misses land in the second chart's interior.
    let perm = AmbientMap::affine(
        DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0,
            ],
        ),
        DVector::zeros(4),
    );
    let mut charts = vec![
        Chart::analytic("polar", dom(), 4, round_three_sphere_jet)
            .with_seed_hint(vec![6, 6, 12]),
        Chart::analytic("swapped", dom(), 4, round_three_sphere_jet)
            .with_seed_hint(vec![6, 6, 12])
            .compose(&perm),
    ];
    apply_overrides(&mut charts, overrides)?;
    let frame = centroaffine_frame(charts.clone());
    let atlas = Atlas::new(charts, Some(vec![1, 0, 0, 1]))?;
    Ok(CatalogEntry {
        name: "sphere_centroaffine_n3".into(),
        atlas,
        frame,
        known: KnownData {
            tau: Some(2.0),
            minimal: Some(true),
            convex: Some(true),
            hull_dim: Some(4),
            betti: vec![1, 0, 0, 1],
            histogram_support: Some(vec![2]),
            degeneracy_locus: None,
        },
    })
}

pub fn sphere_centroaffine_n3() -> Result<CatalogEntry> {
    sphere3_with(&ChartOverrides::new())
}

// ---------------------------------------------------------------------------
// Round sphere inside a 3-dimensional slice of 4-space. Exercises reduction.

fn sphere_in_r4_with(overrides: &ChartOverrides) -> Result<CatalogEntry> {
    let include = AmbientMap::affine(
        DMatrix::from_fn(4, 3, |i, j| if i == j { 1.0 } else { 0.0 }),
        DVector::zeros(4),
    );
    let mut charts: Vec<Chart> = round_sphere_charts()
        .into_iter()
        .map(|c| c.compose(&include))
        .collect();
    apply_overrides(&mut charts, overrides)?;
    let frame_charts = charts.clone();
    let frame = TransversalFrame::new("position_and_axis", 2, move |chart, u| {
        let jet = frame_charts[chart]
            .eval_jet(u)
            .expect("slice frame evaluated outside chart domain");
        let mut axis = DVector::zeros(4);
        axis[3] = 1.0;
        FrameJet {
            xi: vec![jet.point.clone(), axis],
            dxi: vec![jet.d1.clone(), vec![DVector::zeros(4); 2]],
            theta_perp: 1.0,
        }
    });
    let atlas = Atlas::new(charts, Some(vec![1, 0, 1]))?;
    Ok(CatalogEntry {
        name: "sphere_in_R4".into(),
        atlas,
        frame,
        known: KnownData {
            tau: Some(2.0),
            minimal: Some(true),
            convex: Some(true),
            hull_dim: Some(3),
            betti: vec![1, 0, 1],
            histogram_support: Some(vec![2]),
            degeneracy_locus: None,
        },
    })
}

pub fn sphere_in_r4() -> Result<CatalogEntry> {
    sphere_in_r4_with(&ChartOverrides::new())
}

// ---------------------------------------------------------------------------
// Torus of revolution.

fn torus_with(major: f64, minor: f64, overrides: &ChartOverrides) -> Result<CatalogEntry> {
    if !(minor > 0.0 && major > minor) {
        return Err(Error::DegenerateInput(format!(
            "torus radii need 0 < minor < major, got major {major}, minor {minor}"
        )));
    }
    let jet = move |u: &[f64]| {
        let (su, cu) = u[0].sin_cos();
        let (sv, cv) = u[1].sin_cos();
        let w = major + minor * cu;
        ImmersionJet {
            point: DVector::from_vec(vec![w * cv, w * sv, minor * su]),
            d1: vec![
                DVector::from_vec(vec![-minor * su * cv, -minor * su * sv, minor * cu]),
                DVector::from_vec(vec![-w * sv, w * cv, 0.0]),
            ],
            d2: vec![
                DVector::from_vec(vec![-minor * cu * cv, -minor * cu * sv, -minor * su]),
                DVector::from_vec(vec![minor * su * sv, -minor * su * cv, 0.0]),
                DVector::from_vec(vec![-w * cv, -w * sv, 0.0]),
            ],
        }
    };
    let dom = Domain::new(vec![-PI, -PI], vec![PI, PI], vec![true, true]);
    let mut charts =
        vec![Chart::analytic("ring", dom, 3, jet).with_seed_hint(vec![16, 16])];
    apply_overrides(&mut charts, overrides)?;
    let frame = euclidean_normal_frame(charts.clone());
    let atlas = Atlas::new(charts, Some(vec![1, 2, 1]))?;
    Ok(CatalogEntry {
        name: "torus_revolution".into(),
        atlas,
        frame,
        known: KnownData {
            tau: Some(4.0),
            minimal: Some(false),
            convex: Some(false),
            hull_dim: Some(3),
            betti: vec![1, 2, 1],
            histogram_support: Some(vec![4]),
            degeneracy_locus: Some("two parallels where the tube turns flat".into()),
        },
    })
}

pub fn torus_revolution(major: f64, minor: f64) -> Result<CatalogEntry> {
    torus_with(major, minor, &ChartOverrides::new())
}

// ---------------------------------------------------------------------------
// Dumbbell: the round sphere squeezed toward its axis by a Gaussian waist,
// profile radius sqrt(1 - z^2) * (1 - depth * exp(-width * z^2)).

fn squeeze_map(depth: f64, width: f64) -> AmbientMap {
    let s = move |z: f64| 1.0 - depth * (-width * z * z).exp();
    let s1 = move |z: f64| 2.0 * depth * width * z * (-width * z * z).exp();
    let s2 = move |z: f64| {
        2.0 * depth * width * (1.0 - 2.0 * width * z * z) * (-width * z * z).exp()
    };
    AmbientMap::new(
        3,
        move |x: &DVector<f64>| {
            let f = s(x[2]);
            DVector::from_vec(vec![x[0] * f, x[1] * f, x[2]])
        },
        move |x: &DVector<f64>| {
            let f = s(x[2]);
            let g = s1(x[2]);
            DMatrix::from_row_slice(
                3,
                3,
                &[f, 0.0, x[0] * g, 0.0, f, x[1] * g, 0.0, 0.0, 1.0],
            )
        },
        move |x: &DVector<f64>| {
            let g = s1(x[2]);
            let h = s2(x[2]);
            vec![
                DMatrix::from_row_slice(
                    3,
                    3,
                    &[0.0, 0.0, g, 0.0, 0.0, 0.0, g, 0.0, x[0] * h],
                ),
                DMatrix::from_row_slice(
                    3,
                    3,
                    &[0.0, 0.0, 0.0, 0.0, 0.0, g, 0.0, g, x[1] * h],
                ),
                DMatrix::zeros(3, 3),
            ]
        },
    )
}

fn dumbbell_with(depth: f64, width: f64, overrides: &ChartOverrides) -> Result<CatalogEntry> {
    if !(depth > 0.0 && depth < 1.0) {
        return Err(Error::DegenerateInput(format!(
            "neck depth must lie in (0, 1), got {depth}"
        )));
    }
    if !(width > 0.0) {
        return Err(Error::DegenerateInput(format!(
            "neck width must be positive, got {width}"
        )));
    }
    let squeeze = squeeze_map(depth, width);
    let mut charts: Vec<Chart> = round_sphere_charts()
        .into_iter()
        .map(|mut c| {
            c.seed_hint = Some(vec![16, 32]);
            c.compose(&squeeze)
        })
        .collect();
    apply_overrides(&mut charts, overrides)?;
    let frame = euclidean_normal_frame(charts.clone());
    let atlas = Atlas::new(charts, Some(vec![1, 0, 1]))?;
    Ok(CatalogEntry {
        name: "dumbbell".into(),
        atlas,
        frame,
        known: KnownData {
            tau: None,
            minimal: Some(false),
            convex: Some(false),
            hull_dim: Some(3),
            betti: vec![1, 0, 1],
            histogram_support: Some(vec![2, 6]),
            degeneracy_locus: Some("four parallels bounding the concave waist".into()),
        },
    })
}

pub fn dumbbell(neck_depth: f64, neck_width: f64) -> Result<CatalogEntry> {
    dumbbell_with(neck_depth, neck_width, &ChartOverrides::new())
}

// ---------------------------------------------------------------------------
// Pinched quartic of revolution (x^2 + y^2 and z coupled through
// (z - r)^4 + (z + r)^4 = 16): convex, closed, with a degenerate circle on
// each sheet. The profile functions below are exact.

pub mod pinched {
    //! Closed-form profile of the pinched quartic surface.
    //!
    //! Each sheet is (radial(u) cos v, radial(u) sin v, ±axial(u)) with
    //! radial(u) = u - (1 - u^4)^(1/4) and axial(u) = u + (1 - u^4)^(1/4).
    //! The transversal (axial_d1 cos v, axial_d1 sin v, ∓radial_d1) / speed
    //! is equiaffine, and the determinant of its fundamental form equals
    //! u^2 * beta(u) with beta strictly positive on the sheet interior.

    /// The radius vanishes at +half_width(); the sheets meet at -half_width().
    pub fn half_width() -> f64 {
        0.5_f64.powf(0.25)
    }

    fn q(u: f64) -> f64 {
        1.0 - u.powi(4)
    }

    /// Signed distance from the axis; negative on the whole sheet interior.
    pub fn radial(u: f64) -> f64 {
        u - q(u).powf(0.25)
    }

    /// Height of the upper sheet.
    pub fn axial(u: f64) -> f64 {
        u + q(u).powf(0.25)
    }

    pub fn radial_d1(u: f64) -> f64 {
        1.0 + u.powi(3) * q(u).powf(-0.75)
    }

    pub fn axial_d1(u: f64) -> f64 {
        1.0 - u.powi(3) * q(u).powf(-0.75)
    }

    pub fn radial_d2(u: f64) -> f64 {
        3.0 * u * u * q(u).powf(-1.75)
    }

    pub fn axial_d2(u: f64) -> f64 {
        -radial_d2(u)
    }

    /// Meridian speed, also the normalizer of the transversal field.
    pub fn speed(u: f64) -> f64 {
        radial_d1(u).hypot(axial_d1(u))
    }

    /// det(fundamental form) = u^2 * beta(u) in the (u, v) chart basis;
    /// strictly positive on the sheet interior. Equivalent product form:
    /// -2 radial radial_d2 axial_d1 / (u speed)^2.
    pub fn beta(u: f64) -> f64 {
        let q = q(u);
        let s2 = radial_d1(u).powi(2) + axial_d1(u).powi(2);
        -6.0 * radial(u) * (q.powf(0.75) - u.powi(3)) / (s2 * q.powf(2.5))
    }

    /// Degeneracy gauge u * sqrt(beta(u)); vanishes exactly at u = 0 and has
    /// nonzero slope there.
    pub fn lambda(u: f64) -> f64 {
        u * beta(u).sqrt()
    }
}

/// Collar kept clear of the radius-zero end of each sheet.
pub const PINCHED_POLE_MARGIN: f64 = 1e-3;

fn pinched_jet(sheet: f64) -> impl Fn(&[f64]) -> ImmersionJet + Send + Sync + Clone {
    move |u: &[f64]| {
        let (sv, cv) = u[1].sin_cos();
        let e = pinched::radial(u[0]);
        let e1 = pinched::radial_d1(u[0]);
        let e2 = pinched::radial_d2(u[0]);
        let f = pinched::axial(u[0]);
        let f1 = pinched::axial_d1(u[0]);
        let f2 = pinched::axial_d2(u[0]);
        ImmersionJet {
            point: DVector::from_vec(vec![e * cv, e * sv, sheet * f]),
            d1: vec![
                DVector::from_vec(vec![e1 * cv, e1 * sv, sheet * f1]),
                DVector::from_vec(vec![-e * sv, e * cv, 0.0]),
            ],
            d2: vec![
                DVector::from_vec(vec![e2 * cv, e2 * sv, sheet * f2]),
                DVector::from_vec(vec![-e1 * sv, e1 * cv, 0.0]),
                DVector::from_vec(vec![-e * cv, -e * sv, 0.0]),
            ],
        }
    }
}

fn sigma_with(overrides: &ChartOverrides) -> Result<CatalogEntry> {
    let hw = pinched::half_width();
    // Both sheets stop exactly at the seam circle. Running a sheet past the
    // seam is not an option: the meridian curve continues analytically there
    // but leaves the surface, and the stray band sits strictly inside the
    // convex body, where it would shed spurious critical points.
    let dom = || {
        Domain::new(
            vec![-hw, -PI],
            vec![hw - PINCHED_POLE_MARGIN, PI],
            vec![false, true],
        )
    };
    let mut charts = vec![
        Chart::analytic("upper", dom(), 3, pinched_jet(1.0)).with_seed_hint(vec![14, 28]),
        Chart::analytic("lower", dom(), 3, pinched_jet(-1.0)).with_seed_hint(vec![14, 28]),
    ];
    apply_overrides(&mut charts, overrides)?;
    let frame = TransversalFrame::new("meridian_transversal", 1, move |chart, u| {
        let sheet = if chart == 0 { 1.0 } else { -1.0 };
        let (sv, cv) = u[1].sin_cos();
        let e1 = pinched::radial_d1(u[0]);
        let e2 = pinched::radial_d2(u[0]);
        let f1 = pinched::axial_d1(u[0]);
        let f2 = pinched::axial_d2(u[0]);
        let d = pinched::speed(u[0]);
        let dp = (e1 * e2 + f1 * f2) / d;
        let a = f1 / d;
        let b = -sheet * e1 / d;
        let ap = (f2 * d - f1 * dp) / (d * d);
        let bp = -sheet * (e2 * d - e1 * dp) / (d * d);
        FrameJet {
            xi: vec![DVector::from_vec(vec![a * cv, a * sv, b])],
            dxi: vec![vec![
                DVector::from_vec(vec![ap * cv, ap * sv, bp]),
                DVector::from_vec(vec![-a * sv, a * cv, 0.0]),
            ]],
            theta_perp: 1.0,
        }
    });
    let atlas = Atlas::new(charts, Some(vec![1, 0, 1]))?;
    Ok(CatalogEntry {
        name: "sigma_kossowski".into(),
        atlas,
        frame,
        known: KnownData {
            tau: Some(2.0),
            minimal: Some(true),
            convex: Some(true),
            hull_dim: Some(3),
            betti: vec![1, 0, 1],
            histogram_support: Some(vec![2]),
            degeneracy_locus: Some("u = 0 circle on each sheet".into()),
        },
    })
}

pub fn sigma_kossowski() -> Result<CatalogEntry> {
    sigma_with(&ChartOverrides::new())
}

// ---------------------------------------------------------------------------
// Degeneracy-gauge check on the pinched surface.

#[derive(Debug, Clone, Serialize)]
pub struct KossowskiReport {
    pub beta_positive: bool,
    pub lambda_at_0: f64,
    pub dlambda_at_0: f64,
}

/// Grid check that det(fundamental form) = u^2 * beta(u) with beta > 0, plus
/// central-difference values of the gauge lambda at the degenerate circle.
/// Beta comes from the decompose pipeline; the closed form is the referee.
pub fn kossowski_check(entry: &CatalogEntry) -> Result<KossowskiReport> {
    if entry.name != "sigma_kossowski" {
        return Err(Error::UnknownEntry(format!(
            "kossowski check applies to sigma_kossowski, got {}",
            entry.name
        )));
    }
    // Rotation invariance makes the azimuth irrelevant; any interior value works.
    let v0 = 0.37;
    let det_at = |u: f64| -> Result<f64> {
        let fd = fundamental_at(&entry.atlas, &entry.frame, 0, &[u, v0])?;
        Ok(fd.alpha_det(0))
    };
    let hw = pinched::half_width();
    let lo = -hw + 2.0 * PINCHED_POLE_MARGIN;
    let hi = hw - 2.0 * PINCHED_POLE_MARGIN;
    let steps = 96;
    for j in 0..=steps {
        let u = lo + (hi - lo) * j as f64 / steps as f64;
        if u.abs() < 5e-3 {
            continue;
        }
        let from_pipeline = det_at(u)? / (u * u);
        if from_pipeline <= 0.0 {
            return Err(Error::Pathology(format!(
                "fundamental determinant factor nonpositive at u = {u}: {from_pipeline:e}"
            )));
        }
        if u.abs() <= 0.8 {
            let closed = pinched::beta(u);
            let rel = (from_pipeline - closed).abs() / closed.abs();
            if rel > 1e-6 {
                return Err(Error::Pathology(format!(
                    "determinant factor mismatch at u = {u}: relative error {rel:e}"
                )));
            }
        }
    }
    let h = 1e-5;
    let gauge = |u: f64| -> Result<f64> { Ok(u.signum() * det_at(u)?.max(0.0).sqrt()) };
    let plus = gauge(h)?;
    let minus = gauge(-h)?;
    Ok(KossowskiReport {
        beta_positive: true,
        lambda_at_0: 0.5 * (plus + minus),
        dlambda_at_0: (plus - minus) / (2.0 * h),
    })
}
