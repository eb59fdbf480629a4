//! Hyperplane covectors, height functions, and the unit ellipsoid of
//! directions.
//!
//! An element of `∧^(m-1) R^m` is stored by its coefficients in the basis
//! `E_i = e_1 ∧ … ∧ ê_i ∧ … ∧ e_m` (factor `e_i` omitted). With that
//! convention the height of `v` against the wedge of `(v_1, …, v_(m-1))`
//! equals `det [v_1 … v_(m-1) v]` exactly, so heights inherit the sign and
//! linearity of the determinant.
//!
//! Direction sampling draws uniformly from the coefficient sphere of a
//! `ζ`-basis whose ordered volume is one; the default basis is the `E_i`
//! with the first two entries swapped whenever the ordered volume of the
//! natural ordering is negative.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the ordered-volume check on ellipsoid bases.
pub const BASIS_VOLUME_TOL: f64 = 1e-10;

/// Ambient affine space `R^m` together with a volume-normalized basis.
#[derive(Debug, Clone)]
pub struct AffineSpace {
    dim: usize,
    /// Columns form a basis of determinant one.
    volume_basis: DMatrix<f64>,
}

impl AffineSpace {
    /// Standard `R^m` with the canonical basis.
    pub fn standard(dim: usize) -> Self {
        Self {
            dim,
            volume_basis: DMatrix::identity(dim, dim),
        }
    }

    /// Space with an explicit volume basis; the basis determinant must be one.
    pub fn with_basis(volume_basis: DMatrix<f64>) -> Result<Self> {
        if volume_basis.nrows() != volume_basis.ncols() {
            return Err(Error::DimensionMismatch {
                expected: volume_basis.nrows(),
                got: volume_basis.ncols(),
            });
        }
        let det = volume_basis.clone().lu().determinant();
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::DegenerateInput(format!(
                "volume basis determinant {det} is not 1"
            )));
        }
        Ok(Self {
            dim: volume_basis.nrows(),
            volume_basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume_basis(&self) -> &DMatrix<f64> {
        &self.volume_basis
    }

    /// Volume of the parallelepiped spanned by `dim` vectors.
    pub fn omega(&self, vectors: &[DVector<f64>]) -> Result<f64> {
        if vectors.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: vectors.len(),
            });
        }
        let mat = DMatrix::from_columns(vectors);
        Ok(mat.lu().determinant())
    }
}

/// Coefficients of an element of `∧^(m-1) R^m` in the `E_i` basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiCovector {
    coeffs: Vec<f64>,
}

impl MultiCovector {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coeffs: vec![0.0; dim],
        }
    }

    /// Dimension `m` of the underlying space.
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm_inf() <= tol
    }
}

/// Height of `v` against `phi`: the signed pairing that extends
/// `height(wedge(v_1, …, v_(m-1)), v) = det [v_1 … v_(m-1) v]`.
#[inline]
pub fn height(phi: &MultiCovector, v: &DVector<f64>) -> f64 {
    let m = phi.coeffs.len();
    assert_eq!(v.len(), m, "height: vector dimension mismatch");
    let mut acc = 0.0;
    for (j, c) in phi.coeffs.iter().enumerate() {
        // sign (-1)^(m-1-j), 0-based row j
        let s = if (m - 1 - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += s * c * v[j];
    }
    acc
}

/// Wedge of `m-1` vectors of `R^m`, expressed in the `E_i` basis. The i-th
/// coefficient is the minor of `[v_1 … v_(m-1)]` with row i deleted.
pub fn wedge_hyperplane(vectors: &[DVector<f64>]) -> Result<MultiCovector> {
    if vectors.is_empty() {
        return Err(Error::DegenerateInput("wedge of no vectors".into()));
    }
    let m = vectors[0].len();
    if vectors.len() != m - 1 {
        return Err(Error::DimensionMismatch {
            expected: m - 1,
            got: vectors.len(),
        });
    }
    for v in vectors {
        if v.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: v.len(),
            });
        }
    }
    let mut coeffs = vec![0.0; m];
    let mut minor = DMatrix::zeros(m - 1, m - 1);
    for del in 0..m {
        for (col, v) in vectors.iter().enumerate() {
            let mut r = 0;
            for row in 0..m {
                if row == del {
                    continue;
                }
                minor[(r, col)] = v[row];
                r += 1;
            }
        }
        coeffs[del] = if m == 1 {
            1.0
        } else {
            minor.clone().lu().determinant()
        };
    }
    Ok(MultiCovector::from_coeffs(coeffs))
}

/// Sign of the ordered volume of the natural `E_1, …, E_m` ordering.
pub fn natural_ordering_sign(m: usize) -> f64 {
    if (m * (m - 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unit ellipsoid of hyperplane directions: the coefficient sphere of a
/// `ζ`-basis with ordered volume one.
#[derive(Debug, Clone)]
pub struct UnitEllipsoid {
    id: String,
    /// Columns are the `ζ_i` expressed in the `E_i` basis.
    zeta: DMatrix<f64>,
    inv: DMatrix<f64>,
}

impl UnitEllipsoid {
    /// Default basis: the `E_i`, with the first two entries swapped when the
    /// natural ordering has negative volume.
    pub fn standard(dim: usize) -> Self {
        let mut zeta = DMatrix::identity(dim, dim);
        if natural_ordering_sign(dim) < 0.0 && dim >= 2 {
            zeta.swap_columns(0, 1);
        }
        Self {
            id: format!("standard-{dim}"),
            inv: zeta.clone().try_inverse().expect("permutation is invertible"),
            zeta,
        }
    }

    /// Ellipsoid from an explicit basis; the ordered volume must be one.
    pub fn from_basis(id: impl Into<String>, zeta: DMatrix<f64>) -> Result<Self> {
        if zeta.nrows() != zeta.ncols() {
            return Err(Error::DimensionMismatch {
                expected: zeta.nrows(),
                got: zeta.ncols(),
            });
        }
        let m = zeta.nrows();
        let det = zeta.clone().lu().determinant();
        let volume = natural_ordering_sign(m) * det;
        if (volume - 1.0).abs() > BASIS_VOLUME_TOL {
            return Err(Error::DegenerateInput(format!(
                "zeta basis has ordered volume {volume}, expected 1"
            )));
        }
        let inv = zeta
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateInput("zeta basis is singular".into()))?;
        Ok(Self {
            id: id.into(),
            zeta,
            inv,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.zeta.nrows()
    }

    /// Coefficients of `phi` in the `ζ`-basis.
    pub fn coords(&self, phi: &MultiCovector) -> DVector<f64> {
        let v = DVector::from_column_slice(phi.coeffs());
        &self.inv * v
    }

    /// Covector with the given `ζ`-coefficients.
    pub fn from_coords(&self, a: &DVector<f64>) -> MultiCovector {
        let v = &self.zeta * a;
        MultiCovector::from_coeffs(v.as_slice().to_vec())
    }

    /// Whether `phi` lies on the ellipsoid within `tol`.
    pub fn contains(&self, phi: &MultiCovector, tol: f64) -> bool {
        (self.coords(phi).norm() - 1.0).abs() <= tol
    }

    /// One uniform draw from the ellipsoid.
    pub fn draw(&self, rng: &mut impl Rng) -> MultiCovector {
        let m = self.dim();
        loop {
            let a = DVector::from_iterator(m, (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)));
            let n = a.norm();
            if n > 1e-12 {
                return self.from_coords(&(a / n));
            }
        }
    }
}

/// `count` uniform draws from the ellipsoid, deterministic in `seed`.
pub fn sample_ellipsoid(s: &UnitEllipsoid, seed: u64, count: usize) -> Vec<MultiCovector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| s.draw(&mut rng)).collect()
}

/// Radial projection of `phi` onto the ellipsoid. Returns the projected
/// covector and the positive scalar `mu` with `mu * phi` on the ellipsoid.
pub fn project_to_ellipsoid(
    s: &UnitEllipsoid,
    phi: &MultiCovector,
) -> Result<(MultiCovector, f64)> {
    if phi.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: phi.dim(),
        });
    }
    let n = s.coords(phi).norm();
    if n <= 1e-300 {
        return Err(Error::DegenerateInput(
            "cannot project the zero covector to the ellipsoid".into(),
        ));
    }
    let mu = 1.0 / n;
    Ok((phi.scaled(mu), mu))
}
