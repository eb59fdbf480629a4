//! Numerical laboratory for equiaffine immersions of compact manifolds into
//! affine space.
//!
//! The crate evaluates immersions chart by chart, decomposes second
//! derivatives into tangential and transversal parts, and derives from that
//! the Lipschitz-Killing curvature, Morse counts of height functions, and a
//! Monte Carlo estimate of the total absolute curvature. On top of those
//! primitives sit a convexity certifier, a codimension-reduction step, and a
//! catalog of closed-form test surfaces.
//!
//! Heights are taken against hyperplane covectors: an element of
//! `∧^(m-1) R^m` expressed in the basis `E_i = e_1 ∧ … ∧ ê_i ∧ … ∧ e_m`.
//! All sweeps are deterministic for a fixed seed, independent of the number
//! of worker threads.

pub mod catalog;
pub mod curvature;
pub mod equiaffine;
pub mod error;
pub mod exterior;
pub mod geometry;
pub mod manifest;
pub mod manifold;
pub mod morse;
pub mod par;
pub mod tac;

#[cfg(test)]
pub(crate) mod test_shapes;

pub use error::{Error, Result};
