//! Total absolute curvature by Monte Carlo counting of height-function
//! critical points.
//!
//! The estimator draws covectors uniformly from a unit ellipsoid, counts
//! critical points per draw, rejects draws with degenerate Hessians, and
//! averages. Draws come from a single sequential stream, the per-draw work
//! runs in parallel in draw order, and aggregation is sequential, so a fixed
//! seed gives an identical report for any thread count. The count per draw
//! never involves the frame; the frame id is carried in the report to name
//! the certified pair.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{MultiCovector, UnitEllipsoid};
use crate::manifold::Atlas;
use crate::morse::{find_critical_points, MorseCount, SearchConfig};
use crate::par;

/// Monte Carlo summary of the critical-point average.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TacReport {
    pub tau_estimate: f64,
    pub stderr: f64,
    /// Critical-point count -> number of accepted draws with that count.
    pub histogram: BTreeMap<usize, usize>,
    pub non_morse_rejections: usize,
    pub sample_count: usize,
    pub ellipsoid_id: String,
    pub frame_id: String,
}

/// Per-draw diagnostics, one line per drawn covector in draw order.
#[derive(Debug, Clone, Serialize)]
pub struct PhiDiagnostic {
    pub index: usize,
    pub seeds: usize,
    pub converged: usize,
    pub rejected: bool,
    pub count: usize,
}

/// First accepted draw whose count exceeds the minimum.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub draw_index: usize,
    pub phi: Vec<f64>,
    pub count: usize,
}

/// Report plus diagnostics and the retained counts in draw order.
#[derive(Debug, Clone)]
pub struct TacOutcome {
    pub report: TacReport,
    pub diagnostics: Vec<PhiDiagnostic>,
    accepted: Vec<(usize, MorseCount)>,
}

impl TacOutcome {
    /// Accepted draws as (draw index, search outcome), in draw order.
    pub fn accepted(&self) -> &[(usize, MorseCount)] {
        &self.accepted
    }
}

/// Certificate that every sampled Morse height function attains the minimum
/// possible critical-point count. A witness disproves minimality; absence of
/// one is statistical evidence, not a proof.
#[derive(Debug, Clone, Serialize)]
pub struct MinimalityCertificate {
    pub minimal: bool,
    pub witness: Option<Witness>,
    pub report: TacReport,
}

/// Draws `sample_count` accepted covectors from `space` and averages their
/// critical-point counts. Rejected draws are replaced by further draws from
/// the same stream; a rejection rate above one half aborts.
pub fn estimate_tau(
    atlas: &Atlas,
    frame_id: &str,
    space: &UnitEllipsoid,
    sample_count: usize,
    seed: u64,
    config: &SearchConfig,
) -> Result<TacOutcome> {
    if sample_count == 0 {
        return Err(Error::DegenerateInput("sample_count must be positive".into()));
    }
    let max_attempts = 2 * sample_count;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted: Vec<(usize, MorseCount)> = Vec::with_capacity(sample_count);
    let mut diagnostics: Vec<PhiDiagnostic> = Vec::new();
    let mut attempts = 0usize;
    let mut rejections = 0usize;
    while accepted.len() < sample_count {
        if attempts >= max_attempts {
            return Err(Error::Pathology(format!(
                "non-Morse rejection rate {rejections}/{attempts} exceeds one half; \
                 the input looks symmetric or degenerate"
            )));
        }
        let need = sample_count - accepted.len();
        let batch_len = need.min(max_attempts - attempts);
        // Draw order is fixed by the sequential stream; the heavy search runs
        // in parallel but results are consumed in draw order.
        let batch: Vec<(usize, MultiCovector)> = (0..batch_len)
            .map(|k| (attempts + k, space.draw(&mut rng)))
            .collect();
        attempts += batch_len;
        let results: Vec<Result<MorseCount>> =
            par::map_slice(&batch, |(_, phi)| find_critical_points(atlas, phi, config));
        for ((draw_index, _), result) in batch.iter().zip(results) {
            let count = result?;
            diagnostics.push(PhiDiagnostic {
                index: *draw_index,
                seeds: count.seeds,
                converged: count.converged,
                rejected: !count.morse,
                count: count.count(),
            });
            if count.morse {
                if accepted.len() < sample_count {
                    accepted.push((*draw_index, count));
                }
            } else {
                rejections += 1;
            }
        }
    }
    let counts: Vec<f64> = accepted.iter().map(|(_, c)| c.count() as f64).collect();
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let stderr = if counts.len() > 1 {
        let var = counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let mut histogram = BTreeMap::new();
    for (_, c) in &accepted {
        *histogram.entry(c.count()).or_insert(0usize) += 1;
    }
    Ok(TacOutcome {
        report: TacReport {
            tau_estimate: mean,
            stderr,
            histogram,
            non_morse_rejections: rejections,
            sample_count: accepted.len(),
            ellipsoid_id: space.id().to_string(),
            frame_id: frame_id.to_string(),
        },
        diagnostics,
        accepted,
    })
}

/// Runs the estimator and reports whether every accepted draw had exactly
/// two critical points, with the first counterexample as witness.
pub fn certify_minimal(
    atlas: &Atlas,
    frame_id: &str,
    space: &UnitEllipsoid,
    sample_count: usize,
    seed: u64,
    config: &SearchConfig,
) -> Result<MinimalityCertificate> {
    let outcome = estimate_tau(atlas, frame_id, space, sample_count, seed, config)?;
    let witness = outcome
        .accepted
        .iter()
        .find(|(_, c)| c.count() > 2)
        .map(|(draw_index, c)| Witness {
            draw_index: *draw_index,
            phi: c.phi.coeffs().to_vec(),
            count: c.count(),
        });
    Ok(MinimalityCertificate {
        minimal: witness.is_none(),
        witness,
        report: outcome.report,
    })
}

/// True when the minimality certificate holds for every listed ellipsoid.
pub fn ellipsoid_invariance(
    atlas: &Atlas,
    frame_id: &str,
    spaces: &[UnitEllipsoid],
    sample_count: usize,
    seed: u64,
    config: &SearchConfig,
) -> Result<bool> {
    for space in spaces {
        let cert = certify_minimal(atlas, frame_id, space, sample_count, seed, config)?;
        if !cert.minimal {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the Betti-sum lower bound on the estimate; `None` when the Betti
/// numbers are unknown.
pub fn chern_lashof_check(report: &TacReport, betti: Option<&[usize]>) -> Option<bool> {
    let betti = betti?;
    let sum: usize = betti.iter().sum();
    Some(report.tau_estimate >= sum as f64 - 3.0 * report.stderr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::natural_ordering_sign;
    use crate::test_shapes::{sphere_atlas, torus_atlas};
    use nalgebra::DMatrix;

    #[test]
    fn sphere_average_is_exactly_two() {
        let atlas = sphere_atlas();
        let space = UnitEllipsoid::standard(3);
        let outcome =
            estimate_tau(&atlas, "centro_affine", &space, 40, 1, &SearchConfig::default())
                .unwrap();
        let r = &outcome.report;
        assert_eq!(r.tau_estimate, 2.0);
        assert_eq!(r.stderr, 0.0);
        assert_eq!(r.histogram, BTreeMap::from([(2usize, 40usize)]));
        assert_eq!(r.non_morse_rejections, 0);
        assert_eq!(r.sample_count, 40);
        assert_eq!(outcome.diagnostics.len(), 40);
        assert!(outcome.diagnostics.iter().all(|d| !d.rejected));
    }

    #[test]
    fn torus_average_is_exactly_four() {
        let atlas = torus_atlas();
        let space = UnitEllipsoid::standard(3);
        let outcome =
            estimate_tau(&atlas, "euclidean_normal", &space, 30, 2, &SearchConfig::default())
                .unwrap();
        let r = &outcome.report;
        assert_eq!(r.tau_estimate, 4.0);
        assert_eq!(r.stderr, 0.0);
        assert!(r.histogram.keys().all(|&k| k == 4));
        assert!(chern_lashof_check(r, Some(&[1, 2, 1])).unwrap());
    }

    #[test]
    fn sphere_certificate_is_minimal_with_no_witness() {
        let atlas = sphere_atlas();
        let space = UnitEllipsoid::standard(3);
        let cert =
            certify_minimal(&atlas, "centro_affine", &space, 25, 3, &SearchConfig::default())
                .unwrap();
        assert!(cert.minimal);
        assert!(cert.witness.is_none());
        assert!(chern_lashof_check(&cert.report, Some(&[1, 0, 1])).unwrap());
    }

    #[test]
    fn torus_certificate_fails_with_an_early_witness() {
        let atlas = torus_atlas();
        let space = UnitEllipsoid::standard(3);
        let cert =
            certify_minimal(&atlas, "euclidean_normal", &space, 10, 4, &SearchConfig::default())
                .unwrap();
        assert!(!cert.minimal);
        let w = cert.witness.unwrap();
        assert_eq!(w.draw_index, 0);
        assert_eq!(w.count, 4);
    }

    #[test]
    fn reports_are_deterministic_across_thread_counts() {
        let atlas = torus_atlas();
        let space = UnitEllipsoid::standard(3);
        let config = SearchConfig::default();
        let single = par::with_threads(1, || {
            estimate_tau(&atlas, "euclidean_normal", &space, 12, 9, &config).unwrap()
        });
        let multi = par::with_threads(4, || {
            estimate_tau(&atlas, "euclidean_normal", &space, 12, 9, &config).unwrap()
        });
        assert_eq!(
            serde_json::to_string(&single.report).unwrap(),
            serde_json::to_string(&multi.report).unwrap()
        );
        assert_eq!(single.accepted.len(), multi.accepted.len());
        for (a, b) in single.accepted.iter().zip(multi.accepted.iter()) {
            assert_eq!(a.0, b.0);
            assert_eq!(a.1.phi.coeffs(), b.1.phi.coeffs());
        }
    }

    #[test]
    fn estimate_never_reads_the_frame_beyond_its_name() {
        let atlas = sphere_atlas();
        let space = UnitEllipsoid::standard(3);
        let config = SearchConfig::default();
        let a = estimate_tau(&atlas, "centro_affine", &space, 15, 5, &config).unwrap();
        let b = estimate_tau(&atlas, "euclidean_normal", &space, 15, 5, &config).unwrap();
        assert_eq!(a.report.tau_estimate, b.report.tau_estimate);
        assert_eq!(a.report.histogram, b.report.histogram);
        assert_ne!(a.report.frame_id, b.report.frame_id);
    }

    #[test]
    fn minimality_holds_for_sheared_ellipsoids_on_the_sphere() {
        let atlas = sphere_atlas();
        let sign = natural_ordering_sign(3);
        // Volume-one shear, admissible for the ordered-basis convention.
        let mut z = DMatrix::identity(3, 3);
        z[(0, 1)] = 0.6;
        z[(1, 2)] = -0.25;
        if sign < 0.0 {
            z.swap_columns(0, 1);
        }
        let sheared = UnitEllipsoid::from_basis("sheared", z).unwrap();
        let spaces = [UnitEllipsoid::standard(3), sheared];
        let config = SearchConfig::default();
        assert!(ellipsoid_invariance(&atlas, "centro_affine", &spaces, 12, 6, &config).unwrap());
        let torus = torus_atlas();
        assert!(
            !ellipsoid_invariance(&torus, "euclidean_normal", &spaces, 8, 6, &config).unwrap()
        );
    }

    #[test]
    fn total_rejection_raises_a_pathology_error() {
        let atlas = sphere_atlas();
        let space = UnitEllipsoid::standard(3);
        // A degeneracy threshold above every attainable determinant rejects
        // every draw.
        let config = SearchConfig {
            morse_tol: 1e9,
            ..SearchConfig::default()
        };
        let err = estimate_tau(&atlas, "centro_affine", &space, 4, 7, &config).unwrap_err();
        assert!(matches!(err, Error::Pathology(_)));
    }
}
