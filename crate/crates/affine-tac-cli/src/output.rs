//! Report envelope and plot-data emission.
//!
//! JSON reports are deterministic for a fixed (config, seed) up to the
//! `wall_clock_ms` field: map-valued data uses ordered maps and the draw
//! stream is sequential regardless of worker threads. CSV plot data carries
//! no timing field, so it is byte-identical outright.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::RunConfig;

pub const TOOL: &str = "affine-tac";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Envelope fields embedded in every JSON report.
#[derive(Serialize)]
pub struct Meta<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub wall_clock_ms: u64,
    /// Non-Morse draw rejections summed over every estimator run.
    pub rejections: usize,
    pub config: &'a RunConfig,
}

#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub meta: Meta<'a>,
    pub result: T,
}

pub fn render_json<T: Serialize>(report: &Report<T>) -> String {
    let mut text =
        serde_json::to_string_pretty(report).expect("report types serialize without error");
    text.push('\n');
    text
}

/// Histogram rows as `count,frequency` lines; header only when empty.
pub fn histogram_csv(histogram: &BTreeMap<usize, usize>) -> String {
    let mut out = String::from("count,frequency\n");
    for (count, frequency) in histogram {
        let _ = writeln!(out, "{count},{frequency}");
    }
    out
}

/// One curvature scan sample.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub chart: String,
    pub u: f64,
    pub v: f64,
    #[serde(rename = "G")]
    pub g: f64,
    pub sigma_min: f64,
}

/// Scan rows as `u,v,G,sigma_min` lines; header only when empty.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("u,v,G,sigma_min\n");
    for row in rows {
        let _ = writeln!(out, "{},{},{},{}", row.u, row.v, row.g, row.sigma_min);
    }
    out
}
