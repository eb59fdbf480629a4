//! Plain-text manifests describing catalog variants.
//!
//! One `key = value` pair per line; `#` starts a comment; blank lines are
//! skipped. Recognized keys:
//!
//! ```text
//! name                report name (defaults to the form's canonical name)
//! form                analytic family, one of the catalog entry names
//! betti               comma-separated Betti numbers, dim + 1 of them
//! param.<name>        form-specific scalar (torus_revolution: major, minor;
//!                     dumbbell: neck_depth, neck_width)
//! chart.<i>.lo        comma-separated lower bounds for chart i
//! chart.<i>.hi        comma-separated upper bounds for chart i
//! chart.<i>.periodic  comma-separated booleans for chart i
//! ```

use std::collections::BTreeMap;

use crate::catalog::{self, CatalogEntry, DomainOverride};
use crate::{Error, Result};

/// Ordered `key = value` pairs. Duplicate keys are rejected so a typo cannot
/// silently lose a setting.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((head, _)) => head.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Manifest(format!("line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(Error::Manifest(format!("line {}: empty key", lineno + 1)));
        }
        if pairs.iter().any(|(k, _)| k == key) {
            return Err(Error::Manifest(format!(
                "line {}: duplicate key {key}",
                lineno + 1
            )));
        }
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}

fn parse_floats(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Manifest(format!("{key}: bad number {s:?}")))
        })
        .collect()
}

fn parse_counts(key: &str, value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Manifest(format!("{key}: bad count {s:?}")))
        })
        .collect()
}

fn parse_bools(key: &str, value: &str) -> Result<Vec<bool>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<bool>()
                .map_err(|_| Error::Manifest(format!("{key}: bad boolean {s:?}")))
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct ManifestSpec {
    pub name: Option<String>,
    pub form: String,
    pub betti: Option<Vec<usize>>,
    pub params: BTreeMap<String, f64>,
    pub chart_overrides: BTreeMap<usize, DomainOverride>,
}

pub fn parse_manifest(text: &str) -> Result<ManifestSpec> {
    let mut spec = ManifestSpec::default();
    for (key, value) in parse_kv(text)? {
        if let Some(param) = key.strip_prefix("param.") {
            if param.is_empty() {
                return Err(Error::Manifest("empty parameter name".into()));
            }
            let parsed = value
                .parse::<f64>()
                .map_err(|_| Error::Manifest(format!("{key}: bad number {value:?}")))?;
            spec.params.insert(param.to_string(), parsed);
            continue;
        }
        if let Some(rest) = key.strip_prefix("chart.") {
            let (index, field) = rest.split_once('.').ok_or_else(|| {
                Error::Manifest(format!("{key}: expected chart.<index>.<field>"))
            })?;
            let index: usize = index
                .parse()
                .map_err(|_| Error::Manifest(format!("{key}: bad chart index")))?;
            let over = spec.chart_overrides.entry(index).or_default();
            match field {
                "lo" => over.lo = Some(parse_floats(&key, &value)?),
                "hi" => over.hi = Some(parse_floats(&key, &value)?),
                "periodic" => over.periodic = Some(parse_bools(&key, &value)?),
                other => {
                    return Err(Error::Manifest(format!(
                        "{key}: unknown chart field {other}"
                    )))
                }
            }
            continue;
        }
        match key.as_str() {
            "name" => spec.name = Some(value),
            "form" => spec.form = value,
            "betti" => spec.betti = Some(parse_counts(&key, &value)?),
            other => return Err(Error::Manifest(format!("unknown key {other}"))),
        }
    }
    if spec.form.is_empty() {
        return Err(Error::Manifest("manifest is missing form".into()));
    }
    Ok(spec)
}

pub fn build(spec: &ManifestSpec) -> Result<CatalogEntry> {
    let form = catalog::Form::parse(&spec.form)?;
    catalog::build_form(
        form,
        &spec.params,
        &spec.chart_overrides,
        spec.betti.clone(),
        spec.name.clone(),
    )
}
