//! Input file schemas and their conversion into core types.

use std::path::Path;

use serde::Deserialize;
use vacua_core::geometry::YukawaTensor;
use vacua_core::lattice::NormBody;
use vacua_core::Complex;

use crate::UsageError;

/// Norm-body file: `{"dimension": 2, "gram": [[1.0, 0.0], [0.0, 1.0]]}`.
#[derive(Debug, Deserialize)]
pub struct BodyFile {
    pub dimension: usize,
    pub gram: Vec<Vec<f64>>,
}

/// Yukawa file: `{"h21": 1, "entries": [{"ijk": [1,1,1], "re": 1.0, "im": 0.0}]}`.
///
/// Indices are 1-based; unlisted triples are zero; listing a triple
/// twice (in any index order) is an error.
#[derive(Debug, Deserialize)]
pub struct YukawaFile {
    pub h21: usize,
    #[serde(default)]
    pub entries: Vec<YukawaEntry>,
}

#[derive(Debug, Deserialize)]
pub struct YukawaEntry {
    pub ijk: [usize; 3],
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

fn read_to_string(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())).into())
}

/// Load a norm body from `euclid<N>` shorthand or a JSON file path.
pub fn load_body(spec: &str) -> anyhow::Result<NormBody> {
    if let Some(n) = spec.strip_prefix("euclid") {
        if let Ok(dim) = n.parse::<usize>() {
            if dim == 0 {
                return Err(UsageError("body dimension must be positive".into()).into());
            }
            return Ok(NormBody::euclidean(dim));
        }
    }
    let path = Path::new(spec);
    let text = read_to_string(path)?;
    let file: BodyFile = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("invalid body file {}: {e}", path.display())))?;
    let dim = file.dimension;
    if file.gram.len() != dim || file.gram.iter().any(|row| row.len() != dim) {
        return Err(UsageError(format!(
            "body file {}: gram must be {dim}x{dim}",
            path.display()
        ))
        .into());
    }
    let flat: Vec<f64> = file.gram.into_iter().flatten().collect();
    NormBody::new(dim, flat)
        .map_err(|e| UsageError(format!("body file {}: {e}", path.display())).into())
}

/// Load a Yukawa tensor from a JSON file (1-based indices).
pub fn load_yukawa(path: &Path) -> anyhow::Result<YukawaTensor> {
    let text = read_to_string(path)?;
    let file: YukawaFile = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("invalid yukawa file {}: {e}", path.display())))?;
    let mut triples = Vec::with_capacity(file.entries.len());
    for entry in &file.entries {
        let [i, j, k] = entry.ijk;
        for &idx in &entry.ijk {
            if idx == 0 || idx > file.h21 {
                return Err(UsageError(format!(
                    "yukawa file {}: index {idx} outside 1..={}",
                    path.display(),
                    file.h21
                ))
                .into());
            }
        }
        triples.push((i - 1, j - 1, k - 1, Complex::new(entry.re, entry.im)));
    }
    YukawaTensor::from_triples(file.h21, triples)
        .map_err(|e| UsageError(format!("yukawa file {}: {e}", path.display())).into())
}

/// Parse a `start:end:count` range into geometric t values.
pub fn parse_t_range(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let usage = || UsageError(format!("t range `{spec}` must be start:end:count"));
    if parts.len() != 3 {
        return Err(usage().into());
    }
    let start: f64 = parts[0].parse().map_err(|_| usage())?;
    let end: f64 = parts[1].parse().map_err(|_| usage())?;
    let count: usize = parts[2].parse().map_err(|_| usage())?;
    vacua_core::equidist::geometric_t_values(start, end, count)
        .map_err(|e| UsageError(format!("t range `{spec}`: {e}")).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclid_shorthand() {
        assert_eq!(load_body("euclid2").unwrap().dim(), 2);
        assert_eq!(load_body("euclid3").unwrap().dim(), 3);
        assert!(load_body("euclid0").is_err());
    }

    #[test]
    fn t_range_parses_geometrically() {
        let ts = parse_t_range("10:400:20").unwrap();
        assert_eq!(ts.len(), 20);
        assert!((ts[0] - 10.0).abs() < 1e-12);
        assert!((ts[19] - 400.0).abs() < 1e-9);
        assert!(parse_t_range("10:400").is_err());
        assert!(parse_t_range("400:10:5").is_err());
    }
}
