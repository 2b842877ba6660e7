//! Output helpers: JSON writing, CSV streams, config echo lines.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use vacua_core::density::DensityEstimate;
use vacua_core::models::RigidVacuum;

/// Serialize `value` as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))
}

/// Unix timestamp for output headers, skipped under `--no-timestamp`.
pub fn timestamp_line(no_timestamp: bool) -> Option<String> {
    if no_timestamp {
        return None;
    }
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Some(format!("# timestamp={secs}"))
}

/// Serializable mirror of a density estimate.
#[derive(Debug, Serialize)]
pub struct EstimateJson {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub form: &'static str,
}

impl From<&DensityEstimate> for EstimateJson {
    fn from(e: &DensityEstimate) -> Self {
        Self {
            value: e.value,
            std_error: e.std_error,
            samples: e.samples,
            seed: e.seed,
            form: e.form.tag(),
        }
    }
}

/// Stream an experiment series to CSV with `#` echo lines on top.
pub fn write_series_csv(
    path: &Path,
    echo_lines: &[String],
    series: &vacua_core::equidist::ExperimentSeries,
) -> anyhow::Result<()> {
    let mut out = Vec::new();
    for line in echo_lines {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "t,sum,leading,remainder")?;
    for i in 0..series.len() {
        writeln!(
            out,
            "{},{},{},{}",
            series.t_values[i], series.sums[i], series.leading[i], series.remainders[i]
        )?;
    }
    std::fs::write(path, out).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))
}

/// Stream lattice points to CSV: coordinates, then the form value.
pub fn write_points_csv(
    path: &Path,
    echo_lines: &[String],
    dim: usize,
    points: &[vacua_core::lattice::BallPoint],
) -> anyhow::Result<()> {
    let mut out = Vec::new();
    for line in echo_lines {
        writeln!(out, "{line}")?;
    }
    let header: Vec<String> = (0..dim).map(|i| format!("c{i}")).collect();
    writeln!(out, "{},norm_sq", header.join(","))?;
    for p in points {
        let coords: Vec<String> = p.coords.iter().map(|c| c.to_string()).collect();
        writeln!(out, "{},{}", coords.join(","), p.norm_sq)?;
    }
    std::fs::write(path, out).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))
}

/// Stream rigid vacua to CSV.
pub fn write_vacua_csv(
    path: &Path,
    vacua: impl Iterator<Item = RigidVacuum>,
) -> anyhow::Result<()> {
    let mut out = Vec::new();
    writeln!(out, "a1,a2,b1,b2,det,re_tau,im_tau,re_tau_red,im_tau_red")?;
    for v in vacua {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            v.a1, v.a2, v.b1, v.b2, v.det, v.tau.re, v.tau.im, v.tau_reduced.re, v.tau_reduced.im
        )?;
    }
    std::fs::write(path, out).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))
}

/// Complex matrix as parallel real/imaginary row-major grids.
#[derive(Debug, Serialize)]
pub struct ComplexMatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl ComplexMatrixJson {
    pub fn from_row_major(n: usize, data: &[vacua_core::Complex]) -> Self {
        let mut re = vec![vec![0.0; n]; n];
        let mut im = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                re[i][j] = data[i * n + j].re;
                im[i][j] = data[i * n + j].im;
            }
        }
        Self { re, im }
    }
}

/// Real matrix as nested rows.
pub fn real_matrix_rows(n: usize, data: &[f64]) -> Vec<Vec<f64>> {
    (0..n).map(|i| data[i * n..(i + 1) * n].to_vec()).collect()
}
