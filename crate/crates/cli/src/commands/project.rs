//! `vacua project` — remainder-series experiment for one body/weight.

use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use vacua_core::equidist::{
    fit_exponent, hemisphere_remainder, remainder_series, ExponentFit, SumConfig, WeightFunction,
};
use vacua_core::lattice::DEFAULT_ENUMERATION_CAP;

use crate::formats::{load_body, parse_t_range};
use crate::output::{timestamp_line, write_json, write_points_csv, write_series_csv};
use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    /// Constant boundary weight (smooth).
    Const,
    /// `1 + cos(theta)` of the direction angle (smooth).
    Cos,
    /// Indicator of the closed upper hemisphere (clustering regime).
    Hemisphere,
}

impl WeightArg {
    fn name(&self) -> &'static str {
        match self {
            WeightArg::Const => "const",
            WeightArg::Cos => "cos",
            WeightArg::Hemisphere => "hemisphere",
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Norm body: euclid2, euclid3, or a JSON file path
    #[arg(long)]
    pub body: String,

    /// Boundary weight
    #[arg(long = "f", value_enum, default_value = "const")]
    pub weight: WeightArg,

    /// Homogeneity degree alpha >= 0 (hemisphere forces 0)
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,

    /// Dilation range start:end:count, geometrically spaced
    #[arg(long)]
    pub t: String,

    /// Base quadrature resolution for the leading term
    #[arg(long, default_value_t = 512)]
    pub quad_points: usize,

    /// First-coordinate columns per summation slab
    #[arg(long, default_value_t = 8)]
    pub slab_columns: usize,

    /// Enumeration cap (points per dilate)
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,

    /// Series CSV output path
    #[arg(long, default_value = "series.csv")]
    pub out: PathBuf,

    /// JSON summary output path
    #[arg(long, default_value = "summary.json")]
    pub summary: PathBuf,

    /// Also write the lattice points of the largest dilate to CSV
    #[arg(long)]
    pub emit_points: Option<PathBuf>,

    /// Omit timestamps so reruns are byte-identical
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Serialize)]
struct ConfigEcho {
    body: String,
    weight: &'static str,
    alpha: f64,
    t: String,
    quad_points: usize,
    slab_columns: usize,
    cap: u64,
}

#[derive(Debug, Serialize)]
struct Summary {
    command: &'static str,
    config: ConfigEcho,
    rows: usize,
    slope: f64,
    envelope_slope: f64,
    used_points: usize,
    dropped_zeros: usize,
    envelope_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let body = load_body(&args.body)?;
    let t_values = parse_t_range(&args.t)?;
    if args.alpha < 0.0 {
        return Err(UsageError("alpha must be non-negative".into()).into());
    }
    let cfg = SumConfig {
        cap: args.cap,
        slab_columns: args.slab_columns,
    };
    let series = match args.weight {
        WeightArg::Hemisphere => hemisphere_remainder(body.dim(), &t_values, &cfg)?,
        WeightArg::Const => {
            let f = WeightFunction::constant(args.alpha);
            remainder_series(&f, &body, &t_values, args.quad_points, &cfg)?
        }
        WeightArg::Cos => {
            let f = WeightFunction::one_plus_cos(args.alpha);
            remainder_series(&f, &body, &t_values, args.quad_points, &cfg)?
        }
    };
    let fit: ExponentFit = fit_exponent(&series)?;

    let config = ConfigEcho {
        body: args.body.clone(),
        weight: args.weight.name(),
        alpha: if args.weight == WeightArg::Hemisphere {
            0.0
        } else {
            args.alpha
        },
        t: args.t.clone(),
        quad_points: args.quad_points,
        slab_columns: args.slab_columns,
        cap: args.cap,
    };
    let mut echo = vec![
        "# vacua project".to_string(),
        format!(
            "# body={} weight={} alpha={} t={} quad_points={} slab_columns={} cap={}",
            config.body,
            config.weight,
            config.alpha,
            config.t,
            config.quad_points,
            config.slab_columns,
            config.cap
        ),
    ];
    if let Some(line) = timestamp_line(args.no_timestamp) {
        echo.push(line);
    }
    write_series_csv(&args.out, &echo, &series)?;

    if let Some(points_path) = &args.emit_points {
        let t_max = *t_values.last().expect("validated nonempty");
        let points = vacua_core::lattice::enumerate_ball(&body, t_max, args.cap)?;
        write_points_csv(points_path, &echo, body.dim(), &points)?;
    }

    let timestamp = timestamp_line(args.no_timestamp).map(|_| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    write_json(
        &args.summary,
        &Summary {
            command: "project",
            config,
            rows: series.len(),
            slope: fit.slope,
            envelope_slope: fit.envelope_slope,
            used_points: fit.used_points,
            dropped_zeros: fit.dropped_zeros,
            envelope_points: fit.envelope_points,
            timestamp,
        },
    )?;
    println!(
        "project: {} rows, slope {:.4}, envelope slope {:.4}",
        series.len(),
        fit.slope,
        fit.envelope_slope
    );
    Ok(())
}
