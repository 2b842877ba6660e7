//! `vacua count-rigid` — exact orbit counting for the rigid model.

use std::path::PathBuf;

use serde::Serialize;
use vacua_core::models::{
    divisor_sum, rigid_count_coefficient, rigid_enumerate_vec, rigid_histogram, Histogram,
    HistogramSpec,
};

use crate::output::{write_json, write_vacua_csv};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Tadpole bound L >= 1
    #[arg(long = "L", value_parser = clap::value_parser!(u64).range(1..))]
    pub l: u64,

    /// Write one CSV row per orbit representative
    #[arg(long)]
    pub emit_vacua: Option<PathBuf>,

    /// Write the hyperbolic-equidistribution histogram JSON
    #[arg(long)]
    pub histogram: Option<PathBuf>,

    /// Histogram truncation height
    #[arg(long, default_value_t = 4.0)]
    pub t_max: f64,

    /// Histogram columns over Re tau
    #[arg(long, default_value_t = 4)]
    pub nx: usize,

    /// Histogram rows over Im tau
    #[arg(long, default_value_t = 4)]
    pub ny: usize,

    /// JSON output path
    #[arg(long, default_value = "count.json")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct ConfigEcho {
    l: u64,
    t_max: f64,
    nx: usize,
    ny: usize,
}

#[derive(Debug, Serialize)]
struct BinJson {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
    area: f64,
    count: u64,
    area_fraction: f64,
    count_fraction: f64,
}

#[derive(Debug, Serialize)]
struct HistogramJson {
    config: ConfigEcho,
    total_count: u64,
    overflow_count: u64,
    total_area: f64,
    max_deviation: f64,
    bins: Vec<BinJson>,
}

#[derive(Debug, Serialize)]
struct CountJson {
    command: &'static str,
    config: ConfigEcho,
    count: u64,
    average_order: f64,
    ratio_to_average_order: f64,
}

fn histogram_json(hist: &Histogram) -> HistogramJson {
    let total = hist.total_count.max(1) as f64;
    let mut max_deviation = 0.0f64;
    let bins = hist
        .bins
        .iter()
        .map(|b| {
            let area_fraction = b.area / hist.total_area;
            let count_fraction = b.count as f64 / total;
            max_deviation = max_deviation.max((area_fraction - count_fraction).abs());
            BinJson {
                x_lo: b.x_lo,
                x_hi: b.x_hi,
                y_lo: b.y_lo,
                y_hi: b.y_hi,
                area: b.area,
                count: b.count,
                area_fraction,
                count_fraction,
            }
        })
        .collect();
    HistogramJson {
        config: ConfigEcho {
            l: 0, // caller fills
            t_max: hist.spec.t_max,
            nx: hist.spec.nx,
            ny: hist.spec.ny,
        },
        total_count: hist.total_count,
        overflow_count: hist.overflow_count,
        total_area: hist.total_area,
        max_deviation,
        bins,
    }
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let count = divisor_sum(args.l)?;
    let average_order = rigid_count_coefficient() * (args.l as f64) * (args.l as f64);
    let config = ConfigEcho {
        l: args.l,
        t_max: args.t_max,
        nx: args.nx,
        ny: args.ny,
    };

    if let Some(path) = &args.emit_vacua {
        let vacua = rigid_enumerate_vec(args.l)?;
        write_vacua_csv(path, vacua.into_iter())?;
    }

    if let Some(path) = &args.histogram {
        let spec = HistogramSpec {
            t_max: args.t_max,
            nx: args.nx,
            ny: args.ny,
        };
        let hist = rigid_histogram(args.l, &spec)?;
        let mut json = histogram_json(&hist);
        json.config.l = args.l;
        write_json(path, &json)?;
    }

    write_json(
        &args.out,
        &CountJson {
            command: "count-rigid",
            config,
            count,
            average_order,
            ratio_to_average_order: count as f64 / average_order,
        },
    )?;
    println!("count-rigid: L = {}, count = {count}", args.l);
    Ok(())
}
