//! `vacua census` — exact rigid count vs density * volume prediction.

use std::path::PathBuf;

use serde::Serialize;
use vacua_core::density::closed_form_normalization;
use vacua_core::models::{rigid_census, FUNDAMENTAL_DOMAIN_WP_VOLUME};

use crate::commands::DEFAULT_SEED;
use crate::output::{write_json, EstimateJson};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Tadpole bound L >= 1
    #[arg(long = "L", value_parser = clap::value_parser!(u64).range(1..))]
    pub l: u64,

    /// Monte-Carlo samples for the density side
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,

    /// Stream-family seed
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// JSON output path
    #[arg(long, default_value = "census.json")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct CensusJson {
    command: &'static str,
    config: ConfigEcho,
    exact_count: u64,
    kcrit: EstimateJson,
    normalization: f64,
    wp_volume: f64,
    predicted: f64,
    ratio: f64,
}

#[derive(Debug, Serialize)]
struct ConfigEcho {
    l: u64,
    samples: u64,
    seed: u64,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let report = rigid_census(args.l, args.samples, args.seed)?;
    write_json(
        &args.out,
        &CensusJson {
            command: "census",
            config: ConfigEcho {
                l: args.l,
                samples: args.samples,
                seed: args.seed,
            },
            exact_count: report.exact,
            kcrit: EstimateJson::from(&report.kcrit),
            normalization: closed_form_normalization(0),
            wp_volume: FUNDAMENTAL_DOMAIN_WP_VOLUME,
            predicted: report.predicted,
            ratio: report.ratio,
        },
    )?;
    println!(
        "census: L = {}, exact {}, predicted {:.1}, ratio {:.4}",
        args.l, report.exact, report.predicted, report.ratio
    );
    if (report.ratio - 1.0).abs() > 0.1 {
        anyhow::bail!(
            "calibration failure: census ratio {:.4} outside [0.9, 1.1]",
            report.ratio
        );
    }
    Ok(())
}
