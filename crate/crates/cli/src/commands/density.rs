//! `vacua density` — Monte-Carlo density estimates from a Yukawa file.

use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use vacua_core::density::{
    closed_form_normalization, index_mc, kcrit_ball_mc, kcrit_gaussian_mc, kcrit_one_modulus,
    McConfig,
};
use vacua_core::geometry::{hessian_basis, lambda_matrix};

use crate::commands::DEFAULT_SEED;
use crate::formats::load_yukawa;
use crate::output::{write_json, EstimateJson};
use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    /// Gaussian sampling in flux coordinates.
    Gaussian,
    /// Uniform unit-ball sampling through the Lambda eigenbasis.
    Ball,
    /// Signed (index) variant of the Gaussian form.
    Index,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Yukawa tensor JSON file
    #[arg(long)]
    pub yukawa: PathBuf,

    /// Number of Monte-Carlo samples
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,

    /// Stream-family seed
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Samples per slab (fixing it fixes the estimate bit-for-bit)
    #[arg(long, default_value_t = 65536)]
    pub slab_size: u64,

    /// Integral form
    #[arg(long, value_enum, default_value = "gaussian")]
    pub form: FormArg,

    /// For h21 = 1: compare against the closed form and report a z-score
    #[arg(long)]
    pub compare_closed: bool,

    /// JSON output path
    #[arg(long, default_value = "density.json")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct ConfigEcho {
    yukawa: String,
    h21: usize,
    samples: u64,
    seed: u64,
    slab_size: u64,
    form: &'static str,
}

#[derive(Debug, Serialize)]
struct CompareJson {
    closed: f64,
    normalization: f64,
    z_score: f64,
    calibration_ok: bool,
}

#[derive(Debug, Serialize)]
struct DensityJson {
    command: &'static str,
    config: ConfigEcho,
    estimate: EstimateJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    compare_closed: Option<CompareJson>,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let tensor = load_yukawa(&args.yukawa)?;
    let basis = hessian_basis(&tensor);
    let cfg = McConfig {
        samples: args.samples,
        seed: args.seed,
        slab_size: args.slab_size,
    };
    let estimate = match args.form {
        FormArg::Gaussian => kcrit_gaussian_mc(&basis, &cfg)?,
        FormArg::Index => index_mc(&basis, &cfg)?,
        FormArg::Ball => {
            let lam = lambda_matrix(&basis)?;
            kcrit_ball_mc(&basis, &lam, &cfg)?
        }
    };

    let compare = if args.compare_closed {
        if tensor.h21() != 1 {
            return Err(UsageError(format!(
                "--compare-closed needs a one-modulus tensor, got h21 = {}",
                tensor.h21()
            ))
            .into());
        }
        if args.form == FormArg::Index {
            return Err(UsageError(
                "--compare-closed applies to the unsigned density forms".into(),
            )
            .into());
        }
        let f = tensor.entry(0, 0, 0).norm();
        let closed = kcrit_one_modulus(f)?;
        let normalization = closed_form_normalization(1);
        let z_score =
            (closed / normalization - estimate.value).abs() / estimate.std_error.max(1e-300);
        Some(CompareJson {
            closed,
            normalization,
            z_score,
            calibration_ok: z_score <= 5.0,
        })
    } else {
        None
    };

    let json = DensityJson {
        command: "density",
        config: ConfigEcho {
            yukawa: args.yukawa.display().to_string(),
            h21: tensor.h21(),
            samples: args.samples,
            seed: args.seed,
            slab_size: args.slab_size,
            form: match args.form {
                FormArg::Gaussian => "gaussian",
                FormArg::Ball => "ball",
                FormArg::Index => "index",
            },
        },
        estimate: EstimateJson::from(&estimate),
        compare_closed: compare,
    };
    write_json(&args.out, &json)?;
    println!(
        "density: value {} +- {} ({} samples)",
        estimate.value, estimate.std_error, estimate.samples
    );
    if let Some(c) = &json.compare_closed {
        println!(
            "compare-closed: closed {} / {} = {}, z = {:.2}",
            c.closed,
            c.normalization,
            c.closed / c.normalization,
            c.z_score
        );
        if !c.calibration_ok {
            anyhow::bail!("calibration failure: z-score {:.2} exceeds 5", c.z_score);
        }
    }
    Ok(())
}
