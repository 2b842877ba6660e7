//! `vacua geometry` — dump the derived geometry of a Yukawa tensor.

use std::path::PathBuf;

use serde::Serialize;
use vacua_core::geometry::{
    hessian_basis, hodge_identity_check, lambda_matrix, riemann_from_yukawa,
};

use crate::formats::load_yukawa;
use crate::output::{real_matrix_rows, write_json, ComplexMatrixJson};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Yukawa tensor JSON file
    #[arg(long)]
    pub yukawa: PathBuf,

    /// JSON output path
    #[arg(long, default_value = "geometry.json")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct GeometryJson {
    command: &'static str,
    yukawa: String,
    h21: usize,
    lambda: Vec<Vec<f64>>,
    lambda_eigenvalues: Vec<f64>,
    ricci: ComplexMatrixJson,
    hodge_metric: ComplexMatrixJson,
    hodge_identity_residual: f64,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let tensor = load_yukawa(&args.yukawa)?;
    let h = tensor.h21();
    let basis = hessian_basis(&tensor);
    let lam = lambda_matrix(&basis)?;
    let curv = riemann_from_yukawa(&tensor);
    let residual = hodge_identity_check(&tensor)?;
    write_json(
        &args.out,
        &GeometryJson {
            command: "geometry",
            yukawa: args.yukawa.display().to_string(),
            h21: h,
            lambda: real_matrix_rows(lam.dim(), lam.matrix()),
            lambda_eigenvalues: lam.eigenvalues().to_vec(),
            ricci: ComplexMatrixJson::from_row_major(h, curv.ricci()),
            hodge_metric: ComplexMatrixJson::from_row_major(h, curv.hodge_metric()),
            hodge_identity_residual: residual,
        },
    )?;
    println!(
        "geometry: h21 = {h}, min lambda eigenvalue {}, hodge residual {residual:.3e}",
        lam.min_eigenvalue()
    );
    Ok(())
}
