//! `constants`: normalization and uncertainty constants of one operator,
//! plus the aggregate bound they imply for a given (default unit) norm.

use metaplectic::{build_frame, constants};
use serde_json::json;

use crate::artifacts::json_float;
use crate::config::ExperimentConfig;
use crate::{CliError, RunContext, RunOutput, RunStatus};

pub fn run(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = cfg.require_operator()?.resolve()?;
    let frame = build_frame(s.b())?;
    let consts = constants(&s, &frame)?;

    // Norm of the reference input: closed-form Gaussian presets only; the
    // constants themselves never touch function data.
    let norm_sq = match &cfg.input {
        None => 1.0,
        Some(spec) => {
            let resolved = spec.resolve(&s, &frame, ctx.seed_override)?;
            match resolved.gaussian() {
                Some(g) => g.norm_sq(),
                None => {
                    return Err(CliError::config(
                        "the constants run uses closed-form norms; give a Gaussian-family \
                         input or none"
                            .into(),
                    ))
                }
            }
        }
    };

    let sigma_trace = frame.sigma_trace();
    let bound = sigma_trace * consts.k_s / (4.0 * std::f64::consts::PI) * norm_sq;
    let sigmas: Vec<f64> = frame.singular_values()[..frame.rank()].to_vec();

    let summary = json!({
        "kind": "constants",
        "dimension": s.dim(),
        "rank": frame.rank(),
        "mu_s": json_float(consts.mu_s),
        "k_s": json_float(consts.k_s),
        "singular_values": sigmas.iter().map(|&v| json_float(v)).collect::<Vec<_>>(),
        "sigma_trace": json_float(sigma_trace),
        "sigma_product": json_float(consts.sigma_product),
        "q_range_perp_at": json_float(consts.q_range_perp_at),
        "orthogonality_identity": json_float(consts.k_s * consts.q_range_perp_at),
        "norm_sq": json_float(norm_sq),
        "bound": json_float(bound),
        "status": RunStatus::Clean.label(),
    });

    let report = vec![
        format!("operator: dimension {}, active rank {}", s.dim(), frame.rank()),
        format!("mu_s = {:.12e}, k_s = {:.12e}", consts.mu_s, consts.k_s),
        format!("sigma_trace = {sigma_trace:.12e}, aggregate bound = {bound:.12e}"),
    ];

    Ok(RunOutput { summary, status: RunStatus::Clean, report })
}
