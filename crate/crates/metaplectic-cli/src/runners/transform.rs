//! `transform`: sample the input, apply the operator with the requested
//! engine, report norms, clipped mass, support extent, and — for
//! Gaussian-family inputs — the residual against the closed-form image.

use metaplectic::{
    build_frame, mgf1, phase_align, transform_gaussian, TransformMode, TransformPlan,
};
use serde_json::json;

use crate::artifacts::json_float;
use crate::config::ExperimentConfig;
use crate::runners::{engine_name, sample_input, support_box};
use crate::{CliError, RunContext, RunOutput, RunStatus};

pub fn run(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = cfg.require_operator()?.resolve()?;
    let frame = build_frame(s.b())?;
    let input_cfg = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::config("a transform run needs an input section".into()))?;
    let grid_cfg = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::config("a transform run needs a grid section".into()))?;
    let topts = cfg.transform.clone().unwrap_or(crate::config::TransformSpec {
        mode: None,
        output_grid: None,
        write_grids: None,
        warn_clipped: None,
    });

    let mode = match topts.mode.as_deref().unwrap_or("auto") {
        "auto" => TransformMode::Auto,
        "quadrature" => TransformMode::Quadrature,
        "chirp_fft" => TransformMode::ChirpFft,
        other => {
            return Err(CliError::config(format!(
                "unknown transform mode {other:?}; expected auto, quadrature, or chirp_fft"
            )))
        }
    };
    let warn_clipped = topts.warn_clipped.unwrap_or(1e-3);
    if !(warn_clipped.is_finite() && warn_clipped >= 0.0) {
        return Err(CliError::config(format!(
            "warn_clipped must be finite and nonnegative, got {warn_clipped}"
        )));
    }

    let input = input_cfg.resolve(&s, &frame, ctx.seed_override)?;
    let spec = grid_cfg.resolve(s.dim())?;
    let f = sample_input(&spec, &input)?;

    let mut plan = TransformPlan::new(s.clone(), spec, mode)?;
    if let Some(out_grid) = &topts.output_grid {
        plan = plan.with_output_spec(out_grid.resolve(s.dim())?)?;
    }
    let (out, rep) = plan.apply(&f)?;

    let input_norm = f.l2_norm();
    let output_norm = out.l2_norm();
    let norm_drift = if input_norm > 0.0 { (output_norm / input_norm - 1.0).abs() } else { 0.0 };

    // Oracle comparison for closed-form inputs.
    let oracle_residual = match input.gaussian() {
        Some(g) => {
            let image = transform_gaussian(&s, g)?;
            let exact = image.to_grid(plan.output_spec())?;
            match phase_align(&exact, &out) {
                Ok((_, _, residual)) => json_float(residual),
                Err(_) => serde_json::Value::Null,
            }
        }
        None => serde_json::Value::Null,
    };

    let rel_floor = 1e-9;
    let box_in = support_box(&f, rel_floor);
    let box_out = support_box(&out, rel_floor);

    let mut artifact_list = Vec::new();
    if topts.write_grids.unwrap_or(false) {
        let names = cfg.artifacts.clone().unwrap_or(crate::config::ArtifactNames {
            summary: None,
            csv: None,
            input_grid: None,
            output_grid: None,
        });
        let in_name = names.input_grid.unwrap_or_else(|| "input.mgf1".into());
        let out_name = names.output_grid.unwrap_or_else(|| "output.mgf1".into());
        let in_path = ctx.out_dir.join(&in_name);
        let out_path = ctx.out_dir.join(&out_name);
        mgf1::write_file(&in_path, &f)?;
        mgf1::write_file(&out_path, &out)?;
        artifact_list.push(in_name);
        artifact_list.push(out_name);
    }

    let status = if rep.clipped_fraction > warn_clipped {
        RunStatus::GridWarning
    } else {
        RunStatus::Clean
    };

    let boxes = |b: &Option<Vec<f64>>| match b {
        Some(v) => json!(v.iter().map(|&x| json_float(x)).collect::<Vec<_>>()),
        None => serde_json::Value::Null,
    };
    let summary = json!({
        "kind": "transform",
        "dimension": s.dim(),
        "rank": frame.rank(),
        "engine": engine_name(rep.mode),
        "input_norm": json_float(input_norm),
        "output_norm": json_float(output_norm),
        "norm_drift": json_float(norm_drift),
        "clipped_fraction": json_float(rep.clipped_fraction),
        "warn_clipped": json_float(warn_clipped),
        "oracle_residual": oracle_residual,
        "support_box_input": boxes(&box_in),
        "support_box_output": boxes(&box_out),
        "grid_artifacts": artifact_list,
        "status": status.label(),
    });

    let report = vec![
        format!("engine: {}", engine_name(rep.mode)),
        format!(
            "norms: input {input_norm:.6e}, output {output_norm:.6e} (drift {norm_drift:.3e})"
        ),
        format!("clipped fraction: {:.3e}", rep.clipped_fraction),
    ];

    Ok(RunOutput { summary, status, report })
}
