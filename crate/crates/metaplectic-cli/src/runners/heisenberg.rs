//! `heisenberg`: evaluate the dispersion inequality for one input and one
//! operator — the aggregate pairing, one oblique direction, one Cartesian
//! pair, or all of them — on closed-form Gaussian moments or on grids.

use metaplectic::{
    heisenberg_cartesian, heisenberg_directional, heisenberg_full, transform_gaussian,
    GridFunction, Observable, OperatorData, TransformMode, TransformPlan, UncertaintyReport,
};
use serde_json::json;

use crate::artifacts::json_float;
use crate::config::ExperimentConfig;
use crate::runners::sample_input;
use crate::{CliError, RunContext, RunOutput, RunStatus};

enum Variant {
    Full,
    Directional(usize),
    Cartesian(usize, usize),
    All,
}

fn parse_variant(cfg: &ExperimentConfig, rank: usize, dim: usize) -> Result<Variant, CliError> {
    let Some(v) = &cfg.variant else {
        return Ok(Variant::Full);
    };
    let reject_extras = |allowed_direction: bool, allowed_axes: bool| -> Result<(), CliError> {
        if v.direction.is_some() && !allowed_direction {
            return Err(CliError::config(format!(
                "variant {:?} does not take a direction",
                v.kind
            )));
        }
        if (v.space_axis.is_some() || v.freq_axis.is_some()) && !allowed_axes {
            return Err(CliError::config(format!("variant {:?} does not take axes", v.kind)));
        }
        Ok(())
    };
    match v.kind.as_str() {
        "full" => {
            reject_extras(false, false)?;
            Ok(Variant::Full)
        }
        "all" => {
            reject_extras(false, false)?;
            Ok(Variant::All)
        }
        "directional" => {
            reject_extras(true, false)?;
            let j = v.direction.unwrap_or(1);
            if j == 0 || j > rank {
                return Err(CliError::config(format!(
                    "direction {j} is outside 1..={rank} (directions are 1-based)"
                )));
            }
            Ok(Variant::Directional(j - 1))
        }
        "cartesian" => {
            reject_extras(false, true)?;
            let j = v.space_axis.unwrap_or(1);
            let k = v.freq_axis.unwrap_or(1);
            if j == 0 || j > dim || k == 0 || k > dim {
                return Err(CliError::config(format!(
                    "cartesian axes ({j}, {k}) are outside 1..={dim} (axes are 1-based)"
                )));
            }
            Ok(Variant::Cartesian(j - 1, k - 1))
        }
        other => Err(CliError::config(format!(
            "unknown variant {other:?}; expected full, directional, cartesian, or all"
        ))),
    }
}

/// `pass` is vacuous truth (zero bound) or ratio ≥ 1 − tol.
fn check_row(label: String, rep: &UncertaintyReport, tol: f64) -> (serde_json::Value, bool) {
    let pass = rep.bound == 0.0 || rep.ratio >= 1.0 - tol;
    let row = json!({
        "label": label,
        "lhs_space": json_float(rep.lhs_space),
        "lhs_freq": json_float(rep.lhs_freq),
        "product": json_float(rep.product),
        "bound": json_float(rep.bound),
        "ratio": json_float(rep.ratio),
        "space_centers": rep.space_centers.iter().map(|&c| json_float(c)).collect::<Vec<_>>(),
        "freq_centers": rep.freq_centers.iter().map(|&c| json_float(c)).collect::<Vec<_>>(),
        "vacuous": rep.bound == 0.0,
        "pass": pass,
    });
    (row, pass)
}

pub fn run(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = cfg.require_operator()?.resolve()?;
    let op = OperatorData::new(s.clone())?;
    let tol = ctx.tolerance(cfg)?;
    let input_cfg = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::config("a heisenberg run needs an input section".into()))?;
    let input = input_cfg.resolve(&s, op.frame(), ctx.seed_override)?;
    let variant = parse_variant(cfg, op.active_rank(), s.dim())?;

    let evaluation = cfg.evaluation.as_deref().unwrap_or("exact");
    // Both observables must outlive the reports; grid mode stores the
    // sampled pair, exact mode the closed-form pair.
    let mut clipped = 0.0;
    let grid_pair: Option<(GridFunction, GridFunction)>;
    let gauss_pair: Option<(metaplectic::GaussianState, metaplectic::GaussianState)>;
    match evaluation {
        "exact" => {
            let g = input.gaussian().ok_or_else(|| {
                CliError::config(format!(
                    "input preset {:?} has no closed-form moments; set \"evaluation\": \"grid\"",
                    input_cfg.preset
                ))
            })?;
            let image = transform_gaussian(&s, g)?;
            gauss_pair = Some((g.clone(), image));
            grid_pair = None;
        }
        "grid" => {
            let grid_cfg = cfg.grid.as_ref().ok_or_else(|| {
                CliError::config("grid evaluation needs a grid section".into())
            })?;
            let spec = grid_cfg.resolve(s.dim())?;
            let f = sample_input(&spec, &input)?;
            let plan = TransformPlan::new(s.clone(), spec, TransformMode::Auto)?;
            let (sf, rep) = plan.apply(&f)?;
            clipped = rep.clipped_fraction;
            grid_pair = Some((f, sf));
            gauss_pair = None;
        }
        other => {
            return Err(CliError::config(format!(
                "unknown evaluation {other:?}; expected exact or grid"
            )))
        }
    }
    let (f_obs, sf_obs) = match (&grid_pair, &gauss_pair) {
        (Some((f, sf)), None) => (Observable::Grid(f), Observable::Grid(sf)),
        (None, Some((g, image))) => (Observable::Gaussian(g), Observable::Gaussian(image)),
        _ => unreachable!("exactly one evaluation path filled"),
    };

    let mut rows = Vec::new();
    let mut all_pass = true;
    let mut min_ratio = f64::INFINITY;
    let mut push = |label: String, rep: UncertaintyReport| {
        if rep.ratio.is_finite() {
            min_ratio = min_ratio.min(rep.ratio);
        }
        let (row, pass) = check_row(label, &rep, tol);
        all_pass &= pass;
        rows.push(row);
    };

    match variant {
        Variant::Full => {
            push("full".into(), heisenberg_full(&op, &f_obs, &sf_obs, None)?);
        }
        Variant::Directional(j) => {
            push(
                format!("directional_{}", j + 1),
                heisenberg_directional(&op, &f_obs, &sf_obs, j, None, None)?,
            );
        }
        Variant::Cartesian(j, k) => {
            push(
                format!("cartesian_{}_{}", j + 1, k + 1),
                heisenberg_cartesian(&op, &f_obs, &sf_obs, j, k, None, None)?,
            );
        }
        Variant::All => {
            push("full".into(), heisenberg_full(&op, &f_obs, &sf_obs, None)?);
            for j in 0..op.active_rank() {
                push(
                    format!("directional_{}", j + 1),
                    heisenberg_directional(&op, &f_obs, &sf_obs, j, None, None)?,
                );
            }
            for j in 0..s.dim() {
                for k in 0..s.dim() {
                    if s.b()[(k, j)] != 0.0 {
                        push(
                            format!("cartesian_{}_{}", j + 1, k + 1),
                            heisenberg_cartesian(&op, &f_obs, &sf_obs, j, k, None, None)?,
                        );
                    }
                }
            }
        }
    }

    let mut status = if all_pass { RunStatus::Clean } else { RunStatus::Violation };
    if status == RunStatus::Clean && clipped > 1e-3 {
        status = RunStatus::GridWarning;
    }

    let consts = op.constants();
    let summary = json!({
        "kind": "heisenberg",
        "dimension": s.dim(),
        "rank": op.active_rank(),
        "evaluation": evaluation,
        "tolerance": json_float(tol),
        "mu_s": json_float(consts.mu_s),
        "k_s": json_float(consts.k_s),
        "clipped_fraction": json_float(clipped),
        "checks": rows,
        "min_ratio": json_float(min_ratio),
        "all_pass": all_pass,
        "status": status.label(),
    });

    let report = vec![
        format!("evaluation: {evaluation}, tolerance {tol:.1e}"),
        format!(
            "checks: {}, min finite ratio {:.9}, all pass: {all_pass}",
            summary["checks"].as_array().map(|a| a.len()).unwrap_or(0),
            min_ratio
        ),
    ];

    Ok(RunOutput { summary, status, report })
}
