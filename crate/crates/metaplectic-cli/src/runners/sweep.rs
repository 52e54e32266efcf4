//! `sweep`: tabulate the aggregate inequality along a one-parameter operator
//! family for one closed-form input. Rows where the operator has no active
//! direction carry the (zero) bound and leave the dispersion columns empty.

use metaplectic::{
    build_frame, constants, free_particle, harmonic_oscillator, heisenberg_full,
    transform_gaussian, Observable, OperatorData, SymplecticMatrix,
};
use serde_json::json;

use crate::artifacts::{fmt_float, json_float, CsvTable};
use crate::config::ExperimentConfig;
use crate::runners::{csv_name, linspace};
use crate::{CliError, RunContext, RunOutput, RunStatus};

pub fn run(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunOutput, CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("a sweep run needs a sweep section".into()))?;
    if cfg.operator.is_some() {
        return Err(CliError::config(
            "the sweep family defines its own operators; drop the operator section".into(),
        ));
    }
    let tol = ctx.tolerance(cfg)?;

    let d = sweep.d;
    crate::config::check_operator_dim(d)?;
    let family: Box<dyn Fn(f64) -> metaplectic::Result<SymplecticMatrix>> =
        match sweep.family.as_str() {
            "free_particle" => {
                if sweep.omega.is_some() {
                    return Err(CliError::config(
                        "the free-particle family does not take omega".into(),
                    ));
                }
                Box::new(move |t| free_particle(d, t))
            }
            "harmonic_oscillator" => {
                let omega = sweep.omega.ok_or_else(|| {
                    CliError::config("the harmonic-oscillator family needs omega".into())
                })?;
                Box::new(move |t| harmonic_oscillator(d, omega, t))
            }
            other => {
                return Err(CliError::config(format!(
                    "unknown sweep family {other:?}; expected free_particle or \
                     harmonic_oscillator"
                )))
            }
        };

    // The swept input must have closed-form moments: the family is evaluated
    // at every parameter value against the same state.
    let input_cfg = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::config("a sweep run needs an input section".into()))?;
    let probe_s = family(sweep.t_start).map_err(CliError::from)?;
    let probe_frame = build_frame(probe_s.b())?;
    let state = input_cfg
        .resolve(&probe_s, &probe_frame, ctx.seed_override)?
        .gaussian()
        .cloned()
        .ok_or_else(|| {
            CliError::config("a sweep needs a Gaussian-family input (closed-form moments)".into())
        })?;
    let norm_sq = state.norm_sq();

    let ts = linspace(sweep.t_start, sweep.t_end, sweep.steps)?;

    let mut columns: Vec<String> =
        vec!["param".into(), "lhs_space".into(), "lhs_freq".into(), "product".into(),
             "bound".into(), "ratio".into()];
    for i in 1..=d {
        columns.push(format!("alpha_{i}"));
    }
    for i in 1..=d {
        columns.push(format!("beta_{i}"));
    }
    columns.push("clipped_mass".into());
    let column_refs: Vec<&str> = columns.iter().map(|c| c.as_str()).collect();
    let mut table = CsvTable::new(&column_refs);

    let mut min_ratio = f64::INFINITY;
    let mut zero_bound_rows = 0usize;
    let mut violations = 0usize;
    for &t in &ts {
        let s_t = family(t).map_err(CliError::from)?;
        let frame = build_frame(s_t.b())?;
        let consts = constants(&s_t, &frame)?;
        let bound = frame.sigma_trace() * consts.k_s / (4.0 * std::f64::consts::PI) * norm_sq;

        let mut cells = vec![fmt_float(t)];
        if frame.rank() == 0 {
            // Vacuous row: no active direction, the bound is exactly zero.
            zero_bound_rows += 1;
            cells.extend(["".into(), "".into(), "".into()]);
            cells.push(fmt_float(bound));
            cells.push("".into());
            cells.extend((0..2 * d).map(|_| String::new()));
            cells.push(fmt_float(0.0));
        } else {
            let op = OperatorData::new(s_t.clone())?;
            let image = transform_gaussian(&s_t, &state)?;
            let rep = heisenberg_full(
                &op,
                &Observable::Gaussian(&state),
                &Observable::Gaussian(&image),
                None,
            )?;
            if rep.ratio.is_finite() {
                min_ratio = min_ratio.min(rep.ratio);
                if rep.ratio < 1.0 - tol {
                    violations += 1;
                }
            }
            cells.push(fmt_float(rep.lhs_space));
            cells.push(fmt_float(rep.lhs_freq));
            cells.push(fmt_float(rep.product));
            cells.push(fmt_float(rep.bound));
            cells.push(fmt_float(rep.ratio));
            for i in 0..d {
                cells.push(
                    rep.space_centers.get(i).map(|&c| fmt_float(c)).unwrap_or_default(),
                );
            }
            for i in 0..d {
                cells.push(rep.freq_centers.get(i).map(|&c| fmt_float(c)).unwrap_or_default());
            }
            cells.push(fmt_float(0.0));
        }
        table.push(cells);
    }

    let csv = csv_name(cfg, "sweep.csv");
    let csv_path = ctx.out_dir.join(&csv);
    table.write(&csv_path)?;

    let status = if violations > 0 { RunStatus::Violation } else { RunStatus::Clean };
    let summary = json!({
        "kind": "sweep",
        "family": sweep.family,
        "dimension": d,
        "steps": sweep.steps,
        "t_start": json_float(sweep.t_start),
        "t_end": json_float(sweep.t_end),
        "norm_sq": json_float(norm_sq),
        "tolerance": json_float(tol),
        "rows": table.row_count(),
        "zero_bound_rows": zero_bound_rows,
        "min_ratio": json_float(min_ratio),
        "violations": violations,
        "csv": csv,
        "status": status.label(),
    });

    let report = vec![
        format!(
            "family {} over [{}, {}] in {} steps; {} vacuous rows",
            sweep.family, sweep.t_start, sweep.t_end, sweep.steps, zero_bound_rows
        ),
        format!("min finite ratio {min_ratio:.9}; wrote {}", csv_path.display()),
    ];

    Ok(RunOutput { summary, status, report })
}
