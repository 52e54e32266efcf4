//! `morgan`: build the admissible family of a (possibly degenerate)
//! operator, then check the paired stretched-exponential growth probes in
//! every active direction at each kernel slice, with the rate product `a·b`
//! measured against the critical coefficient.

use metaplectic::{
    build_frame, construct_morgan_admissible, default_slices, morgan_threshold,
    AdmissibleProfiles, MorganParams, Trend, WeightExponent,
};
use nalgebra::DVector;
use num_complex::Complex64;
use serde_json::json;

use crate::artifacts::{fmt_float, json_float, CsvTable};
use crate::config::{smooth_bump, ExperimentConfig};
use crate::runners::csv_name;
use crate::{CliError, RunContext, RunOutput, RunStatus};

pub fn run(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = cfg.require_operator()?.resolve()?;
    let frame = build_frame(s.b())?;
    if frame.rank() == 0 {
        return Err(CliError::config(
            "the stretched-exponential check needs at least one active direction".into(),
        ));
    }
    let mspec = cfg
        .morgan
        .as_ref()
        .ok_or_else(|| CliError::config("a morgan run needs a morgan section".into()))?;
    if cfg.input.is_some() {
        return Err(CliError::config(
            "the morgan run builds its own admissible family; drop the input section".into(),
        ));
    }

    let threshold = morgan_threshold(mspec.p)?;
    let b = match (mspec.b, mspec.ab_over_threshold) {
        (Some(b), None) => b,
        (None, Some(frac)) => {
            if !(frac.is_finite() && frac > 0.0) {
                return Err(CliError::config(format!(
                    "ab_over_threshold must be positive, got {frac}"
                )));
            }
            frac * threshold / mspec.a
        }
        _ => {
            return Err(CliError::config(
                "give exactly one of b and ab_over_threshold".into(),
            ))
        }
    };
    let params = MorganParams::new(mspec.p, mspec.a, b)?;

    let exponent = match mspec.exponent.as_deref().unwrap_or("power") {
        "power" => WeightExponent::Power,
        "linear" => WeightExponent::Linear,
        other => {
            return Err(CliError::config(format!(
                "unknown weight exponent {other:?}; expected power or linear"
            )))
        }
    };

    let half_width = mspec.profile_half_width.unwrap_or(2.0);
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(CliError::config(format!(
            "profile_half_width must be positive, got {half_width}"
        )));
    }
    let spread = mspec.slice_spread.unwrap_or(0.5);
    if !(spread.is_finite() && spread >= 0.0) {
        return Err(CliError::config(format!(
            "slice_spread must be finite and nonnegative, got {spread}"
        )));
    }

    let profiles = AdmissibleProfiles {
        g: Box::new(|u: &[f64]| {
            let r2: f64 = u.iter().map(|x| x * x).sum();
            Complex64::new((-std::f64::consts::PI * r2).exp(), 0.0)
        }),
        g_hat_abs: Box::new(|eta: &[f64]| {
            let r2: f64 = eta.iter().map(|x| x * x).sum();
            (-std::f64::consts::PI * r2).exp()
        }),
        h: Box::new(move |v: &DVector<f64>| {
            Complex64::new(smooth_bump(v.norm() / half_width), 0.0)
        }),
        h_support_radius: half_width,
    };
    let family = construct_morgan_admissible(&s, &frame, profiles)?;
    let slices = default_slices(&s, &frame, spread);
    let verdicts = family.verify(&params, &slices, &mspec.radii, mspec.step, exponent)?;

    let mut table =
        CsvTable::new(&["slice", "direction", "side", "radius", "partial", "increment_ratio"]);
    let mut verdict_rows = Vec::new();
    let mut all_pass = true;
    for v in &verdicts {
        for (side, probe) in [("space", &v.space), ("freq", &v.freq)] {
            let ratios = probe.increment_ratios();
            for (i, (&radius, &partial)) in
                probe.radii.iter().zip(probe.partial_integrals.iter()).enumerate()
            {
                let ratio_cell = if i >= 2 { fmt_float(ratios[i - 2]) } else { String::new() };
                table.push(vec![
                    (v.slice_index + 1).to_string(),
                    (v.direction + 1).to_string(),
                    side.into(),
                    fmt_float(radius),
                    fmt_float(partial),
                    ratio_cell,
                ]);
            }
        }
        let pass = v.space.trend == Trend::Converging && v.freq.trend == Trend::Converging;
        all_pass &= pass;
        verdict_rows.push(json!({
            "slice": v.slice_index + 1,
            "direction": v.direction + 1,
            "space_trend": v.space.trend.to_string(),
            "freq_trend": v.freq.trend.to_string(),
            "pass": pass,
        }));
    }

    let csv = csv_name(cfg, "morgan.csv");
    let csv_path = ctx.out_dir.join(&csv);
    table.write(&csv_path)?;

    let matched = match mspec.expect.as_deref() {
        None => None,
        Some("pass") => Some(all_pass),
        Some("not_pass") => Some(!all_pass),
        Some(other) => {
            return Err(CliError::config(format!(
                "unknown expectation {other:?}; expected pass or not_pass"
            )))
        }
    };
    let status = match matched {
        Some(false) => RunStatus::Violation,
        _ => RunStatus::Clean,
    };

    let summary = json!({
        "kind": "morgan",
        "dimension": s.dim(),
        "rank": frame.rank(),
        "p": json_float(params.p),
        "q": json_float(params.q),
        "a": json_float(params.a),
        "b": json_float(params.b),
        "ab": json_float(params.a * params.b),
        "threshold": json_float(threshold),
        "ab_over_threshold": json_float(params.a * params.b / threshold),
        "exponent": match exponent {
            WeightExponent::Power => "power",
            WeightExponent::Linear => "linear",
        },
        "slices": slices.len(),
        "verdicts": verdict_rows,
        "all_pass": all_pass,
        "expect": mspec.expect,
        "matched": matched,
        "csv": csv,
        "status": status.label(),
    });

    let report = vec![
        format!(
            "critical product {threshold:.9}; configured a*b = {:.9} ({:.3} of it)",
            params.a * params.b,
            params.a * params.b / threshold
        ),
        format!(
            "verdicts: {} (slices x directions), all pass: {all_pass}; wrote {}",
            verdicts.len(),
            csv_path.display()
        ),
    ];

    Ok(RunOutput { summary, status, report })
}
