//! `beurling`: the joint-decay growth probe — truncated double integrals of
//! `|f| · |Ŝf|` against the exponential cross weight over an increasing
//! radius schedule, classified by tail behavior.

use metaplectic::{
    beurling_integral, build_frame, construct_morgan_admissible, probe_growth,
    AdmissibleProfiles, Trend,
};
use nalgebra::DVector;
use num_complex::Complex64;
use serde_json::json;

use crate::artifacts::{fmt_float, json_float, CsvTable};
use crate::config::{smooth_bump, ExperimentConfig, ResolvedInput};
use crate::runners::csv_name;
use crate::{CliError, RunContext, RunOutput, RunStatus};

/// `|f|` and `|Ŝf|` evaluators with the lifetimes the probe needs.
type Magnitude = Box<dyn Fn(&DVector<f64>) -> f64>;

fn is_plain_fourier(s: &metaplectic::SymplecticMatrix) -> bool {
    let d = s.dim();
    let eye = nalgebra::DMatrix::<f64>::identity(d, d);
    (s.b() - &eye).amax() <= 1e-12 && s.a().amax() <= 1e-12
}

pub fn run(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = cfg.require_operator()?.resolve()?;
    let frame = build_frame(s.b())?;
    if frame.rank() == 0 {
        return Err(CliError::config(
            "the joint-decay probe needs at least one active direction".into(),
        ));
    }
    let probe_cfg = cfg
        .probe
        .as_ref()
        .ok_or_else(|| CliError::config("a beurling run needs a probe section".into()))?;
    let input_cfg = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::config("a beurling run needs an input section".into()))?;

    let (f_abs, sf_abs): (Magnitude, Magnitude) =
        match input_cfg.resolve(&s, &frame, ctx.seed_override)? {
            ResolvedInput::Gaussian(g) => {
                let image = metaplectic::transform_gaussian(&s, &g)?;
                (
                    Box::new(move |x: &DVector<f64>| g.evaluate(x.as_slice()).norm()),
                    Box::new(move |xi: &DVector<f64>| image.evaluate(xi.as_slice()).norm()),
                )
            }
            ResolvedInput::Poly { pg, .. } => {
                if !is_plain_fourier(&s) {
                    return Err(CliError::config(
                        "the polynomial-Gaussian preset has a closed-form transform only \
                         for the plain Fourier operator"
                            .into(),
                    ));
                }
                let pg2 = pg.clone();
                (
                    Box::new(move |x: &DVector<f64>| pg.eval(x.as_slice()).norm()),
                    Box::new(move |xi: &DVector<f64>| pg2.eval_ft(xi.as_slice()).norm()),
                )
            }
            ResolvedInput::Bump { .. } => {
                return Err(CliError::config(
                    "the joint-decay probe needs closed-form transform magnitudes; use \
                     gaussian, random_schwartz, poly_gaussian, or chirped_family"
                        .into(),
                ))
            }
            ResolvedInput::ChirpedFamily { half_width } => {
                // Gaussian along the active directions, a chirp-modulated
                // bump of the given support across the kernel — its
                // transform magnitude is closed-form.
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
                let family = std::rc::Rc::new(family);
                let family2 = family.clone();
                (
                    Box::new(move |x: &DVector<f64>| family.magnitude(x)),
                    Box::new(move |xi: &DVector<f64>| family2.transform_magnitude(xi)),
                )
            }
        };

    let d = s.dim();
    let xi2 = match &probe_cfg.slice {
        Some(v) => {
            if v.len() != d {
                return Err(CliError::config(format!(
                    "slice point has {} entries, the operator dimension is {d}",
                    v.len()
                )));
            }
            DVector::from_column_slice(v)
        }
        None => DVector::zeros(d),
    };

    let probe = probe_growth(
        |radius| {
            beurling_integral(
                &f_abs,
                &sf_abs,
                &s,
                &frame,
                &xi2,
                probe_cfg.weight_power,
                radius,
                probe_cfg.step,
            )
        },
        &probe_cfg.radii,
    )?;

    // CSV: one row per radius; the increment ratio in row i compares the
    // increment ending there with the one before it.
    let mut table = CsvTable::new(&["radius", "partial", "increment_ratio"]);
    let ratios = probe.increment_ratios();
    for (i, (&radius, &partial)) in
        probe.radii.iter().zip(probe.partial_integrals.iter()).enumerate()
    {
        let ratio_cell = if i >= 2 { fmt_float(ratios[i - 2]) } else { String::new() };
        table.push(vec![fmt_float(radius), fmt_float(partial), ratio_cell]);
    }
    let csv = csv_name(cfg, "probe.csv");
    let csv_path = ctx.out_dir.join(&csv);
    table.write(&csv_path)?;

    let matched = match probe_cfg.expect.as_deref() {
        None => None,
        Some("converging") => Some(probe.trend == Trend::Converging),
        Some("diverging") => Some(probe.trend == Trend::Diverging),
        Some("inconclusive") => Some(probe.trend == Trend::Inconclusive),
        Some("not_converging") => Some(probe.trend != Trend::Converging),
        Some(other) => {
            return Err(CliError::config(format!(
                "unknown expectation {other:?}; expected converging, diverging, \
                 inconclusive, or not_converging"
            )))
        }
    };
    let status = match matched {
        Some(false) => RunStatus::Violation,
        _ => RunStatus::Clean,
    };

    let summary = json!({
        "kind": "beurling",
        "dimension": d,
        "rank": frame.rank(),
        "weight_power": json_float(probe_cfg.weight_power),
        "step": json_float(probe_cfg.step),
        "radii": probe.radii.iter().map(|&r| json_float(r)).collect::<Vec<_>>(),
        "trend": probe.trend.to_string(),
        "fit_slope": json_float(probe.fit_slope),
        "last_partial": json_float(*probe.partial_integrals.last().unwrap_or(&f64::NAN)),
        "expect": probe_cfg.expect,
        "matched": matched,
        "csv": csv,
        "status": status.label(),
    });

    let report = vec![
        format!("trend: {} (fit slope {:.4})", probe.trend, probe.fit_slope),
        format!("wrote {}", csv_path.display()),
    ];

    Ok(RunOutput { summary, status, report })
}
