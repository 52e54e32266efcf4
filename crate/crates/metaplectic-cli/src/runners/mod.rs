//! One module per experiment kind, plus the helpers they share.

pub mod beurling;
pub mod constants;
pub mod heisenberg;
pub mod morgan;
pub mod sweep;
pub mod transform;

use metaplectic::{FastPath, GridFunction, GridSpec};

use crate::config::{ExperimentConfig, ResolvedInput};
use crate::CliError;

/// Samples a resolved input on a grid.
pub fn sample_input(spec: &GridSpec, input: &ResolvedInput) -> Result<GridFunction, CliError> {
    let sampler = input.sampler().ok_or_else(|| {
        CliError::config(
            "this input preset is not a plain function and cannot be sampled on a grid".into(),
        )
    })?;
    GridFunction::sample(spec, |x| sampler(x))
        .map_err(|e| CliError::run(format!("sampling the input failed: {e}")))
}

pub fn engine_name(path: FastPath) -> &'static str {
    match path {
        FastPath::Quadrature => "quadrature",
        FastPath::ChirpFft => "chirp_fft",
        FastPath::Pointwise => "pointwise",
    }
}

/// CSV artifact name from the config override or the kind default.
pub fn csv_name(cfg: &ExperimentConfig, default: &str) -> String {
    cfg.artifacts
        .as_ref()
        .and_then(|a| a.csv.clone())
        .unwrap_or_else(|| default.to_string())
}

/// `steps` evenly spaced samples with both endpoints included.
pub fn linspace(start: f64, end: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps < 2 {
        return Err(CliError::config(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    if !(start.is_finite() && end.is_finite() && end > start) {
        return Err(CliError::config(format!(
            "sweep range [{start}, {end}] must be finite and increasing"
        )));
    }
    let h = (end - start) / (steps - 1) as f64;
    Ok((0..steps).map(|i| start + h * i as f64).collect())
}

/// Per-axis extent of the samples whose magnitude exceeds
/// `rel_floor · max |f|`; `None` on an all-zero function.
pub fn support_box(f: &GridFunction, rel_floor: f64) -> Option<Vec<f64>> {
    let peak = f.values().iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
    if peak == 0.0 {
        return None;
    }
    let floor = rel_floor * peak;
    let d = f.spec().d();
    let mut extent = vec![0.0_f64; d];
    f.spec().iter_points().for_each(|idx, x| {
        if f.values()[idx].norm() > floor {
            for k in 0..d {
                extent[k] = extent[k].max(x[k].abs());
            }
        }
    });
    Some(extent)
}
