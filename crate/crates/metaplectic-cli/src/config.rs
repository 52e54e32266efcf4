//! JSON experiment configuration: schema, validation, and resolution into
//! library objects.
//!
//! Every index a config file carries (coordinate axes, active directions)
//! is **1-based**; the library works 0-based internally and the conversion
//! happens here, at the boundary.

use metaplectic::{
    build_extremizer, multiplier, ExtremizerSpec, GaussianState, GridSpec, PolyGaussian,
    SubspaceFrame, SymplecticMatrix,
};
use metaplectic::grid::AxisSpec;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::CliError;

/// Whole experiment file. Sections irrelevant to the chosen kind must be
/// absent; each runner validates what it needs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// One of `constants`, `transform`, `heisenberg`, `sweep`, `beurling`,
    /// `morgan`; must match the subcommand that loads the file.
    pub kind: String,
    /// The operator under study; every kind except `sweep` (whose family
    /// defines its own operators) requires it.
    #[serde(default)]
    pub operator: Option<OperatorSpec>,
    #[serde(default)]
    pub input: Option<InputSpec>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    /// `heisenberg` only: `exact` (closed-form Gaussian moments, default) or
    /// `grid` (sample, transform numerically, take discrete moments).
    #[serde(default)]
    pub evaluation: Option<String>,
    /// `heisenberg` only: which pairing to evaluate.
    #[serde(default)]
    pub variant: Option<VariantSpec>,
    /// `sweep` only.
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    /// `beurling` only.
    #[serde(default)]
    pub probe: Option<ProbeSpec>,
    /// `morgan` only.
    #[serde(default)]
    pub morgan: Option<MorganSpec>,
    /// `transform` only.
    #[serde(default)]
    pub transform: Option<TransformSpec>,
    /// Ratio tolerance for pass/fail verdicts (`--tol` overrides).
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Artifact file names inside the output directory.
    #[serde(default)]
    pub artifacts: Option<ArtifactNames>,
}

pub const KNOWN_KINDS: [&str; 6] =
    ["constants", "transform", "heisenberg", "sweep", "beurling", "morgan"];

/// Upper bound on the operator dimension a config may request. Keeps a typo
/// from turning into a giant allocation; the grids this tool works at are far
/// smaller anyway.
pub const MAX_OPERATOR_DIM: usize = 64;

pub fn check_operator_dim(d: usize) -> Result<(), CliError> {
    if d == 0 || d > MAX_OPERATOR_DIM {
        return Err(CliError::config(format!(
            "operator dimension {d} is outside 1..={MAX_OPERATOR_DIM}"
        )));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| CliError::config(format!("cannot parse the experiment file: {e}")))?;
        if !KNOWN_KINDS.contains(&cfg.kind.as_str()) {
            return Err(CliError::config(format!(
                "unknown experiment kind {:?}; expected one of {}",
                cfg.kind,
                KNOWN_KINDS.join(", ")
            )));
        }
        Ok(cfg)
    }

    pub fn require_operator(&self) -> Result<&OperatorSpec, CliError> {
        self.operator.as_ref().ok_or_else(|| {
            CliError::config(format!("a {} run needs an operator section", self.kind))
        })
    }
}

// ---------------------------------------------------------------------------
// Operator
// ---------------------------------------------------------------------------

/// Operator description: exactly one of a named constructor (`name` plus its
/// parameters), explicit `blocks`, or a `compose` chain (first entry acts
/// first).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub omega: Option<f64>,
    /// Symmetric chirp matrix.
    #[serde(default)]
    pub q: Option<Vec<Vec<f64>>>,
    /// Invertible rescaling matrix.
    #[serde(default)]
    pub e: Option<Vec<Vec<f64>>>,
    /// Symmetric multiplier symbol.
    #[serde(default)]
    pub p: Option<Vec<Vec<f64>>>,
    /// 1-based axes the partial transform acts on.
    #[serde(default)]
    pub axes: Option<Vec<usize>>,
    #[serde(default)]
    pub blocks: Option<BlockSpec>,
    #[serde(default)]
    pub compose: Option<Vec<OperatorSpec>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub d: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub dd: Vec<Vec<f64>>,
}

fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, CliError> {
    let nr = rows.len();
    if nr == 0 {
        return Err(CliError::config(format!("{what} must not be empty")));
    }
    let nc = rows[0].len();
    if nc == 0 || rows.iter().any(|r| r.len() != nc) {
        return Err(CliError::config(format!(
            "{what} must be rectangular with at least one column"
        )));
    }
    Ok(DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

fn square_matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, CliError> {
    let m = matrix_from_rows(rows, what)?;
    if m.nrows() != m.ncols() {
        return Err(CliError::config(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

impl OperatorSpec {
    /// Which optional parameter fields are set, by name.
    fn set_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.d.is_some() {
            out.push("d");
        }
        if self.t.is_some() {
            out.push("t");
        }
        if self.omega.is_some() {
            out.push("omega");
        }
        if self.q.is_some() {
            out.push("q");
        }
        if self.e.is_some() {
            out.push("e");
        }
        if self.p.is_some() {
            out.push("p");
        }
        if self.axes.is_some() {
            out.push("axes");
        }
        out
    }

    fn check_params(&self, name: &str, allowed: &[&str]) -> Result<(), CliError> {
        for field in self.set_fields() {
            if !allowed.contains(&field) {
                return Err(CliError::config(format!(
                    "operator {name:?} does not take the parameter {field:?} (allowed: {})",
                    if allowed.is_empty() { "none".to_string() } else { allowed.join(", ") }
                )));
            }
        }
        for field in allowed {
            if !self.set_fields().contains(field) {
                return Err(CliError::config(format!(
                    "operator {name:?} requires the parameter {field:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn resolve(&self) -> Result<SymplecticMatrix, CliError> {
        let mut ways = 0;
        for set in [self.name.is_some(), self.blocks.is_some(), self.compose.is_some()] {
            ways += usize::from(set);
        }
        if ways != 1 {
            return Err(CliError::config(
                "an operator needs exactly one of: a constructor name, explicit blocks, or a \
                 compose chain"
                    .into(),
            ));
        }

        if let Some(blocks) = &self.blocks {
            if !self.set_fields().is_empty() || self.name.is_some() {
                return Err(CliError::config(
                    "explicit blocks take no further operator parameters".into(),
                ));
            }
            check_operator_dim(blocks.d)?;
            let a = square_matrix(&blocks.a, "block A")?;
            let b = square_matrix(&blocks.b, "block B")?;
            let c = square_matrix(&blocks.c, "block C")?;
            let dd = square_matrix(&blocks.dd, "block D")?;
            for (m, tag) in [(&a, "A"), (&b, "B"), (&c, "C"), (&dd, "D")] {
                if m.nrows() != blocks.d {
                    return Err(CliError::config(format!(
                        "block {tag} must be {0}x{0} to match d = {0}",
                        blocks.d
                    )));
                }
            }
            return SymplecticMatrix::from_blocks(a, b, c, dd)
                .map_err(|e| CliError::config(format!("explicit blocks rejected: {e}")));
        }

        if let Some(chain) = &self.compose {
            if chain.is_empty() {
                return Err(CliError::config("a compose chain must not be empty".into()));
            }
            let mut total: Option<SymplecticMatrix> = None;
            for part in chain {
                let s = part.resolve()?;
                total = Some(match total {
                    // The first listed operator acts first, so each later one
                    // multiplies from the left.
                    Some(acc) => s
                        .compose(&acc)
                        .map_err(|e| CliError::config(format!("compose chain rejected: {e}")))?,
                    None => s,
                });
            }
            return Ok(total.expect("non-empty chain"));
        }

        let name = self.name.as_deref().expect("checked above");
        let lib = |r: metaplectic::Result<SymplecticMatrix>| {
            r.map_err(|e| CliError::config(format!("operator {name:?} rejected: {e}")))
        };
        match name {
            "fourier" => {
                self.check_params(name, &["d"])?;
                let d = self.d.unwrap();
                check_operator_dim(d)?;
                lib(metaplectic::fourier(d))
            }
            "chirp" => {
                self.check_params(name, &["q"])?;
                lib(metaplectic::chirp(square_matrix(self.q.as_ref().unwrap(), "chirp matrix q")?))
            }
            "rescale" => {
                self.check_params(name, &["e"])?;
                lib(metaplectic::rescale(&square_matrix(
                    self.e.as_ref().unwrap(),
                    "rescaling matrix e",
                )?))
            }
            "multiplier" => {
                self.check_params(name, &["p"])?;
                lib(multiplier(square_matrix(self.p.as_ref().unwrap(), "multiplier symbol p")?))
            }
            "partial_fourier" => {
                self.check_params(name, &["d", "axes"])?;
                let d = self.d.unwrap();
                check_operator_dim(d)?;
                let axes = self.axes.as_ref().unwrap();
                let mut zero_based = Vec::with_capacity(axes.len());
                for &ax in axes {
                    if ax == 0 || ax > d {
                        return Err(CliError::config(format!(
                            "partial transform axis {ax} is outside 1..={d} (axes are 1-based)"
                        )));
                    }
                    zero_based.push(ax - 1);
                }
                lib(metaplectic::partial_fourier(d, &zero_based))
            }
            "free_particle" => {
                self.check_params(name, &["d", "t"])?;
                let d = self.d.unwrap();
                check_operator_dim(d)?;
                lib(metaplectic::free_particle(d, self.t.unwrap()))
            }
            "harmonic_oscillator" => {
                self.check_params(name, &["d", "omega", "t"])?;
                let d = self.d.unwrap();
                check_operator_dim(d)?;
                lib(metaplectic::harmonic_oscillator(d, self.omega.unwrap(), self.t.unwrap()))
            }
            other => Err(CliError::config(format!(
                "unknown operator name {other:?}; expected one of fourier, chirp, rescale, \
                 multiplier, partial_fourier, free_particle, harmonic_oscillator"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Input function
// ---------------------------------------------------------------------------

/// Input function preset. `preset` selects the family:
///
/// * `gaussian` — an explicit Gaussian `state` (same JSON layout the library
///   reads) or, without one, the standard unit Gaussian;
/// * `random_schwartz` — a seeded random Gaussian state;
/// * `extremizer` — the closed-form state saturating the aggregate
///   inequality of the configured operator;
/// * `bump` — a compactly supported product bump on `[-half_width,
///   half_width]^d`;
/// * `poly_gaussian` — polynomial × Gaussian (`degree` 0 or 1, `coordinate`
///   1-based), used by the joint-decay probe;
/// * `chirped_family` — the chirped slice family of a degenerate operator
///   (Gaussian along the active directions, a bump of the given `half_width`
///   across the kernel); joint-decay probe only.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub preset: String,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub state: Option<serde_json::Value>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub half_width: Option<f64>,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub coordinate: Option<usize>,
}

/// A resolved input: either closed-form Gaussian data or a sampleable shape.
/// The chirped slice family is a recipe rather than a function — only the
/// joint-decay probe builds and consumes it.
pub enum ResolvedInput {
    Gaussian(GaussianState),
    Bump { d: usize, half_width: f64 },
    Poly { pg: PolyGaussian, d: usize },
    ChirpedFamily { half_width: f64 },
}

impl ResolvedInput {
    pub fn gaussian(&self) -> Option<&GaussianState> {
        match self {
            ResolvedInput::Gaussian(g) => Some(g),
            _ => None,
        }
    }

    /// Pointwise evaluator usable by the grid sampler, when the preset
    /// describes a plain function.
    pub fn sampler(&self) -> Option<Box<dyn Fn(&[f64]) -> Complex64 + '_>> {
        match self {
            ResolvedInput::Gaussian(g) => Some(Box::new(move |x: &[f64]| g.evaluate(x))),
            ResolvedInput::Bump { half_width, .. } => {
                let hw = *half_width;
                Some(Box::new(move |x: &[f64]| {
                    let mut v = 1.0;
                    for &xi in x {
                        v *= smooth_bump(xi / hw);
                    }
                    Complex64::new(v, 0.0)
                }))
            }
            ResolvedInput::Poly { pg, .. } => Some(Box::new(move |x: &[f64]| pg.eval(x))),
            ResolvedInput::ChirpedFamily { .. } => None,
        }
    }
}

/// `exp(-1/(1-t²))` inside `|t| < 1`, zero outside.
pub fn smooth_bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// Deterministic random Gaussian state: symmetric real part, positive
/// definite imaginary part built as `M Mᵀ + I/2`, random linear form.
pub fn random_schwartz_state(d: usize, seed: u64) -> Result<GaussianState, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            let v = rng.random_range(-0.4..0.4);
            x[(i, j)] = v;
            x[(j, i)] = v;
        }
    }
    let m = DMatrix::<f64>::from_fn(d, d, |_, _| rng.random_range(-0.5..0.5));
    let y = &m * m.transpose() + DMatrix::<f64>::identity(d, d) * 0.5;
    let z = DMatrix::from_fn(d, d, |i, j| Complex64::new(x[(i, j)], y[(i, j)]));
    let w = nalgebra::DVector::from_fn(d, |i, _| {
        let _ = i;
        Complex64::new(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4))
    });
    GaussianState::new(z, w, Complex64::new(1.0, 0.0))
        .map_err(|e| CliError::config(format!("random state construction failed: {e}")))
}

impl InputSpec {
    fn check_fields(&self, allowed: &[&str]) -> Result<(), CliError> {
        let set: Vec<&str> = [
            ("d", self.d.is_some()),
            ("state", self.state.is_some()),
            ("seed", self.seed.is_some()),
            ("half_width", self.half_width.is_some()),
            ("degree", self.degree.is_some()),
            ("coordinate", self.coordinate.is_some()),
        ]
        .into_iter()
        .filter_map(|(n, s)| s.then_some(n))
        .collect();
        for field in set {
            if !allowed.contains(&field) {
                return Err(CliError::config(format!(
                    "input preset {:?} does not take the field {field:?}",
                    self.preset
                )));
            }
        }
        Ok(())
    }

    /// Resolves the preset against the operator (`s`, `frame`) it will be
    /// fed to. `seed_override` comes from `--seed`.
    pub fn resolve(
        &self,
        s: &SymplecticMatrix,
        frame: &SubspaceFrame,
        seed_override: Option<u64>,
    ) -> Result<ResolvedInput, CliError> {
        let d = s.dim();
        if let Some(want) = self.d {
            if want != d {
                return Err(CliError::config(format!(
                    "input dimension {want} does not match the operator dimension {d}"
                )));
            }
        }
        match self.preset.as_str() {
            "gaussian" => {
                self.check_fields(&["d", "state"])?;
                let g = match &self.state {
                    Some(value) => GaussianState::from_json(&value.to_string())
                        .map_err(|e| CliError::config(format!("gaussian state rejected: {e}")))?,
                    None => GaussianState::standard(d),
                };
                if g.dim() != d {
                    return Err(CliError::config(format!(
                        "gaussian state has dimension {}, the operator has {d}",
                        g.dim()
                    )));
                }
                Ok(ResolvedInput::Gaussian(g))
            }
            "random_schwartz" => {
                self.check_fields(&["d", "seed"])?;
                let seed = seed_override.or(self.seed).unwrap_or(0);
                Ok(ResolvedInput::Gaussian(random_schwartz_state(d, seed)?))
            }
            "extremizer" => {
                self.check_fields(&["d"])?;
                let state =
                    build_extremizer(s, frame, &ExtremizerSpec::centered(frame.rank()))
                        .map_err(|e| {
                            CliError::config(format!("extremizer construction failed: {e}"))
                        })?;
                Ok(ResolvedInput::Gaussian(state))
            }
            "bump" => {
                self.check_fields(&["d", "half_width"])?;
                let half_width = self.half_width.unwrap_or(1.0);
                if !(half_width.is_finite() && half_width > 0.0) {
                    return Err(CliError::config(format!(
                        "bump half width must be positive, got {half_width}"
                    )));
                }
                Ok(ResolvedInput::Bump { d, half_width })
            }
            "poly_gaussian" => {
                self.check_fields(&["d", "degree", "coordinate"])?;
                let degree = self.degree.unwrap_or(0);
                let pg = match degree {
                    0 => {
                        if self.coordinate.is_some() {
                            return Err(CliError::config(
                                "degree-0 polynomial takes no coordinate".into(),
                            ));
                        }
                        PolyGaussian::constant(d)
                    }
                    1 => {
                        let k = self.coordinate.unwrap_or(1);
                        if k == 0 || k > d {
                            return Err(CliError::config(format!(
                                "coordinate {k} is outside 1..={d} (coordinates are 1-based)"
                            )));
                        }
                        PolyGaussian::coordinate(d, k - 1)
                    }
                    other => {
                        return Err(CliError::config(format!(
                            "polynomial degree {other} not supported; use 0 or 1"
                        )))
                    }
                };
                Ok(ResolvedInput::Poly { pg, d })
            }
            "chirped_family" => {
                self.check_fields(&["d", "half_width"])?;
                let half_width = self.half_width.unwrap_or(2.0);
                if !(half_width.is_finite() && half_width > 0.0) {
                    return Err(CliError::config(format!(
                        "profile half width must be positive, got {half_width}"
                    )));
                }
                Ok(ResolvedInput::ChirpedFamily { half_width })
            }
            other => Err(CliError::config(format!(
                "unknown input preset {other:?}; expected one of gaussian, random_schwartz, \
                 extremizer, bump, poly_gaussian, chirped_family"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

/// Either a uniform symmetric grid (`n` points per axis on
/// `[-half_width, half_width]`) or explicit per-axis entries.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub half_width: Option<f64>,
    #[serde(default)]
    pub axes: Option<Vec<AxisConfig>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub n: usize,
    pub half_width: f64,
}

impl GridConfig {
    pub fn resolve(&self, d: usize) -> Result<GridSpec, CliError> {
        let axes: Vec<AxisSpec> = match (&self.axes, self.n, self.half_width) {
            (Some(list), None, None) => {
                if list.len() != d {
                    return Err(CliError::config(format!(
                        "grid lists {} axes, the operator needs {d}",
                        list.len()
                    )));
                }
                list.iter().map(|a| AxisSpec::symmetric(a.n, a.half_width)).collect()
            }
            (None, Some(n), Some(half_width)) => {
                (0..d).map(|_| AxisSpec::symmetric(n, half_width)).collect()
            }
            _ => {
                return Err(CliError::config(
                    "grid needs either {n, half_width} or a per-axis list, not a mixture".into(),
                ))
            }
        };
        GridSpec::new(axes).map_err(|e| CliError::config(format!("grid rejected: {e}")))
    }
}

// ---------------------------------------------------------------------------
// Kind-specific sections
// ---------------------------------------------------------------------------

/// Which dispersion pairing the `heisenberg` kind evaluates: `full`
/// (default), `directional` (1-based `direction`), `cartesian` (1-based
/// `space_axis`/`freq_axis`), or `all`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub direction: Option<usize>,
    #[serde(default)]
    pub space_axis: Option<usize>,
    #[serde(default)]
    pub freq_axis: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// `free_particle` or `harmonic_oscillator`.
    pub family: String,
    pub d: usize,
    #[serde(default)]
    pub omega: Option<f64>,
    pub t_start: f64,
    pub t_end: f64,
    /// Number of samples, endpoints included.
    pub steps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    /// Decay power `N` of the joint weight.
    pub weight_power: f64,
    pub radii: Vec<f64>,
    pub step: f64,
    /// Kernel-image offset point (length d); defaults to the origin.
    #[serde(default)]
    pub slice: Option<Vec<f64>>,
    /// `converging`, `diverging`, `inconclusive`, or `not_converging`;
    /// a mismatch makes the run exit with the violation code.
    #[serde(default)]
    pub expect: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorganSpec {
    pub p: f64,
    pub a: f64,
    /// Transform-side rate; exactly one of `b` and `ab_over_threshold`.
    #[serde(default)]
    pub b: Option<f64>,
    /// Sets `b` so that `a·b` equals this fraction of the critical product.
    #[serde(default)]
    pub ab_over_threshold: Option<f64>,
    pub radii: Vec<f64>,
    pub step: f64,
    /// `power` (default) or `linear` weight exponent.
    #[serde(default)]
    pub exponent: Option<String>,
    /// Support half width of the kernel-direction bump profile.
    #[serde(default)]
    pub profile_half_width: Option<f64>,
    /// Norm of the deterministic kernel slice points.
    #[serde(default)]
    pub slice_spread: Option<f64>,
    /// `pass` or `not_pass`; a mismatch exits with the violation code.
    #[serde(default)]
    pub expect: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSpec {
    /// `auto` (default), `quadrature`, or `chirp_fft`.
    #[serde(default)]
    pub mode: Option<String>,
    /// Custom output grid (free-form engines only).
    #[serde(default)]
    pub output_grid: Option<GridConfig>,
    /// Write the sampled input and the result as binary grid files.
    #[serde(default)]
    pub write_grids: Option<bool>,
    /// Clipped-mass fraction above which the run reports the soft-failure
    /// status; default 1e-3.
    #[serde(default)]
    pub warn_clipped: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtifactNames {
    #[serde(default)]
    pub summary: Option<String>,
    #[serde(default)]
    pub csv: Option<String>,
    #[serde(default)]
    pub input_grid: Option<String>,
    #[serde(default)]
    pub output_grid: Option<String>,
}
