//! Applying a metaplectic operator to sampled functions.
//!
//! Three evaluation engines share one integral representation. Writing the
//! output frequency as `ξ = ξ₁ + ξ₂` with `ξ₁` in the range of `B` (with
//! coordinates `η` in the frame `{B v_j}`) and `ξ₂` in the image of the
//! kernel under `A`, the transform of `f` is
//!
//! ```text
//! Ŝf(ξ) = μ_S · exp(iπ[(DB⁺ξ₁)·ξ₁ + (DCᵀξ₂)·ξ₂])
//!         · ∫ f(Vu + Dᵀξ₂) exp(iπ(VᵀB⁺AV)u·u) exp(2πi(VᵀCᵀξ₂)·u)
//!               exp(-2πi η·u) du
//! ```
//!
//! over `u ∈ ℝ^r`, `r` the rank of `B`. The engines:
//!
//! * **chirp-FFT** — when the kernel of `B` is spanned by coordinate axes and
//!   `B`, `A`, `DᵀA` act as scaled axis permutations on their relevant axes,
//!   the `u`-integral is a chirped Fourier transform evaluated per kernel
//!   slice with an FFT;
//! * **quadrature** — the same Riemann sum evaluated directly; on structured
//!   operators it touches exactly the sampled nodes, on arbitrary operators
//!   it interpolates multilinearly and reports how many requested samples
//!   fell outside the grid;
//! * **pointwise** — for a vanishing `B` the operator is a substitution with
//!   a quadratic phase and needs no integral at all.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::constants::constants;
use crate::error::{Error, Result};
use crate::frame::{build_frame, oblique_coordinates, SubspaceFrame};
use crate::grid::{AxisSpec, GridFunction, GridSpec};
use crate::symplectic::SymplecticMatrix;

const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * PI;
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Ceiling on `(output nodes) × (quadrature nodes)` before an apply call is
/// refused as unaffordable.
const QUADRATURE_WORK_BUDGET: u128 = 1 << 31;

/// How the caller wants the transform evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMode {
    /// Fastest exact engine available: FFT when structured, else quadrature.
    Auto,
    /// Direct summation of the integral representation.
    Quadrature,
    /// Per-slice chirped FFT; requires the axis structure.
    ChirpFft,
}

/// Which engine actually ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FastPath {
    Quadrature,
    ChirpFft,
    /// Vanishing `B`: substitution with a quadratic phase.
    Pointwise,
}

/// Diagnostics from one application.
#[derive(Debug, Clone)]
pub struct TransformReport {
    pub mode: FastPath,
    /// Fraction of requested samples that fell outside the input grid
    /// (quadrature and pointwise interpolation misses); zero on exact-node
    /// paths.
    pub clipped_fraction: f64,
}

/// Scaled-axis-permutation structure of an operator, when it exists.
#[derive(Debug, Clone)]
struct AxisStructure {
    /// Input axes carrying the active coordinates `u` (ascending).
    active_axes: Vec<usize>,
    /// Input axes carrying the kernel component (ascending).
    kernel_axes: Vec<usize>,
    /// `B e_{active[i]} = b_scale[i] · e_{b_image[i]}`.
    b_scale: Vec<f64>,
    b_image: Vec<usize>,
    /// `A e_{kernel[k]} = a_scale[k] · e_{a_image[k]}`.
    a_scale: Vec<f64>,
    a_image: Vec<usize>,
    /// `DᵀA e_{kernel[k]} = dta_scale[k] · e_{dta_image[k]}`, with the image
    /// axes filling the kernel set.
    dta_scale: Vec<f64>,
    dta_image: Vec<usize>,
}

/// A validated, grid-bound application plan for one operator.
#[derive(Debug)]
pub struct TransformPlan {
    s: SymplecticMatrix,
    frame: SubspaceFrame,
    mu_s: f64,
    structure: Option<AxisStructure>,
    resolved: FastPath,
    input_spec: GridSpec,
    output_spec: GridSpec,
    /// Quadrature grid over the active coordinates (free-form engine only).
    u_spec: Option<GridSpec>,
}

impl TransformPlan {
    /// Binds `s` to an input grid and resolves the evaluation engine,
    /// deriving the natural output grid.
    pub fn new(s: SymplecticMatrix, input_spec: GridSpec, mode: TransformMode) -> Result<TransformPlan> {
        let d = s.dim();
        if input_spec.d() != d {
            return Err(Error::dim("transform grid", format!("d = {d}"), format!("d = {}", input_spec.d())));
        }
        let frame = build_frame(s.b())?;
        let r = frame.rank();
        let mu_s = constants(&s, &frame)?.mu_s;

        if r == 0 {
            // Vanishing block: every mode runs the exact pointwise engine.
            let output_spec = image_bounding_box(s.a(), &input_spec)?;
            return Ok(TransformPlan {
                s,
                frame,
                mu_s,
                structure: None,
                resolved: FastPath::Pointwise,
                input_spec,
                output_spec,
                u_spec: None,
            });
        }

        let structure = detect_structure(&s, &frame);
        let resolved = match (mode, &structure) {
            (TransformMode::ChirpFft, None) => {
                return Err(Error::UnsupportedMode {
                    reason: "the operator's blocks are not scaled axis permutations on the axes \
                             split by the kernel, so the per-slice FFT form does not exist"
                        .into(),
                });
            }
            (TransformMode::ChirpFft, Some(_)) | (TransformMode::Auto, Some(_)) => FastPath::ChirpFft,
            (TransformMode::Quadrature, _) | (TransformMode::Auto, None) => FastPath::Quadrature,
        };

        let (output_spec, u_spec) = match &structure {
            Some(st) => (structured_output_spec(st, &input_spec)?, None),
            None => {
                let u = free_form_u_spec(&input_spec, &frame)?;
                (free_form_output_spec(&s, &input_spec, &u)?, Some(u))
            }
        };

        Ok(TransformPlan { s, frame, mu_s, structure, resolved, input_spec, output_spec, u_spec })
    }

    pub fn input_spec(&self) -> &GridSpec {
        &self.input_spec
    }

    pub fn output_spec(&self) -> &GridSpec {
        &self.output_spec
    }

    pub fn mode(&self) -> FastPath {
        self.resolved
    }

    pub fn structure_available(&self) -> bool {
        self.structure.is_some()
    }

    /// Replaces the derived output grid (free-form quadrature and pointwise
    /// engines only — the structured FFT layout dictates its own grid).
    pub fn with_output_spec(mut self, spec: GridSpec) -> Result<TransformPlan> {
        if spec.d() != self.input_spec.d() {
            return Err(Error::dim(
                "output grid",
                format!("d = {}", self.input_spec.d()),
                format!("d = {}", spec.d()),
            ));
        }
        if self.structure.is_some() {
            return Err(Error::UnsupportedMode {
                reason: "structured evaluation fixes the output grid; only the free-form engines \
                         accept a custom one"
                    .into(),
            });
        }
        self.output_spec = spec;
        Ok(self)
    }

    /// Applies the operator to a sampled function.
    pub fn apply(&self, f: &GridFunction) -> Result<(GridFunction, TransformReport)> {
        if f.spec() != &self.input_spec {
            return Err(Error::dim("transform input", "the grid the plan was built for", "a different grid"));
        }
        match self.resolved {
            FastPath::Pointwise => self.apply_pointwise(f),
            FastPath::ChirpFft => self.apply_structured(f, true),
            FastPath::Quadrature => match &self.structure {
                Some(_) => self.apply_structured(f, false),
                None => self.apply_free_form(f),
            },
        }
    }

    /// Substitution engine for a vanishing upper-right block:
    /// `Ŝf(x) = |det A|^{-1/2} e^{iπ(CA⁻¹x)·x} f(A⁻¹x)`.
    fn apply_pointwise(&self, f: &GridFunction) -> Result<(GridFunction, TransformReport)> {
        let a_inv = self.s.a().clone().try_inverse().ok_or(Error::Singular {
            factor: "upper-left block with a vanishing upper-right block".into(),
            value: 0.0,
        })?;
        let chirp = self.s.c() * &a_inv;
        let amp = 1.0 / self.s.a().determinant().abs().sqrt();
        let d = self.input_spec.d();

        let mut values = vec![Complex64::new(0.0, 0.0); self.output_spec.len()];
        let mut missed = 0usize;
        let mut y = vec![0.0; d];
        self.output_spec.iter_points().for_each(|idx, x| {
            for i in 0..d {
                y[i] = (0..d).map(|j| a_inv[(i, j)] * x[j]).sum();
            }
            match f.interpolate(&y) {
                Some(v) => {
                    let mut quad = 0.0;
                    for i in 0..d {
                        for j in 0..d {
                            quad += chirp[(i, j)] * x[j] * x[i];
                        }
                    }
                    values[idx] = v * amp * (I * PI * quad).exp();
                }
                None => missed += 1,
            }
        });
        let report = TransformReport {
            mode: FastPath::Pointwise,
            clipped_fraction: missed as f64 / self.output_spec.len() as f64,
        };
        Ok((GridFunction::new(self.output_spec.clone(), values)?, report))
    }

    /// Structured engine: per kernel slice, a chirped discrete transform over
    /// the active axes — FFT-accelerated or summed directly.
    fn apply_structured(&self, f: &GridFunction, use_fft: bool) -> Result<(GridFunction, TransformReport)> {
        let st = self.structure.as_ref().expect("resolved mode guarantees structure");
        let d = self.input_spec.d();
        let r = st.active_axes.len();
        let dk = st.kernel_axes.len();

        // Structural pseudoinverse of B and the phase matrices built from it.
        let mut b_pinv = DMatrix::<f64>::zeros(d, d);
        for i in 0..r {
            b_pinv[(st.active_axes[i], st.b_image[i])] = 1.0 / st.b_scale[i];
        }
        let dbp = self.s.d_block() * &b_pinv;
        let dct = self.s.d_block() * self.s.c().transpose();
        // Chirp on the active coordinates: (B⁺A) restricted to active axes.
        let bpa = &b_pinv * self.s.a();
        let q_u = DMatrix::<f64>::from_fn(r, r, |i, j| bpa[(st.active_axes[i], st.active_axes[j])]);

        // Input geometry per active axis and its centered dual.
        let axes_in: Vec<AxisSpec> = st.active_axes.iter().map(|&a| *self.input_spec.axis(a)).collect();
        let duals: Vec<AxisSpec> = axes_in.iter().map(|a| a.dual()).collect();

        // Output axis flips for negative scale factors.
        let flip_b: Vec<bool> = st.b_scale.iter().map(|&b| b < 0.0).collect();
        let rho: Vec<f64> = (0..dk).map(|k| st.a_scale[k] / st.dta_scale[k]).collect();
        let flip_rho: Vec<bool> = rho.iter().map(|&x| x < 0.0).collect();

        let mut planner = FftPlanner::<f64>::new();
        let ffts: Vec<_> = axes_in.iter().map(|a| planner.plan_fft_forward(a.n)).collect();

        let slice_len: usize = axes_in.iter().map(|a| a.n).product();
        let shape: Vec<usize> = axes_in.iter().map(|a| a.n).collect();

        let kernel_ns: Vec<usize> = st.kernel_axes.iter().map(|&k| self.input_spec.axis(k).n).collect();
        let n_slices: usize = kernel_ns.iter().product();

        let mut out_values = vec![Complex64::new(0.0, 0.0); self.output_spec.len()];
        let mut slice = vec![Complex64::new(0.0, 0.0); slice_len];
        let mut scratch: Vec<Complex64> = Vec::new();

        let mut kernel_multi = vec![0usize; dk];
        for slice_idx in 0..n_slices {
            // Decode the kernel multi-index (last kernel axis fastest).
            let mut rest = slice_idx;
            for k in (0..dk).rev() {
                kernel_multi[k] = rest % kernel_ns[k];
                rest /= kernel_ns[k];
            }

            // ξ₂ for this slice: the input coordinate on the image axis of
            // DᵀA determines the coefficient on the image axis of A.
            let mut xi2 = vec![0.0; d];
            for k in 0..dk {
                let axis = st.kernel_axes[k];
                let x_val = self.input_spec.axis(axis).coord(kernel_multi[k]);
                let kp = st.dta_image.iter().position(|&t| t == axis).expect("image fills the kernel set");
                xi2[st.a_image[kp]] += rho[kp] * x_val;
            }
            let cross: Vec<f64> = {
                let ct_xi2: Vec<f64> = (0..d)
                    .map(|i| (0..d).map(|j| self.s.c()[(j, i)] * xi2[j]).sum())
                    .collect();
                st.active_axes.iter().map(|&a| ct_xi2[a]).collect()
            };
            let mut quad2 = 0.0;
            for i in 0..d {
                for j in 0..d {
                    quad2 += dct[(i, j)] * xi2[j] * xi2[i];
                }
            }
            let slice_phase = (I * PI * quad2).exp();

            // Gather the slice and attach the u-dependent phases.
            let mut u_multi = vec![0usize; r];
            for su in 0..slice_len {
                let mut rest = su;
                for i in (0..r).rev() {
                    u_multi[i] = rest % shape[i];
                    rest /= shape[i];
                }
                let mut in_multi = vec![0usize; d];
                for i in 0..r {
                    in_multi[st.active_axes[i]] = u_multi[i];
                }
                for k in 0..dk {
                    in_multi[st.kernel_axes[k]] = kernel_multi[k];
                }
                let val = f.values()[self.input_spec.flatten(&in_multi)];
                let u: Vec<f64> = (0..r).map(|i| axes_in[i].coord(u_multi[i])).collect();
                let mut chirp_u = 0.0;
                for i in 0..r {
                    for j in 0..r {
                        chirp_u += q_u[(i, j)] * u[i] * u[j];
                    }
                }
                let cross_u: f64 = (0..r).map(|i| cross[i] * u[i]).sum();
                slice[su] = val * (I * (PI * chirp_u + TWO_PI * cross_u)).exp();
            }

            // Centered discrete Fourier transform along every active axis.
            for axis in 0..r {
                centered_dft_along_axis(
                    &mut slice,
                    &shape,
                    axis,
                    &axes_in[axis],
                    &duals[axis],
                    use_fft.then(|| ffts[axis].clone()),
                    &mut scratch,
                );
            }

            // Scatter into the output grid with the prefactor phases.
            let mut out_multi = vec![0usize; d];
            for k in 0..dk {
                let kp = st
                    .dta_image
                    .iter()
                    .position(|&t| t == st.kernel_axes[k])
                    .expect("image fills the kernel set");
                let n = kernel_ns[k];
                out_multi[st.a_image[kp]] =
                    if flip_rho[kp] { n - 1 - kernel_multi[k] } else { kernel_multi[k] };
            }
            for (su, &value) in slice.iter().enumerate() {
                let mut rest = su;
                for i in (0..r).rev() {
                    u_multi[i] = rest % shape[i];
                    rest /= shape[i];
                }
                let mut xi1 = vec![0.0; d];
                for i in 0..r {
                    let nu = duals[i].coord(u_multi[i]);
                    xi1[st.b_image[i]] = st.b_scale[i] * nu;
                    out_multi[st.b_image[i]] =
                        if flip_b[i] { shape[i] - 1 - u_multi[i] } else { u_multi[i] };
                }
                let mut quad1 = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        quad1 += dbp[(i, j)] * xi1[j] * xi1[i];
                    }
                }
                let out_idx = self.output_spec.flatten(&out_multi);
                out_values[out_idx] = value * slice_phase * (I * PI * quad1).exp() * self.mu_s;
            }
        }

        let report = TransformReport {
            mode: if use_fft { FastPath::ChirpFft } else { FastPath::Quadrature },
            clipped_fraction: 0.0,
        };
        Ok((GridFunction::new(self.output_spec.clone(), out_values)?, report))
    }

    /// Free-form quadrature: direct Riemann sum with multilinear
    /// interpolation of the input, valid for arbitrary operators.
    fn apply_free_form(&self, f: &GridFunction) -> Result<(GridFunction, TransformReport)> {
        let d = self.input_spec.d();
        let r = self.frame.rank();
        let u_spec = self.u_spec.as_ref().expect("free-form plan carries a quadrature grid");

        let work = self.output_spec.len() as u128 * u_spec.len() as u128;
        if work > QUADRATURE_WORK_BUDGET {
            return Err(Error::InvalidGrid {
                reason: format!("quadrature needs {work} samples, over the budget {QUADRATURE_WORK_BUDGET}"),
            });
        }

        let coords = oblique_coordinates(&self.s, &self.frame)?;
        let v = self.frame.v();
        let bv = self.s.b() * v;
        let dbp = self.s.d_block() * self.frame.b_pinv();
        let dct = self.s.d_block() * self.s.c().transpose();
        let bpa = self.frame.b_pinv() * self.s.a();
        let q_u = v.transpose() * &bpa * v;
        let cell = u_spec.cell_volume();

        // Pre-tabulate the quadrature nodes and their chirp phases.
        let mut u_nodes: Vec<Vec<f64>> = Vec::with_capacity(u_spec.len());
        let mut u_phases: Vec<Complex64> = Vec::with_capacity(u_spec.len());
        u_spec.iter_points().for_each(|_, u| {
            let mut chirp_u = 0.0;
            for i in 0..r {
                for j in 0..r {
                    chirp_u += q_u[(i, j)] * u[i] * u[j];
                }
            }
            u_nodes.push(u.to_vec());
            u_phases.push((I * PI * chirp_u).exp());
        });

        let mut out_values = vec![Complex64::new(0.0, 0.0); self.output_spec.len()];
        let mut requested = 0u64;
        let mut missed = 0u64;
        let mut x = vec![0.0; d];
        self.output_spec.iter_points().for_each(|idx, xi| {
            // Split ξ into the range part (coordinates η) and the rest.
            let eta: Vec<f64> = (0..r)
                .map(|j| (0..d).map(|i| coords.freq[(j, i)] * xi[i]).sum())
                .collect();
            let mut xi2 = xi.to_vec();
            for i in 0..d {
                for j in 0..r {
                    xi2[i] -= bv[(i, j)] * eta[j];
                }
            }
            let xi1: Vec<f64> = (0..d).map(|i| xi[i] - xi2[i]).collect();

            let mut quad = 0.0;
            for i in 0..d {
                for j in 0..d {
                    quad += dbp[(i, j)] * xi1[j] * xi1[i] + dct[(i, j)] * xi2[j] * xi2[i];
                }
            }
            let prefactor = (I * PI * quad).exp() * self.mu_s;

            // Kernel shift Dᵀξ₂ and active-to-frequency coupling Cᵀξ₂.
            let y2: Vec<f64> = (0..d)
                .map(|i| (0..d).map(|j| self.s.d_block()[(j, i)] * xi2[j]).sum())
                .collect();
            let ct_xi2: Vec<f64> = (0..d)
                .map(|i| (0..d).map(|j| self.s.c()[(j, i)] * xi2[j]).sum())
                .collect();
            let cross: Vec<f64> = (0..r)
                .map(|jj| (0..d).map(|i| v[(i, jj)] * ct_xi2[i]).sum())
                .collect();

            let mut acc = Complex64::new(0.0, 0.0);
            for (node, phase) in u_nodes.iter().zip(u_phases.iter()) {
                for i in 0..d {
                    x[i] = y2[i];
                    for j in 0..r {
                        x[i] += v[(i, j)] * node[j];
                    }
                }
                requested += 1;
                match f.interpolate(&x) {
                    None => missed += 1,
                    Some(fv) => {
                        let mut lin = 0.0;
                        for j in 0..r {
                            lin += (cross[j] - eta[j]) * node[j];
                        }
                        acc += fv * phase * (I * TWO_PI * lin).exp();
                    }
                }
            }
            out_values[idx] = prefactor * acc * cell;
        });

        let report = TransformReport {
            mode: FastPath::Quadrature,
            clipped_fraction: if requested > 0 { missed as f64 / requested as f64 } else { 0.0 },
        };
        Ok((GridFunction::new(self.output_spec.clone(), out_values)?, report))
    }
}

/// Centered discrete transform along one axis of a row-major array:
/// `out[m] = Δu · Σ_j in[j] · exp(-2πi ν_m u_j)` with `u_j` the axis nodes
/// and `ν_m` the dual nodes. With an FFT plan the sum is factorized into
/// pre-phase, FFT, and post-phase; without one it is summed literally.
fn centered_dft_along_axis(
    data: &mut [Complex64],
    shape: &[usize],
    axis: usize,
    ax: &AxisSpec,
    dual: &AxisSpec,
    fft: Option<std::sync::Arc<dyn rustfft::Fft<f64>>>,
    scratch: &mut Vec<Complex64>,
) {
    let n = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();

    // Pre-phase e^{-2πi ν₀ j Δu} (with ν₀ Δu = -⌊n/2⌋/n) and post-phase
    // Δu e^{-2πi ν_m u₀}, used only on the factorized path.
    let half = (n / 2) as f64;
    let pre: Vec<Complex64> = (0..n)
        .map(|j| (I * TWO_PI * half * j as f64 / n as f64).exp())
        .collect();
    let post: Vec<Complex64> = (0..n)
        .map(|m| (-I * TWO_PI * dual.coord(m) * ax.min).exp() * ax.step)
        .collect();

    scratch.resize(n, Complex64::new(0.0, 0.0));
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..outer {
        for s in 0..stride {
            let base = o * n * stride + s;
            for j in 0..n {
                line[j] = data[base + j * stride];
            }
            match &fft {
                Some(plan) => {
                    for j in 0..n {
                        line[j] *= pre[j];
                    }
                    plan.process(&mut line);
                    for m in 0..n {
                        line[m] *= post[m];
                    }
                }
                None => {
                    for (m, slot) in scratch.iter_mut().enumerate() {
                        let nu = dual.coord(m);
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (j, &v) in line.iter().enumerate() {
                            let angle = -TWO_PI * nu * ax.coord(j);
                            acc += v * Complex64::new(angle.cos(), angle.sin());
                        }
                        *slot = acc * ax.step;
                    }
                    line.copy_from_slice(scratch);
                }
            }
            for m in 0..n {
                data[base + m * stride] = line[m];
            }
        }
    }
}

/// Detects the scaled-axis-permutation structure, if the operator has it.
fn detect_structure(s: &SymplecticMatrix, frame: &SubspaceFrame) -> Option<AxisStructure> {
    let d = s.dim();
    let kernel_axes = frame.kernel_axes(1e-9)?;
    let active_axes: Vec<usize> = (0..d).filter(|a| !kernel_axes.contains(a)).collect();
    if active_axes.len() != frame.rank() {
        return None;
    }

    let single = |m: &DMatrix<f64>, col: usize| -> Option<(f64, usize)> {
        let tol = 1e-10 * m.amax().max(f64::MIN_POSITIVE);
        let mut found: Option<(f64, usize)> = None;
        for row in 0..d {
            if m[(row, col)].abs() > tol {
                if found.is_some() {
                    return None;
                }
                found = Some((m[(row, col)], row));
            }
        }
        found
    };

    let mut b_scale = Vec::new();
    let mut b_image = Vec::new();
    for &a in &active_axes {
        let (sc, im) = single(s.b(), a)?;
        b_scale.push(sc);
        b_image.push(im);
    }
    let dta = s.d_block().transpose() * s.a();
    let mut a_scale = Vec::new();
    let mut a_image = Vec::new();
    let mut dta_scale = Vec::new();
    let mut dta_image = Vec::new();
    for &k in &kernel_axes {
        let (sa, ia) = single(s.a(), k)?;
        a_scale.push(sa);
        a_image.push(ia);
        let (sd, id) = single(&dta, k)?;
        dta_scale.push(sd);
        dta_image.push(id);
    }

    // The range images and the kernel images must partition the axes, and
    // DᵀA must map the kernel set onto itself.
    let mut seen = vec![false; d];
    for &im in b_image.iter().chain(a_image.iter()) {
        if seen[im] {
            return None;
        }
        seen[im] = true;
    }
    if !seen.iter().all(|&taken| taken) {
        return None;
    }
    let mut seen_k = vec![false; d];
    for &im in &dta_image {
        if !kernel_axes.contains(&im) || seen_k[im] {
            return None;
        }
        seen_k[im] = true;
    }

    Some(AxisStructure {
        active_axes,
        kernel_axes,
        b_scale,
        b_image,
        a_scale,
        a_image,
        dta_scale,
        dta_image,
    })
}

/// Maps an axis through multiplication by `rho`, keeping the step positive.
fn scaled_axis(src: &AxisSpec, rho: f64) -> AxisSpec {
    if rho >= 0.0 {
        AxisSpec { n: src.n, min: rho * src.min, step: rho * src.step }
    } else {
        AxisSpec { n: src.n, min: rho * src.max(), step: -rho * src.step }
    }
}

/// Output grid of the structured engine: scaled duals on the range-image
/// axes, scaled copies of the kernel-slice axes elsewhere.
fn structured_output_spec(st: &AxisStructure, input: &GridSpec) -> Result<GridSpec> {
    let d = input.d();
    let mut axes = vec![AxisSpec { n: 2, min: 0.0, step: 1.0 }; d];
    for (i, &a) in st.active_axes.iter().enumerate() {
        axes[st.b_image[i]] = scaled_axis(&input.axis(a).dual(), st.b_scale[i]);
    }
    for k in 0..st.kernel_axes.len() {
        let rho = st.a_scale[k] / st.dta_scale[k];
        axes[st.a_image[k]] = scaled_axis(input.axis(st.dta_image[k]), rho);
    }
    GridSpec::new(axes)
}

/// Bounding box of the input box under `x ↦ Ax`, node counts preserved.
fn image_bounding_box(a: &DMatrix<f64>, input: &GridSpec) -> Result<GridSpec> {
    let d = input.d();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for corner in 0..(1usize << d) {
        let x: Vec<f64> = (0..d)
            .map(|k| {
                let ax = input.axis(k);
                if (corner >> k) & 1 == 1 {
                    ax.max()
                } else {
                    ax.min
                }
            })
            .collect();
        for i in 0..d {
            let yi: f64 = (0..d).map(|j| a[(i, j)] * x[j]).sum();
            lo[i] = lo[i].min(yi);
            hi[i] = hi[i].max(yi);
        }
    }
    let axes: Vec<AxisSpec> = (0..d)
        .map(|i| {
            let n = input.axis(i).n;
            let width = (hi[i] - lo[i]).max(f64::MIN_POSITIVE);
            AxisSpec { n, min: lo[i], step: width / (n - 1) as f64 }
        })
        .collect();
    GridSpec::new(axes)
}

/// Quadrature grid over the active coordinates: per direction, the radius is
/// the input box mapped through that frame column and the step the finest
/// input step.
fn free_form_u_spec(input: &GridSpec, frame: &SubspaceFrame) -> Result<GridSpec> {
    let d = input.d();
    let r = frame.rank();
    let v = frame.v();
    let step = input.axes().iter().map(|a| a.step).fold(f64::INFINITY, f64::min);
    let axes: Vec<AxisSpec> = (0..r)
        .map(|j| {
            let radius: f64 = (0..d)
                .map(|i| v[(i, j)].abs() * input.axis(i).min.abs().max(input.axis(i).max().abs()))
                .sum();
            let radius = radius.max(step);
            let n = ((2.0 * radius / step).ceil() as usize).clamp(2, 1 << 12);
            AxisSpec::symmetric(n, radius)
        })
        .collect();
    GridSpec::new(axes)
}

/// Default output box for the free-form engine: covers the image of the
/// quadrature band under `B` plus the image of the input box under `A`.
fn free_form_output_spec(s: &SymplecticMatrix, input: &GridSpec, u_spec: &GridSpec) -> Result<GridSpec> {
    let b_norm = crate::linalg::spectral_norm(s.b());
    let a_norm = crate::linalg::spectral_norm(s.a());
    let nyquist: f64 = u_spec
        .axes()
        .iter()
        .map(|a| {
            let du = a.dual();
            du.min.abs().max(du.max().abs()).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    let d = input.d();
    let mut x_radius: f64 = 0.0;
    for corner in 0..(1usize << d) {
        let norm_sq: f64 = (0..d)
            .map(|k| {
                let ax = input.axis(k);
                let v = if (corner >> k) & 1 == 1 { ax.max() } else { ax.min };
                v * v
            })
            .sum();
        x_radius = x_radius.max(norm_sq.sqrt());
    }
    let radius = (b_norm * nyquist + a_norm * x_radius).max(1.0);
    let n = input.axes().iter().map(|a| a.n).max().unwrap_or(64);
    GridSpec::new(vec![AxisSpec::symmetric(n, radius); d])
}

/// Finds the unit phase best aligning `candidate` to `reference` and returns
/// the aligned copy, the phase, and the relative L² residual after alignment.
pub fn phase_align(reference: &GridFunction, candidate: &GridFunction) -> Result<(GridFunction, Complex64, f64)> {
    let inner = reference.inner(candidate)?;
    let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
    let mut aligned = candidate.clone();
    for v in aligned.values_mut() {
        *v *= phase;
    }
    let mut diff_sq = 0.0;
    for (a, b) in aligned.values().iter().zip(reference.values().iter()) {
        diff_sq += (a - b).norm_sqr();
    }
    diff_sq *= reference.spec().cell_volume();
    let denom = reference.norm_sq().max(f64::MIN_POSITIVE);
    Ok((aligned, phase, (diff_sq / denom).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{transform_gaussian, GaussianState};
    use crate::operators::{chirp, fourier, multiplier, partial_fourier, rescale};
    use nalgebra::dmatrix;

    fn oracle_residual(
        s: &SymplecticMatrix,
        state: &GaussianState,
        plan: &TransformPlan,
        f: &GridFunction,
    ) -> f64 {
        let (got, _) = plan.apply(f).unwrap();
        let image = transform_gaussian(s, state).unwrap();
        let want = image.to_grid(plan.output_spec()).unwrap();
        let (_, _, residual) = phase_align(&want, &got).unwrap();
        residual
    }

    #[test]
    fn fourier_transform_of_standard_gaussian_is_itself() {
        let s = fourier(1).unwrap();
        let spec = GridSpec::new(vec![AxisSpec::symmetric(256, 10.0)]).unwrap();
        let state = GaussianState::standard(1);
        let f = state.to_grid(&spec).unwrap();

        let plan = TransformPlan::new(s.clone(), spec, TransformMode::ChirpFft).unwrap();
        assert_eq!(plan.mode(), FastPath::ChirpFft);
        let residual = oracle_residual(&s, &state, &plan, &f);
        assert!(residual < 1e-10, "residual {residual}");
    }

    #[test]
    fn quadrature_and_fft_agree_on_structured_operators() {
        let spec = GridSpec::new(vec![AxisSpec::symmetric(128, 9.0)]).unwrap();
        let state = GaussianState::new(
            dmatrix![Complex64::new(0.4, 0.9)],
            nalgebra::DVector::from_vec(vec![Complex64::new(0.3, -0.2)]),
            Complex64::new(1.0, 0.5),
        )
        .unwrap();
        let f = state.to_grid(&spec).unwrap();

        for s in [fourier(1).unwrap(), multiplier(dmatrix![0.7]).unwrap()] {
            let fft_plan = TransformPlan::new(s.clone(), spec.clone(), TransformMode::ChirpFft).unwrap();
            let quad_plan = TransformPlan::new(s.clone(), spec.clone(), TransformMode::Quadrature).unwrap();
            let (via_fft, rep_f) = fft_plan.apply(&f).unwrap();
            let (via_quad, rep_q) = quad_plan.apply(&f).unwrap();
            assert_eq!(rep_f.mode, FastPath::ChirpFft);
            assert_eq!(rep_q.mode, FastPath::Quadrature);
            let mut diff = 0.0f64;
            for (a, b) in via_fft.values().iter().zip(via_quad.values().iter()) {
                diff = diff.max((a - b).norm());
            }
            assert!(diff < 1e-10, "engines disagree by {diff}");
        }
    }

    #[test]
    fn partial_transform_with_kernel_chirp_matches_gaussian_image() {
        // Chirp on the kernel axis composed after a partial transform: the
        // structured engine must reproduce the closed-form image, including
        // the kernel-side quadratic phase.
        let q = dmatrix![0.7, 0.0; 0.0, 0.0];
        let s = chirp(q).unwrap().compose(&partial_fourier(2, &[1]).unwrap()).unwrap();
        let spec = GridSpec::new(vec![AxisSpec::symmetric(64, 5.0), AxisSpec::symmetric(64, 5.0)]).unwrap();
        let state = GaussianState::standard(2);
        let f = state.to_grid(&spec).unwrap();

        let plan = TransformPlan::new(s.clone(), spec, TransformMode::Auto).unwrap();
        assert_eq!(plan.mode(), FastPath::ChirpFft);
        let residual = oracle_residual(&s, &state, &plan, &f);
        assert!(residual < 1e-8, "residual {residual}");
    }

    #[test]
    fn free_form_quadrature_handles_skewed_operators() {
        // Frequency-side skew: the kernel image under A is not orthogonal to
        // the range of B, so no axis structure exists and the oblique
        // splitting runs with interpolation.
        let q = dmatrix![0.4, 0.3; 0.3, -0.2];
        let s = partial_fourier(2, &[1]).unwrap().compose(&chirp(q).unwrap()).unwrap();
        let spec = GridSpec::new(vec![AxisSpec::symmetric(128, 6.0), AxisSpec::symmetric(128, 6.0)]).unwrap();
        let state = GaussianState::standard(2);
        let f = state.to_grid(&spec).unwrap();

        let err = TransformPlan::new(s.clone(), spec.clone(), TransformMode::ChirpFft).unwrap_err();
        assert!(matches!(err, Error::UnsupportedMode { .. }));

        let plan = TransformPlan::new(s.clone(), spec, TransformMode::Auto)
            .unwrap()
            .with_output_spec(
                GridSpec::new(vec![AxisSpec::symmetric(48, 6.0), AxisSpec::symmetric(48, 6.0)]).unwrap(),
            )
            .unwrap();
        assert_eq!(plan.mode(), FastPath::Quadrature);
        let (got, report) = plan.apply(&f).unwrap();
        assert!(report.clipped_fraction < 0.35, "clipped {}", report.clipped_fraction);

        let image = transform_gaussian(&s, &state).unwrap();
        let want = image.to_grid(plan.output_spec()).unwrap();
        let (_, _, residual) = phase_align(&want, &got).unwrap();
        assert!(residual < 2e-2, "residual {residual}");
    }

    #[test]
    fn quadrature_cross_coupling_matches_gaussian_image() {
        // Chirps on both sides of a partial transform produce a genuine
        // coupling between the kernel slice and the active frequencies; the
        // oblique-splitting quadrature must track it.
        let q1 = dmatrix![0.2, -0.4; -0.4, 0.1];
        let q2 = dmatrix![0.5, 0.25; 0.25, -0.3];
        let s = chirp(q1)
            .unwrap()
            .compose(&partial_fourier(2, &[1]).unwrap())
            .unwrap()
            .compose(&chirp(q2).unwrap())
            .unwrap();
        let spec = GridSpec::new(vec![AxisSpec::symmetric(128, 6.0), AxisSpec::symmetric(128, 6.0)]).unwrap();
        let state = GaussianState::standard(2);
        let f = state.to_grid(&spec).unwrap();

        let plan = TransformPlan::new(s.clone(), spec, TransformMode::Auto)
            .unwrap()
            .with_output_spec(
                GridSpec::new(vec![AxisSpec::symmetric(48, 6.0), AxisSpec::symmetric(48, 6.0)]).unwrap(),
            )
            .unwrap();
        assert_eq!(plan.mode(), FastPath::Quadrature);
        let (got, _) = plan.apply(&f).unwrap();

        let image = transform_gaussian(&s, &state).unwrap();
        let want = image.to_grid(plan.output_spec()).unwrap();
        let (_, _, residual) = phase_align(&want, &got).unwrap();
        assert!(residual < 2e-2, "residual {residual}");
    }

    #[test]
    fn vanishing_block_is_a_boxed_substitution() {
        let e = dmatrix![0.5, 0.0; 0.0, 2.0];
        let s = rescale(&e).unwrap();
        let spec = GridSpec::new(vec![AxisSpec::symmetric(64, 4.0), AxisSpec::symmetric(64, 4.0)]).unwrap();
        let state = GaussianState::standard(2);
        let f = state.to_grid(&spec).unwrap();

        let plan = TransformPlan::new(s.clone(), spec, TransformMode::Auto).unwrap();
        assert_eq!(plan.mode(), FastPath::Pointwise);
        // The output box is the image of the input box under A = E⁻¹.
        assert!((plan.output_spec().axis(0).min - (-8.0)).abs() < 1e-12);
        assert!((plan.output_spec().axis(1).min - (-2.0)).abs() < 1e-12);

        let residual = oracle_residual(&s, &state, &plan, &f);
        assert!(residual < 1e-6, "residual {residual}");
    }

    #[test]
    fn structured_grid_unitarity() {
        let s = fourier(2).unwrap();
        let spec = GridSpec::new(vec![AxisSpec::symmetric(64, 8.0), AxisSpec::symmetric(64, 8.0)]).unwrap();
        let f = GaussianState::standard(2).to_grid(&spec).unwrap();
        let plan = TransformPlan::new(s, spec, TransformMode::ChirpFft).unwrap();
        let (out, _) = plan.apply(&f).unwrap();
        assert!((out.norm_sq() - f.norm_sq()).abs() < 1e-10 * f.norm_sq());
    }

    #[test]
    fn phase_alignment_recovers_a_global_phase() {
        let spec = GridSpec::new(vec![AxisSpec::symmetric(32, 5.0)]).unwrap();
        let f = GaussianState::standard(1).to_grid(&spec).unwrap();
        let mut rotated = f.clone();
        let twist = Complex64::new(0.6, 0.8);
        for v in rotated.values_mut() {
            *v *= twist;
        }
        let (_, phase, residual) = phase_align(&f, &rotated).unwrap();
        assert!(residual < 1e-12);
        assert!((phase * twist - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
